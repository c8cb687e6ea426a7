#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace darboux {

class SurfacePatch;
class ParamCurve;

/// Monotone map between a curve parameter t and arc length s, built by
/// adaptive quadrature of the embedded speed |dx/dt|.
///
/// knots[0] maps to cumulative[0] = 0 and knots.back() to total_length().
/// The inverse lookup param_at(s) is accurate to the quadrature tolerance.
class ArcLengthTable {
public:
    ArcLengthTable() = default;
    ArcLengthTable(std::vector<double> knots, std::vector<double> cumulative,
                   std::function<double(double)> speed);

    double total_length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

    /// Arc length of the curve restricted to [knots.front(), t].
    double arclength_at(double t) const;

    /// Inverse map s -> t. Throws OutOfRange for s outside [0, total_length]
    /// (with a tiny round-off slack at the ends).
    double param_at(double s) const;

private:
    std::vector<double> knots_;
    std::vector<double> cumulative_;
    std::vector<double> slopes_;  // monotone cubic slopes of t as a function of s
    std::function<double(double)> speed_;

    double interp_initial_guess(double s, std::size_t seg) const;
};

/// Adaptive composite 5-point Gauss-Legendre integral of f over [a, b];
/// panels are bisected until the two-half estimate agrees with the one-panel
/// estimate to 1e-10 relative.
double adaptive_gauss5(const std::function<double(double)>& f, double a, double b);

/// Build the t <-> s table for a curve on a patch with n_knots uniformly
/// spaced t-knots (n_knots >= 2). The table keeps the patch and curve alive:
/// inverse lookups re-integrate the embedded speed. Throws DegenerateSpeed
/// when that speed falls below eps_reg at a quadrature node.
ArcLengthTable arc_length_table(std::shared_ptr<const SurfacePatch> patch,
                                std::shared_ptr<const ParamCurve> curve, int n_knots);

/// Inverse map as a free function, mirroring the table method.
double reparameterize(const ArcLengthTable& table, double s);

}  // namespace darboux
