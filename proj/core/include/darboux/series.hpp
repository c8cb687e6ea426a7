#pragma once

#include <cstddef>
#include <vector>

namespace darboux {

/// Scalar samples on a uniform grid of arc-length stations.
///
/// The grid is stored explicitly; the constructor validates uniform spacing
/// (deviation below 1e-12 of the span) so that finite-difference stencils can
/// assume a single step h.
class ScalarSeries {
public:
    ScalarSeries() = default;
    ScalarSeries(std::vector<double> grid, std::vector<double> values);

    /// Convenience constructor for a grid s_i = s0 + i*h, i = 0..n-1.
    static ScalarSeries uniform(double s0, double h, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double spacing() const { return h_; }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double grid_at(std::size_t i) const { return grid_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double max_abs() const;
    double rms() const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    double h_ = 0.0;
};

/// d/ds of the sampled values: central differences at interior points,
/// second-order one-sided stencils at the ends. Exact on quadratics.
/// Throws TooFewSamples for fewer than three points.
ScalarSeries fd_derivative(const ScalarSeries& series);

/// Remove artificial 2*pi jumps so the samples trace a continuous branch.
/// The first sample fixes the branch.
std::vector<double> unwrap_angles(const std::vector<double>& angles);

}  // namespace darboux
