#include "darboux/arclength.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "darboux/curve.hpp"
#include "darboux/errors.hpp"
#include "darboux/surface.hpp"

namespace darboux {

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[5] = {-0.90617984593866396, -0.53846931010568311, 0.0,
                           0.53846931010568311, 0.90617984593866396};
constexpr double kGw[5] = {0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
                           0.47862867049936647, 0.23692688505618909};

double gauss5(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        acc += kGw[i] * f(mid + half * kGx[i]);
    }
    return acc * half;
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double whole,
                      int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss5(f, a, mid);
    const double right = gauss5(f, mid, b);
    const double split = left + right;
    const double diff = std::abs(split - whole);
    if (depth >= 48 || diff <= 1e-10 * std::abs(split) + 1e-15) {
        return split;
    }
    return adaptive_panel(f, a, mid, left, depth + 1) +
           adaptive_panel(f, mid, b, right, depth + 1);
}

// Fritsch-Carlson slopes for a monotone cubic interpolant of y(x).
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) return m;
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    }
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m[i] = m[i + 1] = 0.0;
            continue;
        }
        const double alpha = m[i] / d[i];
        const double beta = m[i + 1] / d[i];
        const double r = alpha * alpha + beta * beta;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            m[i] = tau * alpha * d[i];
            m[i + 1] = tau * beta * d[i];
        }
    }
    return m;
}

}  // namespace

double adaptive_gauss5(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    return adaptive_panel(f, a, b, gauss5(f, a, b), 0);
}

ArcLengthTable::ArcLengthTable(std::vector<double> knots, std::vector<double> cumulative,
                               std::function<double(double)> speed)
    : knots_(std::move(knots)), cumulative_(std::move(cumulative)), speed_(std::move(speed)) {
    if (knots_.size() != cumulative_.size() || knots_.size() < 2) {
        throw Error("ArcLengthTable: need matching knot/length arrays with >= 2 entries");
    }
    for (std::size_t i = 1; i < cumulative_.size(); ++i) {
        if (!(cumulative_[i] > cumulative_[i - 1])) {
            throw Error("ArcLengthTable: cumulative length must be strictly increasing");
        }
    }
    // Slopes of t(s), the direction we invert in.
    slopes_ = monotone_slopes(cumulative_, knots_);
}

double ArcLengthTable::arclength_at(double t) const {
    const double t0 = knots_.front();
    const double t1 = knots_.back();
    const double slack = 1e-12 * (1.0 + std::abs(t1 - t0));
    if (t < t0 - slack || t > t1 + slack) {
        throw OutOfRange("arclength_at: t = " + std::to_string(t) + " outside [" +
                         std::to_string(t0) + ", " + std::to_string(t1) + "]");
    }
    const double tc = std::clamp(t, t0, t1);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), tc);
    std::size_t i = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    i = std::min(i, knots_.size() - 2);
    return cumulative_[i] + adaptive_gauss5(speed_, knots_[i], tc);
}

double ArcLengthTable::interp_initial_guess(double s, std::size_t seg) const {
    // Monotone cubic (Hermite) interpolation of t(s) on the bracketing segment.
    const double s0 = cumulative_[seg], s1 = cumulative_[seg + 1];
    const double t0 = knots_[seg], t1 = knots_[seg + 1];
    const double h = s1 - s0;
    const double w = (s - s0) / h;
    const double h00 = (1.0 + 2.0 * w) * (1.0 - w) * (1.0 - w);
    const double h10 = w * (1.0 - w) * (1.0 - w);
    const double h01 = w * w * (3.0 - 2.0 * w);
    const double h11 = w * w * (w - 1.0);
    return h00 * t0 + h10 * h * slopes_[seg] + h01 * t1 + h11 * h * slopes_[seg + 1];
}

double ArcLengthTable::param_at(double s) const {
    const double total = total_length();
    const double slack = 1e-9 * (1.0 + total);
    if (s < -slack || s > total + slack) {
        throw OutOfRange("param_at: s = " + std::to_string(s) + " outside [0, " +
                         std::to_string(total) + "]");
    }
    const double sc = std::clamp(s, 0.0, total);
    if (sc <= 0.0) return knots_.front();
    if (sc >= total) return knots_.back();

    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), sc);
    std::size_t seg =
        (it == cumulative_.begin()) ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    seg = std::min(seg, cumulative_.size() - 2);

    double lo = knots_[seg], hi = knots_[seg + 1];
    double t = std::clamp(interp_initial_guess(sc, seg), lo, hi);

    // Newton on g(t) = arclength(t) - s with a bisection bracket; g is
    // strictly increasing, so the bracket never collapses on the wrong side.
    const double tol = 1e-12 * std::max(1.0, total);
    for (int iter = 0; iter < 60; ++iter) {
        const double g = cumulative_[seg] + adaptive_gauss5(speed_, knots_[seg], t) - sc;
        if (std::abs(g) <= tol) return t;
        if (g > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        const double v = speed_(t);
        double next = (v > 0.0) ? t - g / v : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == t) return t;
        t = next;
    }
    return t;
}

ArcLengthTable arc_length_table(std::shared_ptr<const SurfacePatch> patch,
                                std::shared_ptr<const ParamCurve> curve, int n_knots) {
    if (n_knots < 2) {
        throw Error("arc_length_table: n_knots must be >= 2, got " + std::to_string(n_knots));
    }
    if (!patch || !curve) {
        throw Error("arc_length_table: patch and curve must be non-null");
    }
    const Interval range = curve->range();
    // The closure shares ownership: the table stays valid on its own.
    auto speed = [patch, curve](double t) {
        const double v = embed_curve(*patch, *curve, t).d1.norm();
        if (v <= kEpsReg) {
            throw DegenerateSpeed("arc_length_table: |dx/dt| = " + std::to_string(v) +
                                  " at t = " + std::to_string(t));
        }
        return v;
    };

    std::vector<double> knots(static_cast<std::size_t>(n_knots));
    std::vector<double> cumulative(static_cast<std::size_t>(n_knots));
    const double h = range.length() / static_cast<double>(n_knots - 1);
    for (int i = 0; i < n_knots; ++i) {
        knots[static_cast<std::size_t>(i)] = range.t_min + h * static_cast<double>(i);
    }
    knots.back() = range.t_max;

    cumulative[0] = 0.0;
    for (int i = 1; i < n_knots; ++i) {
        const auto k = static_cast<std::size_t>(i);
        cumulative[k] = cumulative[k - 1] + adaptive_gauss5(speed, knots[k - 1], knots[k]);
    }
    return ArcLengthTable(std::move(knots), std::move(cumulative), std::move(speed));
}

double reparameterize(const ArcLengthTable& table, double s) { return table.param_at(s); }

}  // namespace darboux
