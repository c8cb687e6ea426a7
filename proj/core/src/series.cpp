#include "darboux/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darboux/errors.hpp"

namespace darboux {

ScalarSeries::ScalarSeries(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size()) {
        throw Error("ScalarSeries: grid and value lengths differ");
    }
    if (grid_.size() >= 2) {
        const double span = grid_.back() - grid_.front();
        h_ = span / static_cast<double>(grid_.size() - 1);
        if (!(h_ > 0.0)) {
            throw Error("ScalarSeries: grid must be strictly increasing");
        }
        const double tol = 1e-12 * std::max(std::abs(span), 1.0);
        for (std::size_t i = 1; i < grid_.size(); ++i) {
            if (std::abs((grid_[i] - grid_[i - 1]) - h_) > tol) {
                throw Error("ScalarSeries: grid spacing is not uniform");
            }
        }
    }
}

ScalarSeries ScalarSeries::uniform(double s0, double h, std::vector<double> values) {
    std::vector<double> grid(values.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = s0 + h * static_cast<double>(i);
    }
    return ScalarSeries(std::move(grid), std::move(values));
}

double ScalarSeries::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarSeries::rms() const {
    if (values_.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values_.size()));
}

ScalarSeries fd_derivative(const ScalarSeries& series) {
    const std::size_t n = series.size();
    if (n < 3) {
        throw TooFewSamples("fd_derivative: need at least 3 samples, got " + std::to_string(n));
    }
    const double h = series.spacing();
    const auto& f = series.values();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return ScalarSeries(series.grid(), std::move(d));
}

std::vector<double> unwrap_angles(const std::vector<double>& angles) {
    std::vector<double> out(angles.size());
    if (angles.empty()) return out;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    out[0] = angles[0];
    double shift = 0.0;
    for (std::size_t i = 1; i < angles.size(); ++i) {
        double delta = angles[i] - angles[i - 1];
        while (delta > std::numbers::pi) {
            delta -= two_pi;
            shift -= two_pi;
        }
        while (delta < -std::numbers::pi) {
            delta += two_pi;
            shift += two_pi;
        }
        out[i] = angles[i] + shift;
    }
    return out;
}

}  // namespace darboux
