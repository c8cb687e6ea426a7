#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/series.hpp"
#include "darboux/vec3.hpp"

using namespace darboux;

TEST_CASE("vec3 algebra") {
    const Vec3 a{1.0, 2.0, 3.0};
    const Vec3 b{-2.0, 0.5, 4.0};

    CHECK(a.dot(b) == doctest::Approx(-2.0 + 1.0 + 12.0));
    const Vec3 c = a.cross(b);
    CHECK(c.dot(a) == doctest::Approx(0.0));
    CHECK(c.dot(b) == doctest::Approx(0.0));
    CHECK(triple(a, b, c) == doctest::Approx(c.norm2()));

    const Vec3 u = a.normalized();
    CHECK(u.norm() == doctest::Approx(1.0));
    CHECK(a.finite());
    CHECK_FALSE(Vec3{1.0, std::nan(""), 0.0}.finite());
}

TEST_CASE("scalar series validates uniform spacing") {
    CHECK_NOTHROW(ScalarSeries::uniform(0.0, 0.1, std::vector<double>{1.0, 2.0, 3.0}));
    CHECK_THROWS_AS(ScalarSeries({0.0, 0.1, 0.3}, {1.0, 2.0, 3.0}), Error);
    CHECK_THROWS_AS(ScalarSeries({0.0, 0.1}, {1.0, 2.0, 3.0}), Error);
}

TEST_CASE("fd_derivative: constant series is flat zero") {
    const auto d = fd_derivative(ScalarSeries::uniform(0.0, 0.25, {4.0, 4.0, 4.0, 4.0, 4.0}));
    CHECK(d.max_abs() == 0.0);
}

TEST_CASE("fd_derivative: exact on quadratics") {
    const double h = 0.1;
    std::vector<double> values;
    for (int i = 0; i < 21; ++i) {
        const double s = h * i;
        values.push_back(s * s);
    }
    const auto d = fd_derivative(ScalarSeries::uniform(0.0, h, values));
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double s = h * static_cast<double>(i);
        CHECK(std::abs(d[i] - 2.0 * s) < 1e-13);  // exact up to roundoff
    }
}

TEST_CASE("fd_derivative: sin at h = 1e-3 matches cos to 1e-6") {
    const double h = 1e-3;
    std::vector<double> values;
    for (int i = 0; i < 500; ++i) values.push_back(std::sin(h * i));
    const auto d = fd_derivative(ScalarSeries::uniform(0.0, h, values));
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        worst = std::max(worst, std::abs(d[i] - std::cos(h * static_cast<double>(i))));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("fd_derivative: refuses short series") {
    CHECK_THROWS_AS(fd_derivative(ScalarSeries::uniform(0.0, 1.0, {1.0, 2.0})), TooFewSamples);
}

TEST_CASE("unwrap_angles removes artificial jumps") {
    constexpr double pi = std::numbers::pi;
    const std::vector<double> wrapped{3.0, -3.1, 3.1, -3.0};
    const auto flat = unwrap_angles(wrapped);
    for (std::size_t i = 1; i < flat.size(); ++i) {
        CHECK(std::abs(flat[i] - flat[i - 1]) < pi);
    }
    CHECK(std::abs(std::remainder(flat.back() - wrapped.back(), 2.0 * pi)) < 1e-12);
}
