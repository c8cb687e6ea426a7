#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "darboux/arclength.hpp"
#include "darboux/catalog.hpp"
#include "darboux/errors.hpp"
#include "darboux/framing.hpp"
#include "test_support.hpp"

using namespace darboux;
using darboux::testing::all_catalog_combos;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("listing is alphabetized and lookups work") {
    const auto names = catalog::list_entries();
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(std::find(names.begin(), names.end(), "plane") != names.end());
    CHECK(std::find(names.begin(), names.end(), "sphere") != names.end());
    CHECK(std::find(names.begin(), names.end(), "cylinder") != names.end());
    CHECK(std::find(names.begin(), names.end(), "torus") != names.end());
    CHECK(std::find(names.begin(), names.end(), "helicoid") != names.end());
    for (const auto& n : names) {
        CHECK_NOTHROW(catalog::get_entry(n));
    }
}

TEST_CASE("unknown names are rejected") {
    CHECK_THROWS_AS(catalog::get_entry("moebius"), UnknownEntry);
    CHECK_THROWS_AS(catalog::get_entry("sphere").curve("helix"), UnknownEntry);
    CHECK_THROWS_AS(catalog::merge_params({{"a", 1.0}}, {{"b", 2.0}}), Error);
}

TEST_CASE("spot values: cylinder helix, sphere latitude, plane line") {
    {
        const auto& entry = catalog::get_entry("cylinder");
        const auto& helix = entry.curve("helix");
        const double alpha = kPi / 4.0;
        const auto fn = helix.expected({{"a", 1.0}}, {{"alpha", alpha}});
        const FrameInvariants inv = fn(0.0);
        CHECK(inv.k_g == doctest::Approx(0.0));
        CHECK(inv.k_n == doctest::Approx(-std::cos(alpha) * std::cos(alpha)));
        CHECK(inv.tau_g == doctest::Approx(std::sin(alpha) * std::cos(alpha)));
    }
    {
        const auto& entry = catalog::get_entry("sphere");
        const auto& lat = entry.curve("latitude");
        const double theta0 = kPi / 3.0;
        const auto fn = lat.expected({{"R", 1.0}}, {{"theta0", theta0}});
        const FrameInvariants inv = fn(1.0);
        CHECK(inv.k_g == doctest::Approx(1.0 / std::tan(theta0)));
        CHECK(inv.k_n == doctest::Approx(-1.0));
        CHECK(inv.tau_g == doctest::Approx(0.0));
    }
    {
        const auto& entry = catalog::get_entry("plane");
        const auto fn = entry.curve("line").expected({}, {{"c", 0.0}, {"m", 0.0}});
        const FrameInvariants inv = fn(0.3);
        CHECK(inv.k_g == 0.0);
        CHECK(inv.k_n == 0.0);
        CHECK(inv.tau_g == 0.0);
    }
}

TEST_CASE("every closed form matches the numeric extraction to 1e-8 at 200 stations") {
    for (const auto& combo : all_catalog_combos()) {
        REQUIRE_MESSAGE(combo.expected, combo.surface << "/" << combo.curve
                                                      << " is missing its closed form");
        const auto table = arc_length_table(combo.patch, combo.param_curve, 64);
        const double L = table.total_length();
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double s = L * static_cast<double>(i) / 199.0;
            const double t = table.param_at(s);
            const FramedSample got = darboux_at(*combo.patch, *combo.param_curve, table, s);
            const FrameInvariants want = combo.expected(t);
            worst = std::max({worst, std::abs(got.inv.k_g - want.k_g),
                              std::abs(got.inv.k_n - want.k_n),
                              std::abs(got.inv.tau_g - want.tau_g)});
        }
        CHECK_MESSAGE(worst < 1e-8, combo.surface << "/" << combo.curve
                                                  << " deviation " << worst);
    }
}

TEST_CASE("parameter overrides flow through") {
    const auto& entry = catalog::get_entry("sphere");
    const auto patch = entry.make_patch(catalog::merge_params(entry.defaults, {{"R", 2.0}}));
    const auto& lat = entry.curve("latitude");
    const auto curve = lat.make({{"R", 2.0}}, lat.defaults);
    const auto table = arc_length_table(patch, curve, 32);
    // Latitude circle of radius R sin(theta0).
    CHECK(table.total_length() ==
          doctest::Approx(2.0 * kPi * 2.0 * std::sin(kPi / 3.0)).epsilon(1e-9));
    const FramedSample s = darboux_at(*patch, *curve, table, 0.7);
    CHECK(s.inv.k_n == doctest::Approx(-0.5).epsilon(1e-10));
}
