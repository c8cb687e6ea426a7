#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "darboux/catalog.hpp"
#include "darboux/curve.hpp"
#include "darboux/dsl.hpp"
#include "darboux/errors.hpp"
#include "darboux/surface.hpp"
#include "test_support.hpp"

using namespace darboux;
using darboux::testing::all_catalog_combos;
using darboux::testing::fd_vec;

namespace {

std::shared_ptr<SurfacePatch> catalog_patch(const std::string& name) {
    const auto& entry = catalog::get_entry(name);
    return entry.make_patch(entry.defaults);
}

/// Patch translated in parameter space: Q(u,v) = P(u + c, v).
class ShiftedPatch final : public SurfacePatch {
public:
    ShiftedPatch(std::shared_ptr<const SurfacePatch> base, double c)
        : base_(std::move(base)), c_(c) {}
    SurfaceJet jet(double u, double v) const override { return base_->jet(u + c_, v); }
    Domain domain() const override {
        Domain d = base_->domain();
        d.u_min -= c_;
        d.u_max -= c_;
        return d;
    }

private:
    std::shared_ptr<const SurfacePatch> base_;
    double c_;
};

}  // namespace

TEST_CASE("surface_normal: plane and sphere") {
    const auto plane = catalog_patch("plane");
    const Vec3 n = surface_normal(*plane, 0.37, -2.11);
    CHECK(n.x == doctest::Approx(0.0));
    CHECK(n.y == doctest::Approx(0.0));
    CHECK(n.z == doctest::Approx(1.0));

    const auto sphere = catalog_patch("sphere");
    for (const auto& [u, v] : {std::pair{0.7, 0.3}, {1.9, -2.0}, {2.5, 4.0}}) {
        const Vec3 nn = surface_normal(*sphere, u, v);
        const Vec3 radial = sphere->jet(u, v).p.normalized();
        CHECK((nn - radial).norm() < 1e-12);
        CHECK(std::abs(nn.norm() - 1.0) < 1e-12);
        const SurfaceJet j = sphere->jet(u, v);
        CHECK(std::abs(nn.dot(j.pu)) < 1e-10);
        CHECK(std::abs(nn.dot(j.pv)) < 1e-10);
    }
}

TEST_CASE("surface_normal: cone apex is non-regular") {
    const auto cone = dsl::compile_surface(
        dsl::parse_surface("v*cos(u)", "v*sin(u)", "v", Domain{-3.0, 3.0, -1.0, 1.0}));
    CHECK_THROWS_AS(surface_normal(*cone, 0.5, 0.0), DegenerateParameterization);
    CHECK_NOTHROW(surface_normal(*cone, 0.5, 0.5));
}

TEST_CASE("surface_normal: out-of-domain query") {
    const auto plane = catalog_patch("plane");
    CHECK_THROWS_AS(surface_normal(*plane, 50.0, 0.0), OutOfDomain);
}

TEST_CASE("embed_curve: straight line on the plane") {
    const auto plane = catalog_patch("plane");
    const auto& line = catalog::get_entry("plane").curve("line");
    const auto curve = line.make({}, line.defaults);
    const EmbeddedJet e = embed_curve(*plane, *curve, 0.4);
    CHECK((e.d1 - Vec3{1.0, 0.0, 0.0}).norm() == doctest::Approx(0.0));
    CHECK(e.d2.norm() == doctest::Approx(0.0));
}

TEST_CASE("embed_curve: unit circle on the unit cylinder") {
    const auto cyl = catalog_patch("cylinder");
    const auto& circle = catalog::get_entry("cylinder").curve("circle");
    const auto curve = circle.make({{"a", 1.0}}, circle.defaults);
    for (double t : {0.0, 1.2, 4.0}) {
        const EmbeddedJet e = embed_curve(*cyl, *curve, t);
        CHECK(e.d1.norm() == doctest::Approx(1.0));
        CHECK((e.d2 + Vec3{std::cos(t), std::sin(t), 0.0}).norm() < 1e-14);
    }
}

TEST_CASE("embed_curve: leaves the domain") {
    const auto plane = catalog_patch("plane");
    const auto& line = catalog::get_entry("plane").curve("line");
    const auto curve = line.make({}, catalog::merge_params(line.defaults, {{"c", 20.0}}));
    CHECK_THROWS_AS(embed_curve(*plane, *curve, 0.0), OutOfDomain);
}

TEST_CASE("embed_curve: first derivative matches the fd oracle to 1e-7") {
    for (const auto& combo : all_catalog_combos()) {
        const Interval r = combo.param_curve->range();
        for (int i = 1; i < 8; ++i) {
            const double t = r.t_min + r.length() * static_cast<double>(i) / 8.0;
            const double h = 1e-5 * std::max(1.0, std::abs(t));
            const Vec3 fd = fd_vec(
                [&](double tt) { return embed_curve(*combo.patch, *combo.param_curve, tt).x; }, t,
                h);
            const Vec3 an = embed_curve(*combo.patch, *combo.param_curve, t).d1;
            CHECK_MESSAGE((an - fd).norm() < 1e-7,
                          combo.surface << "/" << combo.curve << " at t = " << t);
        }
    }
}

TEST_CASE("catalog patches: analytic partials match fd of the position map") {
    // First partials against differences of the position, second partials
    // against differences of the first, third (where present) against
    // differences of the second. Step 1e-5, absolute tolerance 1e-6.
    for (const auto& name : catalog::list_entries()) {
        const auto patch = catalog_patch(name);
        const Domain dom = patch->domain();
        const double h = 1e-5;
        for (int i = 1; i <= 3; ++i) {
            for (int k = 1; k <= 3; ++k) {
                const double u = dom.u_min + (dom.u_max - dom.u_min) * i / 4.0;
                const double v = dom.v_min + (dom.v_max - dom.v_min) * k / 4.0;
                const SurfaceJet j = patch->jet(u, v);

                auto p = [&](double uu, double vv) { return patch->jet(uu, vv).p; };
                auto pu = [&](double uu, double vv) { return patch->jet(uu, vv).pu; };
                auto pv = [&](double uu, double vv) { return patch->jet(uu, vv).pv; };

                CHECK((j.pu - fd_vec([&](double x) { return p(x, v); }, u, h)).norm() < 1e-6);
                CHECK((j.pv - fd_vec([&](double x) { return p(u, x); }, v, h)).norm() < 1e-6);
                CHECK((j.puu - fd_vec([&](double x) { return pu(x, v); }, u, h)).norm() < 1e-6);
                CHECK((j.puv - fd_vec([&](double x) { return pu(u, x); }, v, h)).norm() < 1e-6);
                CHECK((j.pvv - fd_vec([&](double x) { return pv(u, x); }, v, h)).norm() < 1e-6);

                if (const auto j3 = patch->jet3(u, v)) {
                    auto puu = [&](double uu, double vv) { return patch->jet(uu, vv).puu; };
                    auto pvv = [&](double uu, double vv) { return patch->jet(uu, vv).pvv; };
                    CHECK((j3->puuu - fd_vec([&](double x) { return puu(x, v); }, u, h)).norm() <
                          1e-6);
                    CHECK((j3->puuv - fd_vec([&](double x) { return puu(u, x); }, v, h)).norm() <
                          1e-6);
                    CHECK((j3->puvv - fd_vec([&](double x) { return pvv(x, v); }, u, h)).norm() <
                          1e-6);
                    CHECK((j3->pvvv - fd_vec([&](double x) { return pvv(u, x); }, v, h)).norm() <
                          1e-6);
                }
            }
        }
    }
}

TEST_CASE("surface_normal is invariant under an orientation-preserving shift") {
    for (const auto& name : catalog::list_entries()) {
        const auto patch = catalog_patch(name);
        const auto shifted = std::make_shared<ShiftedPatch>(patch, 0.37);
        const Domain dom = patch->domain();
        const double u = 0.5 * (dom.u_min + dom.u_max);
        const double v = 0.4 * dom.v_min + 0.6 * dom.v_max;
        const Vec3 n1 = surface_normal(*patch, u, v);
        const Vec3 n2 = surface_normal(*shifted, u - 0.37, v);
        CHECK_MESSAGE((n1 - n2).norm() < 1e-10, name);
    }
}
