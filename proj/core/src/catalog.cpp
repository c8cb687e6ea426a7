#include "darboux/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "darboux/errors.hpp"

namespace darboux::catalog {

namespace {

constexpr double kPi = std::numbers::pi;

double param(const Params& p, const std::string& name) {
    const auto it = p.find(name);
    if (it == p.end()) {
        throw Error("catalog: missing parameter '" + name + "'");
    }
    return it->second;
}

// ---------------------------------------------------------------------------
// patches
// ---------------------------------------------------------------------------

class PlanePatch final : public SurfacePatch {
public:
    SurfaceJet jet(double u, double v) const override {
        SurfaceJet j;
        j.p = {u, v, 0.0};
        j.pu = {1.0, 0.0, 0.0};
        j.pv = {0.0, 1.0, 0.0};
        return j;
    }
    std::optional<SurfaceJet3> jet3(double, double) const override { return SurfaceJet3{}; }
    Domain domain() const override { return {-10.0, 10.0, -10.0, 10.0}; }
};

class SpherePatch final : public SurfacePatch {
public:
    explicit SpherePatch(double radius) : R_(radius) {
        if (!(R_ > 0.0)) throw Error("sphere: radius must be positive");
    }

    // u is the colatitude, v the azimuth; P_u x P_v points outward.
    SurfaceJet jet(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        const double sv = std::sin(v), cv = std::cos(v);
        SurfaceJet j;
        j.p = {R_ * su * cv, R_ * su * sv, R_ * cu};
        j.pu = {R_ * cu * cv, R_ * cu * sv, -R_ * su};
        j.pv = {-R_ * su * sv, R_ * su * cv, 0.0};
        j.puu = {-R_ * su * cv, -R_ * su * sv, -R_ * cu};
        j.puv = {-R_ * cu * sv, R_ * cu * cv, 0.0};
        j.pvv = {-R_ * su * cv, -R_ * su * sv, 0.0};
        return j;
    }

    std::optional<SurfaceJet3> jet3(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        const double sv = std::sin(v), cv = std::cos(v);
        SurfaceJet3 j;
        j.puuu = {-R_ * cu * cv, -R_ * cu * sv, R_ * su};
        j.puuv = {R_ * su * sv, -R_ * su * cv, 0.0};
        j.puvv = {-R_ * cu * cv, -R_ * cu * sv, 0.0};
        j.pvvv = {R_ * su * sv, -R_ * su * cv, 0.0};
        return j;
    }

    Domain domain() const override { return {0.05, kPi - 0.05, -4.0 * kPi, 4.0 * kPi}; }

private:
    double R_;
};

class CylinderPatch final : public SurfacePatch {
public:
    explicit CylinderPatch(double radius) : a_(radius) {
        if (!(a_ > 0.0)) throw Error("cylinder: radius must be positive");
    }

    SurfaceJet jet(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        SurfaceJet j;
        j.p = {a_ * cu, a_ * su, v};
        j.pu = {-a_ * su, a_ * cu, 0.0};
        j.pv = {0.0, 0.0, 1.0};
        j.puu = {-a_ * cu, -a_ * su, 0.0};
        return j;
    }

    std::optional<SurfaceJet3> jet3(double u, double) const override {
        const double su = std::sin(u), cu = std::cos(u);
        SurfaceJet3 j;
        j.puuu = {a_ * su, -a_ * cu, 0.0};
        return j;
    }

    Domain domain() const override { return {-4.0 * kPi, 4.0 * kPi, -10.0, 10.0}; }

private:
    double a_;
};

class TorusPatch final : public SurfacePatch {
public:
    TorusPatch(double major, double minor) : R_(major), r_(minor) {
        if (!(R_ > r_ && r_ > 0.0)) throw Error("torus: need R > r > 0");
    }

    // u sweeps around the axis, v around the tube; P_u x P_v points outward.
    SurfaceJet jet(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        const double sv = std::sin(v), cv = std::cos(v);
        const double w = R_ + r_ * cv;
        const double wv = -r_ * sv;
        const double wvv = -r_ * cv;
        SurfaceJet j;
        j.p = {w * cu, w * su, r_ * sv};
        j.pu = {-w * su, w * cu, 0.0};
        j.pv = {wv * cu, wv * su, r_ * cv};
        j.puu = {-w * cu, -w * su, 0.0};
        j.puv = {-wv * su, wv * cu, 0.0};
        j.pvv = {wvv * cu, wvv * su, -r_ * sv};
        return j;
    }

    std::optional<SurfaceJet3> jet3(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        const double sv = std::sin(v), cv = std::cos(v);
        const double w = R_ + r_ * cv;
        const double wv = -r_ * sv;
        const double wvv = -r_ * cv;
        const double wvvv = r_ * sv;
        SurfaceJet3 j;
        j.puuu = {w * su, -w * cu, 0.0};
        j.puuv = {-wv * cu, -wv * su, 0.0};
        j.puvv = {-wvv * su, wvv * cu, 0.0};
        j.pvvv = {wvvv * cu, wvvv * su, -r_ * cv};
        return j;
    }

    Domain domain() const override { return {-4.0 * kPi, 4.0 * kPi, -4.0 * kPi, 4.0 * kPi}; }

private:
    double R_, r_;
};

class HelicoidPatch final : public SurfacePatch {
public:
    explicit HelicoidPatch(double pitch) : c_(pitch) {
        if (c_ == 0.0) throw Error("helicoid: pitch must be nonzero");
    }

    SurfaceJet jet(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        SurfaceJet j;
        j.p = {v * cu, v * su, c_ * u};
        j.pu = {-v * su, v * cu, c_};
        j.pv = {cu, su, 0.0};
        j.puu = {-v * cu, -v * su, 0.0};
        j.puv = {-su, cu, 0.0};
        return j;
    }

    std::optional<SurfaceJet3> jet3(double u, double v) const override {
        const double su = std::sin(u), cu = std::cos(u);
        SurfaceJet3 j;
        j.puuu = {v * su, -v * cu, 0.0};
        j.puuv = {-cu, -su, 0.0};
        return j;
    }

    Domain domain() const override { return {-2.0 * kPi, 2.0 * kPi, -3.0, 3.0}; }

private:
    double c_;
};

// ---------------------------------------------------------------------------
// curve factories
// ---------------------------------------------------------------------------

/// u = a0 + a1*t, v = b0 + b1*t: covers parameter lines, rulings and helices.
std::shared_ptr<ParamCurve> linear_curve(double a0, double a1, double b0, double b1,
                                         Interval range) {
    auto jet = [=](double t) {
        CurveJet c;
        c.u = a0 + a1 * t;
        c.v = b0 + b1 * t;
        c.du = a1;
        c.dv = b1;
        return c;
    };
    auto jet3 = [](double) { return CurveJet3{}; };
    return std::make_shared<FunctionalCurve>(jet, range, jet3);
}

std::shared_ptr<ParamCurve> circle_in_plane(double r, Interval range) {
    auto jet = [=](double t) {
        CurveJet c;
        c.u = r * std::cos(t);
        c.v = r * std::sin(t);
        c.du = -r * std::sin(t);
        c.dv = r * std::cos(t);
        c.ddu = -r * std::cos(t);
        c.ddv = -r * std::sin(t);
        return c;
    };
    auto jet3 = [=](double t) {
        CurveJet3 c;
        c.dddu = r * std::sin(t);
        c.dddv = -r * std::cos(t);
        return c;
    };
    return std::make_shared<FunctionalCurve>(jet, range, jet3);
}

InvariantFn constant_invariants(double k_g, double k_n, double tau_g) {
    return [=](double) { return FrameInvariants{k_g, k_n, tau_g}; };
}

// ---------------------------------------------------------------------------
// the table
// ---------------------------------------------------------------------------

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> entries;

    {
        CatalogEntry plane;
        plane.name = "plane";
        plane.make_patch = [](const Params&) { return std::make_shared<PlanePatch>(); };
        plane.curves.push_back(CatalogCurve{
            "line",
            {{"c", 0.0}, {"m", 0.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(0.0, 1.0, param(cp, "c"), param(cp, "m"), {-2.0, 2.0});
            },
            [](const Params&, const Params&) { return constant_invariants(0.0, 0.0, 0.0); }});
        plane.curves.push_back(CatalogCurve{
            "circle",
            {{"r", 1.0}},
            [](const Params&, const Params& cp) {
                return circle_in_plane(param(cp, "r"), {0.0, 2.0 * kPi});
            },
            [](const Params&, const Params& cp) {
                return constant_invariants(1.0 / param(cp, "r"), 0.0, 0.0);
            }});
        entries.push_back(std::move(plane));
    }

    {
        CatalogEntry sphere;
        sphere.name = "sphere";
        sphere.defaults = {{"R", 1.0}};
        sphere.make_patch = [](const Params& sp) {
            return std::make_shared<SpherePatch>(param(sp, "R"));
        };
        sphere.curves.push_back(CatalogCurve{
            "latitude",
            {{"theta0", kPi / 3.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(param(cp, "theta0"), 0.0, 0.0, 1.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params& cp) {
                const double R = param(sp, "R");
                const double theta0 = param(cp, "theta0");
                return constant_invariants(1.0 / (R * std::tan(theta0)), -1.0 / R, 0.0);
            }});
        sphere.curves.push_back(CatalogCurve{
            "meridian",
            {{"v0", 0.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(0.3, 1.0, param(cp, "v0"), 0.0, {0.0, kPi - 0.6});
            },
            [](const Params& sp, const Params&) {
                return constant_invariants(0.0, -1.0 / param(sp, "R"), 0.0);
            }});
        sphere.curves.push_back(CatalogCurve{
            "equator",
            {},
            [](const Params&, const Params&) {
                return linear_curve(kPi / 2.0, 0.0, 0.0, 1.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params&) {
                return constant_invariants(0.0, -1.0 / param(sp, "R"), 0.0);
            }});
        entries.push_back(std::move(sphere));
    }

    {
        CatalogEntry cylinder;
        cylinder.name = "cylinder";
        cylinder.defaults = {{"a", 1.0}};
        cylinder.make_patch = [](const Params& sp) {
            return std::make_shared<CylinderPatch>(param(sp, "a"));
        };
        cylinder.curves.push_back(CatalogCurve{
            "helix",
            {{"alpha", kPi / 4.0}},
            [](const Params& sp, const Params& cp) {
                const double a = param(sp, "a");
                const double alpha = param(cp, "alpha");
                // Unit-speed: u = cos(alpha)/a * t, v = sin(alpha) * t.
                return linear_curve(0.0, std::cos(alpha) / a, 0.0, std::sin(alpha),
                                    {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params& cp) {
                const double a = param(sp, "a");
                const double alpha = param(cp, "alpha");
                const double c = std::cos(alpha), s = std::sin(alpha);
                return constant_invariants(0.0, -c * c / a, s * c / a);
            }});
        cylinder.curves.push_back(CatalogCurve{
            "circle",
            {{"v0", 0.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(0.0, 1.0, param(cp, "v0"), 0.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params&) {
                return constant_invariants(0.0, -1.0 / param(sp, "a"), 0.0);
            }});
        cylinder.curves.push_back(CatalogCurve{
            "ruling",
            {{"u0", 0.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(param(cp, "u0"), 0.0, 0.0, 1.0, {0.0, 2.0});
            },
            [](const Params&, const Params&) { return constant_invariants(0.0, 0.0, 0.0); }});
        entries.push_back(std::move(cylinder));
    }

    {
        CatalogEntry torus;
        torus.name = "torus";
        torus.defaults = {{"R", 2.0}, {"r", 0.5}};
        torus.make_patch = [](const Params& sp) {
            return std::make_shared<TorusPatch>(param(sp, "R"), param(sp, "r"));
        };
        torus.curves.push_back(CatalogCurve{
            "parallel",
            {{"v0", kPi / 3.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(0.0, 1.0, param(cp, "v0"), 0.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params& cp) {
                const double R = param(sp, "R"), r = param(sp, "r");
                const double v0 = param(cp, "v0");
                const double w = R + r * std::cos(v0);
                return constant_invariants(std::sin(v0) / w, -std::cos(v0) / w, 0.0);
            }});
        torus.curves.push_back(CatalogCurve{
            "meridian",
            {{"u0", 0.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(param(cp, "u0"), 0.0, 0.0, 1.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params&) {
                return constant_invariants(0.0, -1.0 / param(sp, "r"), 0.0);
            }});
        entries.push_back(std::move(torus));
    }

    {
        CatalogEntry helicoid;
        helicoid.name = "helicoid";
        helicoid.defaults = {{"c", 2.0}};
        helicoid.make_patch = [](const Params& sp) {
            return std::make_shared<HelicoidPatch>(param(sp, "c"));
        };
        helicoid.curves.push_back(CatalogCurve{
            "ruling",
            {{"u0", 0.0}, {"v_from", 0.2}, {"v_to", 0.9}},
            [](const Params&, const Params& cp) {
                return linear_curve(param(cp, "u0"), 0.0, 0.0, 1.0,
                                    {param(cp, "v_from"), param(cp, "v_to")});
            },
            [](const Params& sp, const Params&) {
                const double c = param(sp, "c");
                return [c](double t) {
                    return FrameInvariants{0.0, 0.0, -c / (c * c + t * t)};
                };
            }});
        helicoid.curves.push_back(CatalogCurve{
            "helix",
            {{"v0", 1.0}},
            [](const Params&, const Params& cp) {
                return linear_curve(0.0, 1.0, param(cp, "v0"), 0.0, {0.0, 2.0 * kPi});
            },
            [](const Params& sp, const Params& cp) {
                const double c = param(sp, "c");
                const double v0 = param(cp, "v0");
                const double w2 = v0 * v0 + c * c;
                return constant_invariants(-v0 / w2, 0.0, c / w2);
            }});
        entries.push_back(std::move(helicoid));
    }

    std::sort(entries.begin(), entries.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
    return entries;
}

const std::vector<CatalogEntry>& entries() {
    static const std::vector<CatalogEntry> table = build_entries();
    return table;
}

}  // namespace

const CatalogCurve& CatalogEntry::curve(const std::string& curve_name) const {
    for (const auto& c : curves) {
        if (c.name == curve_name) return c;
    }
    throw UnknownEntry("catalog: surface '" + name + "' has no curve named '" + curve_name + "'");
}

const CatalogEntry& get_entry(const std::string& name) {
    for (const auto& e : entries()) {
        if (e.name == name) return e;
    }
    throw UnknownEntry("catalog: no entry named '" + name + "'");
}

std::vector<std::string> list_entries() {
    std::vector<std::string> names;
    names.reserve(entries().size());
    for (const auto& e : entries()) names.push_back(e.name);
    return names;
}

Params merge_params(const Params& defaults, const Params& overrides) {
    Params merged = defaults;
    for (const auto& [key, value] : overrides) {
        const auto it = merged.find(key);
        if (it == merged.end()) {
            throw Error("unknown parameter '" + key + "'");
        }
        it->second = value;
    }
    return merged;
}

}  // namespace darboux::catalog
