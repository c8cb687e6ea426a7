#include "darboux/surface.hpp"

#include <cmath>
#include <string>

#include "darboux/curve.hpp"
#include "darboux/errors.hpp"

namespace darboux {

Vec3 surface_normal(const SurfacePatch& patch, double u, double v) {
    if (!patch.domain().contains(u, v)) {
        throw OutOfDomain("surface_normal: (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") outside patch domain");
    }
    const SurfaceJet j = patch.jet(u, v);
    const Vec3 w = cross(j.pu, j.pv);
    const double m = w.norm();
    if (m <= kEpsReg) {
        throw DegenerateParameterization("surface_normal: |P_u x P_v| = " + std::to_string(m) +
                                         " at (" + std::to_string(u) + ", " + std::to_string(v) +
                                         ")");
    }
    return w / m;
}

NormalJet surface_normal_jet(const SurfaceJet& j) {
    const Vec3 w = cross(j.pu, j.pv);
    const double m = w.norm();
    if (m <= kEpsReg) {
        throw DegenerateParameterization("surface_normal_jet: non-regular point");
    }
    const Vec3 n = w / m;
    // w_u = P_uu x P_v + P_u x P_uv, w_v = P_uv x P_v + P_u x P_vv;
    // n_u = (w_u - n <n,w_u>) / |w| and likewise for v.
    const Vec3 wu = cross(j.puu, j.pv) + cross(j.pu, j.puv);
    const Vec3 wv = cross(j.puv, j.pv) + cross(j.pu, j.pvv);
    NormalJet out;
    out.n = n;
    out.nu = (wu - n * n.dot(wu)) / m;
    out.nv = (wv - n * n.dot(wv)) / m;
    return out;
}

SurfaceJet SwappedPatch::jet(double u, double v) const {
    const SurfaceJet b = base_->jet(v, u);
    SurfaceJet out;
    out.p = b.p;
    out.pu = b.pv;
    out.pv = b.pu;
    out.puu = b.pvv;
    out.puv = b.puv;
    out.pvv = b.puu;
    return out;
}

std::optional<SurfaceJet3> SwappedPatch::jet3(double u, double v) const {
    const auto b = base_->jet3(v, u);
    if (!b) return std::nullopt;
    SurfaceJet3 out;
    out.puuu = b->pvvv;
    out.puuv = b->puvv;
    out.puvv = b->puuv;
    out.pvvv = b->puuu;
    return out;
}

Domain SwappedPatch::domain() const {
    const Domain d = base_->domain();
    return Domain{d.v_min, d.v_max, d.u_min, d.u_max};
}

EmbeddedJet embed_curve(const SurfacePatch& patch, const ParamCurve& curve, double t) {
    const CurveJet c = curve.at(t);
    if (!patch.domain().contains(c.u, c.v)) {
        throw OutOfDomain("embed_curve: curve point (" + std::to_string(c.u) + ", " +
                          std::to_string(c.v) + ") at t = " + std::to_string(t) +
                          " outside patch domain");
    }
    const SurfaceJet j = patch.jet(c.u, c.v);

    EmbeddedJet out;
    out.x = j.p;
    out.d1 = j.pu * c.du + j.pv * c.dv;
    out.d2 = j.puu * (c.du * c.du) + j.puv * (2.0 * c.du * c.dv) + j.pvv * (c.dv * c.dv) +
             j.pu * c.ddu + j.pv * c.ddv;

    const auto c3 = curve.at3(t);
    const auto j3 = patch.jet3(c.u, c.v);
    if (c3 && j3) {
        const double du = c.du, dv = c.dv, ddu = c.ddu, ddv = c.ddv;
        Vec3 d3 = j3->puuu * (du * du * du) + j3->puuv * (3.0 * du * du * dv) +
                  j3->puvv * (3.0 * du * dv * dv) + j3->pvvv * (dv * dv * dv);
        d3 += j.puu * (3.0 * du * ddu) + j.puv * (3.0 * (ddu * dv + du * ddv)) +
              j.pvv * (3.0 * dv * ddv);
        d3 += j.pu * c3->dddu + j.pv * c3->dddv;
        out.d3 = d3;
    }
    return out;
}

namespace {

class SwappedCurve final : public ParamCurve {
public:
    explicit SwappedCurve(std::shared_ptr<const ParamCurve> base) : base_(std::move(base)) {}

    CurveJet at(double t) const override {
        CurveJet c = base_->at(t);
        std::swap(c.u, c.v);
        std::swap(c.du, c.dv);
        std::swap(c.ddu, c.ddv);
        return c;
    }
    Interval range() const override { return base_->range(); }
    std::optional<CurveJet3> at3(double t) const override {
        auto c3 = base_->at3(t);
        if (!c3) return std::nullopt;
        std::swap(c3->dddu, c3->dddv);
        return c3;
    }

private:
    std::shared_ptr<const ParamCurve> base_;
};

}  // namespace

std::shared_ptr<ParamCurve> swap_curve(std::shared_ptr<const ParamCurve> base) {
    return std::make_shared<SwappedCurve>(std::move(base));
}

}  // namespace darboux
