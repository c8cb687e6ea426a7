#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "darboux/surface.hpp"
#include "darboux/vec3.hpp"

namespace darboux {

/// A curve in a surface's parameter plane, t -> (u(t), v(t)), with derivatives.
struct CurveJet {
    double u = 0.0, v = 0.0;
    double du = 0.0, dv = 0.0;
    double ddu = 0.0, ddv = 0.0;
};

struct CurveJet3 {
    double dddu = 0.0, dddv = 0.0;
};

struct Interval {
    double t_min = 0.0;
    double t_max = 1.0;
    double length() const { return t_max - t_min; }
};

class ParamCurve {
public:
    virtual ~ParamCurve() = default;

    virtual CurveJet at(double t) const = 0;
    virtual Interval range() const = 0;

    /// Third parameter derivatives where the concrete curve has them.
    virtual std::optional<CurveJet3> at3(double /*t*/) const { return std::nullopt; }
};

/// Curve defined by callables; the workhorse for catalog curves and tests.
class FunctionalCurve final : public ParamCurve {
public:
    using JetFn = std::function<CurveJet(double)>;
    using Jet3Fn = std::function<CurveJet3(double)>;

    FunctionalCurve(JetFn jet, Interval range, Jet3Fn jet3 = nullptr)
        : jet_(std::move(jet)), jet3_(std::move(jet3)), range_(range) {}

    CurveJet at(double t) const override { return jet_(t); }
    Interval range() const override { return range_; }
    std::optional<CurveJet3> at3(double t) const override {
        if (!jet3_) return std::nullopt;
        return jet3_(t);
    }

private:
    JetFn jet_;
    Jet3Fn jet3_;
    Interval range_;
};

/// Space-curve derivatives of the embedded map x(t) = P(u(t), v(t)).
struct EmbeddedJet {
    Vec3 x;
    Vec3 d1;
    Vec3 d2;
    std::optional<Vec3> d3;  // only when patch and curve both carry 3rd order
};

/// Chain rule through the patch. Throws OutOfDomain when (u(t),v(t)) leaves
/// the patch rectangle.
EmbeddedJet embed_curve(const SurfacePatch& patch, const ParamCurve& curve, double t);

/// Curve in the swapped (v,u) parameter plane of a SwappedPatch, embedding to
/// the identical space curve.
std::shared_ptr<ParamCurve> swap_curve(std::shared_ptr<const ParamCurve> base);

}  // namespace darboux
