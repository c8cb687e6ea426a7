#pragma once

#include <memory>
#include <optional>

#include "darboux/vec3.hpp"

namespace darboux {

/// Closed parameter rectangle [u_min,u_max] x [v_min,v_max].
struct Domain {
    double u_min = 0.0;
    double u_max = 1.0;
    double v_min = 0.0;
    double v_max = 1.0;

    bool contains(double u, double v, double slack = 1e-9) const {
        const double su = slack * (1.0 + u_max - u_min);
        const double sv = slack * (1.0 + v_max - v_min);
        return u >= u_min - su && u <= u_max + su && v >= v_min - sv && v <= v_max + sv;
    }
};

/// Position and partial derivatives of a surface map up to second order.
struct SurfaceJet {
    Vec3 p;
    Vec3 pu, pv;
    Vec3 puu, puv, pvv;
};

/// Third-order partials, available only where a patch supplies them
/// analytically (the builtin catalog does, compiled expressions do not).
struct SurfaceJet3 {
    Vec3 puuu, puuv, puvv, pvvv;
};

/// Evaluator for a regular parametric surface. Implementations are immutable
/// and safe to share across threads.
class SurfacePatch {
public:
    virtual ~SurfacePatch() = default;

    virtual SurfaceJet jet(double u, double v) const = 0;
    virtual Domain domain() const = 0;

    /// Third-order data when the concrete surface can provide it exactly.
    virtual std::optional<SurfaceJet3> jet3(double /*u*/, double /*v*/) const {
        return std::nullopt;
    }
};

/// Unit surface normal n = (P_u x P_v)/|P_u x P_v|.
/// Throws DegenerateParameterization when |P_u x P_v| <= eps_reg and
/// OutOfDomain when (u,v) leaves the declared rectangle.
Vec3 surface_normal(const SurfacePatch& patch, double u, double v);

/// Normal and its parameter derivatives at one point:
///   n, dn/du, dn/dv from the second-order jet.
struct NormalJet {
    Vec3 n;
    Vec3 nu, nv;
};

NormalJet surface_normal_jet(const SurfaceJet& jet);

/// Patch with swapped parameters: Q(u,v) = P(v,u). Reverses orientation
/// (the normal flips sign); used by orientation-covariance checks.
class SwappedPatch final : public SurfacePatch {
public:
    explicit SwappedPatch(std::shared_ptr<const SurfacePatch> base) : base_(std::move(base)) {}

    SurfaceJet jet(double u, double v) const override;
    std::optional<SurfaceJet3> jet3(double u, double v) const override;
    Domain domain() const override;

private:
    std::shared_ptr<const SurfacePatch> base_;
};

}  // namespace darboux
