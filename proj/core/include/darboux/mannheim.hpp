#pragma once

#include <memory>
#include <span>
#include <vector>

#include "darboux/arclength.hpp"
#include "darboux/framing.hpp"

namespace darboux::mannheim {

/// Generator data for a ruled sweep S(p,q) = c(p) + q r(p): center curve and
/// unit ruling with first and second parameter derivatives.
struct GeneratorJet {
    Vec3 c, c1, c2;
    Vec3 r, r1, r2;
};

class RulingGenerator {
public:
    virtual ~RulingGenerator() = default;
    virtual GeneratorJet at(double p) const = 0;
    virtual Interval range() const = 0;
};

/// Pointwise offset x(s1) = x1(s1) + lambda n1(s1) of a framed partner curve.
/// Throws ZeroLambda for lambda = 0 and SingularOffset where
/// |1 - lambda k_n1| <= 1e-6 (the correspondence speed degenerates there).
std::vector<Vec3> offset_curve(std::span<const FramedSample> partner, double lambda);

/// Station threshold for the singular-offset test on 1 - lambda*k_n1.
inline constexpr double kSingularOffsetTol = 1e-6;

/// Ruled sweep as a surface patch with domain p in the generator range and
/// |q| <= half_width. Regularity is spot-checked across the strip; a
/// non-regular sample throws DegenerateSweep.
std::shared_ptr<SurfacePatch> sweep_surface(std::shared_ptr<const RulingGenerator> generator,
                                            double half_width);

/// The Mannheim offset generator along a framed partner curve:
/// c = x1 + lambda n1, r = n1. Second derivatives of the surface normal come
/// from analytic third-order patch data when present, otherwise from a small
/// central difference of the analytic first derivative.
std::shared_ptr<RulingGenerator> offset_generator(std::shared_ptr<const SurfacePatch> patch,
                                                  std::shared_ptr<const ParamCurve> curve,
                                                  double lambda);

/// A constructed Mannheim D-pair. The partner curve x1 lives on the input
/// surface; the base curve x = x1 + lambda n1 lives on the swept carrier
/// surface, whose tangent plane along q = 0 forces g = n1 by construction.
///
/// Both curves are sampled at the same stations: a uniform grid in the
/// partner's arc length s1. Base samples carry their own induced arc length.
struct MannheimPair {
    std::shared_ptr<const SurfacePatch> partner_patch;
    std::shared_ptr<const ParamCurve> partner_curve;
    std::shared_ptr<const SurfacePatch> sweep;
    std::shared_ptr<const ParamCurve> base_curve;  // p -> (p, 0) on the sweep

    double lambda = 0.0;
    double half_width = 0.0;
    double h1 = 0.0;                   // s1 grid spacing
    std::vector<double> s1;            // uniform partner arc-length stations
    std::vector<FramedSample> partner; // sample.s = s1
    std::vector<FramedSample> base;    // sample.s = induced arc length of x
    std::vector<double> theta;         // unwrapped angle between T and T1
    std::vector<double> speed_ratio;   // ds/ds1 = |dx/ds1|
    double coincidence_sign = 1.0;     // sign of <g, n1>

    /// Attach per-station values to the s1 grid.
    ScalarSeries series(std::vector<double> values) const {
        return ScalarSeries::uniform(0.0, h1, std::move(values));
    }
};

/// Build the pair from a partner curve and a nonzero offset constant.
/// n_stations >= 16. Errors: ZeroLambda, SingularOffset, DegenerateSweep,
/// plus anything the framing pipeline throws.
MannheimPair build_pair(std::shared_ptr<const SurfacePatch> partner_patch,
                        std::shared_ptr<const ParamCurve> partner_curve, double lambda,
                        int n_stations);

/// Result of testing two arbitrary framed curves for the Mannheim D-property:
/// correspondence by closest point along the candidate partner's normal line,
/// then coincidence |<g_A, n_B>| = 1 and constancy of the offset length.
struct CandidateCheck {
    bool is_pair = false;
    double lambda_estimate = 0.0;
    double worst_coincidence = 0.0;      // max | |<g_A, n_B>| - 1 |
    std::vector<double> lambda_series;   // per-station offset lengths
};

/// Curve A plays the base role, curve B the partner role. Throws
/// NoCorrespondence when the closest-point match is ambiguous or the offset
/// is zero.
CandidateCheck check_candidate_pair(std::shared_ptr<const SurfacePatch> patch_a,
                                    std::shared_ptr<const ParamCurve> curve_a,
                                    std::shared_ptr<const SurfacePatch> patch_b,
                                    std::shared_ptr<const ParamCurve> curve_b, double tol);

}  // namespace darboux::mannheim
