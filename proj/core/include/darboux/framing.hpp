#pragma once

#include <optional>
#include <span>
#include <vector>

#include "darboux/arclength.hpp"
#include "darboux/curve.hpp"
#include "darboux/series.hpp"
#include "darboux/surface.hpp"
#include "darboux/vec3.hpp"

namespace darboux {

/// Orthonormal right-handed frame {T, g, n} along a curve on a surface:
/// unit tangent, tangent-plane normal g = n x T, and surface unit normal.
struct DarbouxFrame {
    Vec3 T, g, n;
};

/// The scalar invariants of the Darboux frame equations:
///   dT/ds =  k_g g + k_n n
///   dg/ds = -k_g T + tau_g n
///   dn/ds = -k_n T - tau_g g
struct FrameInvariants {
    double k_g = 0.0;
    double k_n = 0.0;
    double tau_g = 0.0;
};

/// Frenet data at a station. Defined only where the curvature exceeds
/// eps_curv; tau is set analytically when third derivatives exist, otherwise
/// filled by a finite-difference pass over the binormal series (or left empty).
struct FrenetData {
    Vec3 T, N, B;
    double kappa = 0.0;
    std::optional<double> tau;
    double phi = 0.0;  // angle between g and N
};

struct FrenetAtResult {
    double kappa = 0.0;
    std::optional<FrenetData> data;  // nullopt when kappa <= eps_curv
};

/// One arc-length station of a framed curve.
struct FramedSample {
    double s = 0.0;
    Vec3 x;
    DarbouxFrame frame;
    FrameInvariants inv;
    std::optional<FrenetData> frenet;
};

/// Sup-norm classification against the three vanishing criteria:
/// geodesic (k_g = 0), asymptotic (k_n = 0), principal (tau_g = 0).
struct CurveClass {
    bool is_geodesic = false;
    bool is_asymptotic = false;
    bool is_principal = false;
    double sup_k_g = 0.0;
    double sup_k_n = 0.0;
    double sup_tau_g = 0.0;
};

/// Frenet frame from embedded curve derivatives:
///   kappa = |x' x x''| / |x'|^3, B = (x' x x'')/|x' x x''|, N = B x T.
/// tau via <x' x x'', x'''>/|x' x x''|^2 when the jet carries a third
/// derivative. phi is not known here; the Darboux pipeline fills it.
FrenetAtResult frenet_at(const EmbeddedJet& jet);

/// Darboux frame and invariants at curve parameter t. This is the direct
/// extraction route: k_g = <dT/ds, g>, k_n = <dT/ds, n>, tau_g = <dg/ds, n>.
FramedSample frame_at_param(const SurfacePatch& patch, const ParamCurve& curve, double t);

/// Same extraction addressed by arc length through the table.
FramedSample darboux_at(const SurfacePatch& patch, const ParamCurve& curve,
                        const ArcLengthTable& table, double s);

/// Independent formula route:
///   k_g = <dx/ds, d2x/ds2 x n>, tau_g = <dx/ds, n x dn/ds>,
///   k_n = <d2x/ds2, n>.
FrameInvariants invariants_via_triple_products(const SurfacePatch& patch, const ParamCurve& curve,
                                   const ArcLengthTable& table, double s);

/// Angle between g and the Frenet principal normal, phi = atan2(k_n, k_g).
/// Throws UndefinedAngle where the curvature is below eps_curv.
double phi_angle(const FramedSample& sample);

CurveClass classify(std::span<const FramedSample> samples, double tol);

/// A framed curve sampled on a uniform arc-length grid.
struct FramedCurve {
    std::vector<FramedSample> samples;
    double s0 = 0.0;
    double h = 0.0;

    /// Attach per-sample values to this curve's grid.
    ScalarSeries series_of(const std::vector<double>& values) const;
};

/// Frame n_stations uniformly spaced samples over [s_begin, s_end]
/// (defaulting to the whole curve). Frenet tau is filled by differencing the
/// binormal series wherever no analytic third derivative exists and the frame
/// is defined at every station.
FramedCurve frame_series(const SurfacePatch& patch, const ParamCurve& curve,
                         const ArcLengthTable& table, int n_stations, double s_begin = 0.0,
                         double s_end = -1.0);

}  // namespace darboux
