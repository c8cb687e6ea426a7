#include "darboux/framing.hpp"

#include <cmath>
#include <string>

#include "darboux/errors.hpp"

namespace darboux {

namespace {

struct StationGeometry {
    Vec3 x;
    Vec3 dx_dt, d2x_dt2;         // raw parameter derivatives
    double speed = 0.0;          // |dx/dt|
    Vec3 T;                      // unit tangent
    Vec3 dT_ds;                  // tangent derivative in arc length
    Vec3 dxds, d2xds2;           // arc-length derivatives of position
    Vec3 n, dn_ds;               // surface normal along the curve
    std::optional<Vec3> d3;      // third parameter derivative if available
};

StationGeometry station_geometry(const SurfacePatch& patch, const ParamCurve& curve, double t) {
    const CurveJet c = curve.at(t);
    const EmbeddedJet e = embed_curve(patch, curve, t);

    StationGeometry g;
    g.x = e.x;
    g.dx_dt = e.d1;
    g.d2x_dt2 = e.d2;
    g.d3 = e.d3;
    g.speed = e.d1.norm();
    if (g.speed <= kEpsReg) {
        throw DegenerateSpeed("framing: |dx/dt| = " + std::to_string(g.speed) +
                              " at t = " + std::to_string(t));
    }
    const double v = g.speed;
    const double a = e.d1.dot(e.d2);

    g.T = e.d1 / v;
    g.dxds = g.T;
    // d2x/ds2 = x''/v^2 - x' <x', x''>/v^4
    g.d2xds2 = e.d2 / (v * v) - e.d1 * (a / (v * v * v * v));
    // dT/dt = x''/v - x' <x', x''>/v^3; dT/ds = dT/dt / v
    g.dT_ds = g.d2xds2;

    const SurfaceJet sj = patch.jet(c.u, c.v);
    const NormalJet nj = surface_normal_jet(sj);
    g.n = nj.n;
    const Vec3 dn_dt = nj.nu * c.du + nj.nv * c.dv;
    g.dn_ds = dn_dt / v;
    return g;
}

}  // namespace

FrenetAtResult frenet_at(const EmbeddedJet& jet) {
    FrenetAtResult out;
    const double v = jet.d1.norm();
    if (v <= kEpsReg) {
        throw DegenerateSpeed("frenet_at: vanishing speed");
    }
    const Vec3 cr = cross(jet.d1, jet.d2);
    const double crn = cr.norm();
    out.kappa = crn / (v * v * v);
    if (out.kappa <= kEpsCurv) {
        return out;  // N, B, tau, phi undefined rather than fabricated
    }
    FrenetData data;
    data.kappa = out.kappa;
    data.T = jet.d1 / v;
    data.B = cr / crn;
    data.N = cross(data.B, data.T);
    if (jet.d3) {
        data.tau = cr.dot(*jet.d3) / (crn * crn);
    }
    out.data = data;
    return out;
}

FramedSample frame_at_param(const SurfacePatch& patch, const ParamCurve& curve, double t) {
    const StationGeometry g = station_geometry(patch, curve, t);

    FramedSample sample;
    sample.x = g.x;
    sample.frame.T = g.T;
    sample.frame.n = g.n;
    sample.frame.g = cross(g.n, g.T);

    sample.inv.k_g = g.dT_ds.dot(sample.frame.g);
    sample.inv.k_n = g.dT_ds.dot(g.n);
    // dg/ds = dn/ds x T + n x dT/ds
    const Vec3 dg_ds = cross(g.dn_ds, g.T) + cross(g.n, g.dT_ds);
    sample.inv.tau_g = dg_ds.dot(g.n);

    EmbeddedJet jet;
    jet.x = g.x;
    jet.d1 = g.dx_dt;
    jet.d2 = g.d2x_dt2;
    jet.d3 = g.d3;
    FrenetAtResult fr = frenet_at(jet);
    if (fr.data) {
        fr.data->phi = std::atan2(sample.inv.k_n, sample.inv.k_g);
        sample.frenet = fr.data;
    }
    return sample;
}

FramedSample darboux_at(const SurfacePatch& patch, const ParamCurve& curve,
                        const ArcLengthTable& table, double s) {
    FramedSample sample = frame_at_param(patch, curve, table.param_at(s));
    sample.s = s;
    return sample;
}

FrameInvariants invariants_via_triple_products(const SurfacePatch& patch, const ParamCurve& curve,
                                   const ArcLengthTable& table, double s) {
    const StationGeometry g = station_geometry(patch, curve, table.param_at(s));
    FrameInvariants inv;
    inv.k_g = g.dxds.dot(cross(g.d2xds2, g.n));
    inv.tau_g = g.dxds.dot(cross(g.n, g.dn_ds));
    inv.k_n = g.d2xds2.dot(g.n);
    return inv;
}

double phi_angle(const FramedSample& sample) {
    if (!sample.frenet) {
        throw UndefinedAngle("phi_angle: curvature below eps_curv at s = " +
                             std::to_string(sample.s));
    }
    return std::atan2(sample.inv.k_n, sample.inv.k_g);
}

CurveClass classify(std::span<const FramedSample> samples, double tol) {
    CurveClass out;
    for (const FramedSample& s : samples) {
        out.sup_k_g = std::max(out.sup_k_g, std::abs(s.inv.k_g));
        out.sup_k_n = std::max(out.sup_k_n, std::abs(s.inv.k_n));
        out.sup_tau_g = std::max(out.sup_tau_g, std::abs(s.inv.tau_g));
    }
    out.is_geodesic = out.sup_k_g < tol;
    out.is_asymptotic = out.sup_k_n < tol;
    out.is_principal = out.sup_tau_g < tol;
    return out;
}

ScalarSeries FramedCurve::series_of(const std::vector<double>& values) const {
    return ScalarSeries::uniform(s0, h, values);
}

FramedCurve frame_series(const SurfacePatch& patch, const ParamCurve& curve,
                         const ArcLengthTable& table, int n_stations, double s_begin,
                         double s_end) {
    if (n_stations < 2) {
        throw Error("frame_series: need at least 2 stations");
    }
    if (s_end < 0.0) s_end = table.total_length();

    FramedCurve out;
    out.s0 = s_begin;
    out.h = (s_end - s_begin) / static_cast<double>(n_stations - 1);
    out.samples.reserve(static_cast<std::size_t>(n_stations));
    for (int i = 0; i < n_stations; ++i) {
        const double s = s_begin + out.h * static_cast<double>(i);
        out.samples.push_back(darboux_at(patch, curve, table, std::min(s, s_end)));
    }

    // tau fallback: difference the binormal when the whole series carries a
    // defined frame but no analytic third derivative.
    bool all_defined = true;
    bool needs_tau = false;
    for (const auto& s : out.samples) {
        if (!s.frenet) {
            all_defined = false;
            break;
        }
        if (!s.frenet->tau) needs_tau = true;
    }
    if (all_defined && needs_tau && n_stations >= 3) {
        std::vector<double> bx(out.samples.size()), by(out.samples.size()), bz(out.samples.size());
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
            const Vec3& B = out.samples[i].frenet->B;
            bx[i] = B.x;
            by[i] = B.y;
            bz[i] = B.z;
        }
        const ScalarSeries dbx = fd_derivative(ScalarSeries::uniform(s_begin, out.h, bx));
        const ScalarSeries dby = fd_derivative(ScalarSeries::uniform(s_begin, out.h, by));
        const ScalarSeries dbz = fd_derivative(ScalarSeries::uniform(s_begin, out.h, bz));
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
            auto& fr = *out.samples[i].frenet;
            if (!fr.tau) {
                const Vec3 dB{dbx[i], dby[i], dbz[i]};
                fr.tau = -dB.dot(fr.N);  // dB/ds = -tau N
            }
        }
    }
    return out;
}

}  // namespace darboux
