#include "darboux/mannheim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "darboux/errors.hpp"

namespace darboux::mannheim {

namespace {

void check_offset_station(double lambda, double k_n1, double s1) {
    if (std::abs(1.0 - lambda * k_n1) <= kSingularOffsetTol) {
        throw SingularOffset("offset: |1 - lambda k_n1| = " +
                                 std::to_string(std::abs(1.0 - lambda * k_n1)) + " at s1 = " +
                                 std::to_string(s1),
                             s1);
    }
}

class SweepPatch final : public SurfacePatch {
public:
    SweepPatch(std::shared_ptr<const RulingGenerator> gen, double half_width)
        : gen_(std::move(gen)), half_width_(half_width) {}

    SurfaceJet jet(double p, double q) const override {
        const GeneratorJet g = gen_->at(p);
        SurfaceJet j;
        j.p = g.c + g.r * q;
        j.pu = g.c1 + g.r1 * q;
        j.pv = g.r;
        j.puu = g.c2 + g.r2 * q;
        j.puv = g.r1;
        j.pvv = {0.0, 0.0, 0.0};
        return j;
    }

    Domain domain() const override {
        const Interval r = gen_->range();
        return {r.t_min, r.t_max, -half_width_, half_width_};
    }

private:
    std::shared_ptr<const RulingGenerator> gen_;
    double half_width_;
};

/// Mannheim offset generator: c = x1 + lambda n1, r = n1 along the partner.
class OffsetGenerator final : public RulingGenerator {
public:
    OffsetGenerator(std::shared_ptr<const SurfacePatch> patch,
                    std::shared_ptr<const ParamCurve> curve, double lambda)
        : patch_(std::move(patch)), curve_(std::move(curve)), lambda_(lambda) {}

    GeneratorJet at(double p) const override {
        const EmbeddedJet e = embed_curve(*patch_, *curve_, p);
        Vec3 n, n1, n2;
        normal_jets(p, n, n1, n2);
        GeneratorJet g;
        g.c = e.x + n * lambda_;
        g.c1 = e.d1 + n1 * lambda_;
        g.c2 = e.d2 + n2 * lambda_;
        g.r = n;
        g.r1 = n1;
        g.r2 = n2;
        return g;
    }

    Interval range() const override { return curve_->range(); }

private:
    std::shared_ptr<const SurfacePatch> patch_;
    std::shared_ptr<const ParamCurve> curve_;
    double lambda_;

    // n(t) and dn/dt from second-order patch data.
    void normal_first(double t, Vec3& n, Vec3& dn) const {
        const CurveJet c = curve_->at(t);
        const SurfaceJet j = patch_->jet(c.u, c.v);
        const NormalJet nj = surface_normal_jet(j);
        n = nj.n;
        dn = nj.nu * c.du + nj.nv * c.dv;
    }

    void normal_jets(double t, Vec3& n, Vec3& dn, Vec3& d2n) const {
        const CurveJet c = curve_->at(t);
        const auto j3 = patch_->jet3(c.u, c.v);
        if (!j3) {
            // Second derivative of the normal by differencing its analytic
            // first derivative; only non-analytic sources (compiled
            // expressions) take this path. Second-order one-sided stencils
            // keep the ends of the range at the same accuracy as the middle.
            normal_first(t, n, dn);
            const Interval r = curve_->range();
            const double h = 1e-5 * std::max(1.0, std::abs(t));
            Vec3 na, dna, nb, dnb;
            if (t + h > r.t_max) {
                normal_first(t - h, na, dna);
                normal_first(t - 2.0 * h, nb, dnb);
                d2n = (dn * 3.0 - dna * 4.0 + dnb) / (2.0 * h);
            } else if (t - h < r.t_min) {
                normal_first(t + h, na, dna);
                normal_first(t + 2.0 * h, nb, dnb);
                d2n = (dn * -3.0 + dna * 4.0 - dnb) / (2.0 * h);
            } else {
                normal_first(t + h, na, dna);
                normal_first(t - h, nb, dnb);
                d2n = (dna - dnb) / (2.0 * h);
            }
            return;
        }

        const SurfaceJet j = patch_->jet(c.u, c.v);
        // A = dP_u/dt, B = dP_v/dt along the curve, and their t-derivatives.
        const Vec3 A = j.pu, B = j.pv;
        const Vec3 A1 = j.puu * c.du + j.puv * c.dv;
        const Vec3 B1 = j.puv * c.du + j.pvv * c.dv;
        const Vec3 A2 = j3->puuu * (c.du * c.du) + j3->puuv * (2.0 * c.du * c.dv) +
                        j3->puvv * (c.dv * c.dv) + j.puu * c.ddu + j.puv * c.ddv;
        const Vec3 B2 = j3->puuv * (c.du * c.du) + j3->puvv * (2.0 * c.du * c.dv) +
                        j3->pvvv * (c.dv * c.dv) + j.puv * c.ddu + j.pvv * c.ddv;

        const Vec3 w = cross(A, B);
        const Vec3 w1 = cross(A1, B) + cross(A, B1);
        const Vec3 w2 = cross(A2, B) + cross(A1, B1) * 2.0 + cross(A, B2);

        const double m = w.norm();
        if (m <= kEpsReg) {
            throw DegenerateParameterization("offset_generator: non-regular partner point");
        }
        n = w / m;
        const double m1 = n.dot(w1);
        dn = (w1 - n * m1) / m;
        const double m2 = dn.dot(w1) + n.dot(w2);
        d2n = (w2 - dn * (2.0 * m1) - n * m2) / m;
    }
};

/// Base curve of the sweep: p -> (p, 0).
std::shared_ptr<ParamCurve> identity_curve(Interval range) {
    auto jet = [](double t) {
        CurveJet c;
        c.u = t;
        c.du = 1.0;
        return c;
    };
    return std::make_shared<FunctionalCurve>(jet, range);
}

}  // namespace

std::vector<Vec3> offset_curve(std::span<const FramedSample> partner, double lambda) {
    if (lambda == 0.0) {
        throw ZeroLambda("offset_curve: lambda must be nonzero");
    }
    std::vector<Vec3> out;
    out.reserve(partner.size());
    for (const FramedSample& s : partner) {
        check_offset_station(lambda, s.inv.k_n, s.s);
        out.push_back(s.x + s.frame.n * lambda);
    }
    return out;
}

std::shared_ptr<SurfacePatch> sweep_surface(std::shared_ptr<const RulingGenerator> generator,
                                            double half_width) {
    if (!(half_width > 0.0)) {
        throw Error("sweep_surface: half_width must be positive");
    }
    auto patch = std::make_shared<SweepPatch>(generator, half_width);
    const Interval r = generator->range();
    constexpr int kProbes = 65;
    for (int i = 0; i < kProbes; ++i) {
        const double p =
            r.t_min + (r.t_max - r.t_min) * static_cast<double>(i) / (kProbes - 1);
        for (const double q : {-half_width, 0.0, half_width}) {
            const SurfaceJet j = patch->jet(p, q);
            if (cross(j.pu, j.pv).norm() <= kEpsReg) {
                throw DegenerateSweep("sweep_surface: non-regular at p = " + std::to_string(p) +
                                      ", q = " + std::to_string(q));
            }
        }
    }
    return patch;
}

std::shared_ptr<RulingGenerator> offset_generator(std::shared_ptr<const SurfacePatch> patch,
                                                  std::shared_ptr<const ParamCurve> curve,
                                                  double lambda) {
    if (lambda == 0.0) {
        throw ZeroLambda("offset_generator: lambda must be nonzero");
    }
    return std::make_shared<OffsetGenerator>(std::move(patch), std::move(curve), lambda);
}

MannheimPair build_pair(std::shared_ptr<const SurfacePatch> partner_patch,
                        std::shared_ptr<const ParamCurve> partner_curve, double lambda,
                        int n_stations) {
    if (lambda == 0.0) {
        throw ZeroLambda("build_pair: lambda must be nonzero");
    }
    if (n_stations < 16) {
        throw Error("build_pair: need at least 16 stations, got " + std::to_string(n_stations));
    }

    MannheimPair pair;
    pair.partner_patch = partner_patch;
    pair.partner_curve = partner_curve;
    pair.lambda = lambda;

    const ArcLengthTable table1 =
        arc_length_table(partner_patch, partner_curve, std::max(n_stations, 64));
    const double L1 = table1.total_length();
    const int n = n_stations;
    pair.h1 = L1 / static_cast<double>(n - 1);

    // Partner samples on the uniform s1 grid; singular stations abort early.
    std::vector<double> t_station(static_cast<std::size_t>(n));
    pair.s1.resize(static_cast<std::size_t>(n));
    pair.partner.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        pair.s1[k] = pair.h1 * static_cast<double>(i);
        t_station[k] = table1.param_at(std::min(pair.s1[k], L1));
        FramedSample sample = frame_at_param(*partner_patch, *partner_curve, t_station[k]);
        sample.s = pair.s1[k];
        check_offset_station(lambda, sample.inv.k_n, sample.s);
        pair.partner.push_back(std::move(sample));
    }

    auto gen = offset_generator(partner_patch, partner_curve, lambda);

    // Strip half-width: keep |q r'| below |c'|/2 across the grid, capped by
    // the offset distance so the strip stays a local object.
    double min_c1 = std::numeric_limits<double>::infinity();
    double max_r1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const GeneratorJet g = gen->at(t_station[static_cast<std::size_t>(i)]);
        min_c1 = std::min(min_c1, g.c1.norm());
        max_r1 = std::max(max_r1, g.r1.norm());
    }
    double hw = 0.5 * min_c1 / std::max(max_r1, 1e-9);
    hw = std::min(hw, std::abs(lambda));
    hw = std::max(hw, 1e-3 * std::abs(lambda));
    pair.half_width = hw;

    pair.sweep = sweep_surface(gen, hw);
    pair.base_curve = identity_curve(partner_curve->range());

    const ArcLengthTable table_x =
        arc_length_table(pair.sweep, pair.base_curve, std::max(n_stations, 64));

    std::vector<double> theta_raw(static_cast<std::size_t>(n));
    pair.base.reserve(static_cast<std::size_t>(n));
    pair.speed_ratio.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double t = t_station[k];
        FramedSample sample = frame_at_param(*pair.sweep, *pair.base_curve, t);
        sample.s = table_x.arclength_at(t);

        const FramedSample& p1 = pair.partner[k];
        theta_raw[k] = std::atan2(sample.frame.T.dot(p1.frame.g), sample.frame.T.dot(p1.frame.T));

        const double partner_speed = embed_curve(*partner_patch, *partner_curve, t).d1.norm();
        pair.speed_ratio[k] = gen->at(t).c1.norm() / partner_speed;

        pair.base.push_back(std::move(sample));
    }
    pair.theta = unwrap_angles(theta_raw);
    pair.coincidence_sign =
        (pair.base.front().frame.g.dot(pair.partner.front().frame.n) >= 0.0) ? 1.0 : -1.0;
    return pair;
}

namespace {

struct RayDistance {
    double t = 0.0;
    double dist2 = 0.0;
};

// Squared distance from A(t) to the line b + span{dir}, dir unit.
double line_dist2(const Vec3& a, const Vec3& b, const Vec3& dir) {
    const Vec3 d = a - b;
    const double along = d.dot(dir);
    return d.norm2() - along * along;
}

}  // namespace

CandidateCheck check_candidate_pair(std::shared_ptr<const SurfacePatch> patch_a,
                                    std::shared_ptr<const ParamCurve> curve_a,
                                    std::shared_ptr<const SurfacePatch> patch_b,
                                    std::shared_ptr<const ParamCurve> curve_b, double tol) {
    const Interval range_a = curve_a->range();
    constexpr int kScan = 256;
    constexpr int kStations = 48;

    // Scale of the configuration for the ambiguity and zero-offset tests.
    std::vector<Vec3> a_scan(kScan);
    double scale = 0.0;
    for (int i = 0; i < kScan; ++i) {
        const double t =
            range_a.t_min + range_a.length() * static_cast<double>(i) / (kScan - 1);
        a_scan[static_cast<std::size_t>(i)] = embed_curve(*patch_a, *curve_a, t).x;
        if (i > 0) scale += (a_scan[static_cast<std::size_t>(i)] -
                             a_scan[static_cast<std::size_t>(i - 1)]).norm();
    }
    scale = std::max(scale, 1e-12);

    const ArcLengthTable table_b = arc_length_table(patch_b, curve_b, 64);
    const double L_b = table_b.total_length();

    CandidateCheck out;
    out.lambda_series.reserve(kStations);
    double lambda_sum = 0.0;

    for (int j = 0; j < kStations; ++j) {
        const double s1 = L_b * static_cast<double>(j) / (kStations - 1);
        const FramedSample b = darboux_at(*patch_b, *curve_b, table_b, std::min(s1, L_b));

        // Coarse scan of the distance from A to the offset line through b.
        const double step = range_a.length() / (kScan - 1);
        std::vector<double> d2(kScan);
        double best = std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i < kScan; ++i) {
            d2[static_cast<std::size_t>(i)] =
                line_dist2(a_scan[static_cast<std::size_t>(i)], b.x, b.frame.n);
            if (d2[static_cast<std::size_t>(i)] < best) {
                best = d2[static_cast<std::size_t>(i)];
                best_i = i;
            }
        }

        // Ambiguity: a second separated local minimum at comparable depth.
        const double ambig = best + tol * scale * scale;
        for (int i = 1; i + 1 < kScan; ++i) {
            if (std::abs(i - best_i) <= 3) continue;
            const auto k = static_cast<std::size_t>(i);
            if (d2[k] <= ambig && d2[k] <= d2[k - 1] && d2[k] <= d2[k + 1]) {
                throw NoCorrespondence("check_candidate_pair: multiple closest-point candidates");
            }
        }

        // Golden-section refinement around the best grid point.
        double lo = range_a.t_min + step * std::max(0, best_i - 1);
        double hi = range_a.t_min + step * std::min(kScan - 1, best_i + 1);
        auto f = [&](double t) {
            return line_dist2(embed_curve(*patch_a, *curve_a, t).x, b.x, b.frame.n);
        };
        constexpr double kGolden = 0.6180339887498949;
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 90 && (hi - lo) > 1e-13 * std::max(1.0, range_a.length()); ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = f(x2);
            }
        }
        const double t_star = 0.5 * (lo + hi);

        const FramedSample a = frame_at_param(*patch_a, *curve_a, t_star);
        const Vec3 d = a.x - b.x;
        if (d.norm() <= std::max(tol, 1e-9) * std::max(1.0, scale)) {
            throw NoCorrespondence(
                "check_candidate_pair: zero offset (the curves coincide at a station); "
                "lambda must be nonzero");
        }
        const double lam = d.dot(b.frame.n);
        const double coincide = std::abs(std::abs(a.frame.g.dot(b.frame.n)) - 1.0);
        out.lambda_series.push_back(lam);
        lambda_sum += lam;
        out.worst_coincidence = std::max(out.worst_coincidence, coincide);
    }

    const double mean = lambda_sum / static_cast<double>(out.lambda_series.size());
    double var = 0.0;
    for (double l : out.lambda_series) var += (l - mean) * (l - mean);
    const double sd = std::sqrt(var / static_cast<double>(out.lambda_series.size()));

    out.lambda_estimate = mean;
    out.is_pair = out.worst_coincidence < tol && sd < tol * std::abs(mean);
    return out;
}

}  // namespace darboux::mannheim
