#include "darboux/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "darboux/errors.hpp"

namespace darboux::mannheim {

namespace {

/// Everything the identity formulas consume, precomputed once per pair.
/// Dotted quantities are derivatives with respect to s1 (the grid variable),
/// obtained by finite differences on the uniform grid; this is the reading
/// under which the COR1_* and EQ30 coefficient patterns close.
struct PairData {
    double lambda = 0.0;
    std::size_t n = 0;
    double h1 = 0.0;

    std::vector<double> kg, kn, tg;     // base curve x
    std::vector<double> kg1, kn1, tg1;  // partner curve x1
    std::vector<double> theta, cos_t, sin_t;
    std::vector<double> rho;  // ds/ds1
    std::vector<double> gdotn1;

    std::vector<double> d_tg1, d_kn1, d_theta, d_tg, d_kg;

    CurveClass base_class;
    CurveClass partner_class;
    double tol_class = kTolClass;
};

PairData make_pair_data(const MannheimPair& pair, double tol_class) {
    PairData d;
    d.lambda = pair.lambda;
    d.n = pair.partner.size();
    d.h1 = pair.h1;
    d.tol_class = tol_class;

    d.kg.resize(d.n);
    d.kn.resize(d.n);
    d.tg.resize(d.n);
    d.kg1.resize(d.n);
    d.kn1.resize(d.n);
    d.tg1.resize(d.n);
    d.cos_t.resize(d.n);
    d.sin_t.resize(d.n);
    d.gdotn1.resize(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        d.kg[i] = pair.base[i].inv.k_g;
        d.kn[i] = pair.base[i].inv.k_n;
        d.tg[i] = pair.base[i].inv.tau_g;
        d.kg1[i] = pair.partner[i].inv.k_g;
        d.kn1[i] = pair.partner[i].inv.k_n;
        d.tg1[i] = pair.partner[i].inv.tau_g;
        d.cos_t[i] = std::cos(pair.theta[i]);
        d.sin_t[i] = std::sin(pair.theta[i]);
        d.gdotn1[i] = pair.base[i].frame.g.dot(pair.partner[i].frame.n);
    }
    d.theta = pair.theta;
    d.rho = pair.speed_ratio;

    auto deriv = [&pair](const std::vector<double>& v) {
        return fd_derivative(pair.series(v)).values();
    };
    d.d_tg1 = deriv(d.tg1);
    d.d_kn1 = deriv(d.kn1);
    d.d_theta = deriv(d.theta);
    d.d_tg = deriv(d.tg);
    d.d_kg = deriv(d.kg);

    d.base_class = classify(pair.base, tol_class);
    d.partner_class = classify(pair.partner, tol_class);
    return d;
}

/// Residual assembled as a sum of terms; the largest |term| seen anywhere in
/// the series is the normalization scale (floored at 1 so that identically
/// tiny identities report their raw residual).
struct Residual {
    std::vector<double> r;
    double scale = 0.0;

    explicit Residual(std::size_t n) : r(n, 0.0) {}

    void add(std::size_t i, double term) {
        r[i] += term;
        scale = std::max(scale, std::abs(term));
    }
    void set(std::size_t i, double value, double term_scale) {
        r[i] = value;
        scale = std::max(scale, term_scale);
    }
};

enum class Gate {
    Always,
    MinAbsCos,
    MinAbsSin,
    BaseGeodesic,
    BaseAsymptotic,
    BasePrincipal,
    PartnerGeodesic,
    PartnerAsymptotic,
    PartnerPrincipal,
    BaseAsymPartnerGeodesic,
    BaseAsymPartnerAsym,
    BaseAsymPartnerPrincipal,
};

struct IdentitySpec {
    std::string id;
    Gate gate;
    std::function<Residual(const PairData&)> eval;
};

constexpr double kTrigGate = 1e-3;

std::optional<std::string> gate_reason(Gate gate, const PairData& d) {
    auto sup = [](const char* what, double value, double tol) {
        std::ostringstream os;
        os << what << " sup-norm " << value << " exceeds tolerance " << tol;
        return os.str();
    };
    auto base_geo = [&]() -> std::optional<std::string> {
        if (d.base_class.is_geodesic) return std::nullopt;
        return sup("base curve k_g", d.base_class.sup_k_g, d.tol_class);
    };
    auto base_asym = [&]() -> std::optional<std::string> {
        if (d.base_class.is_asymptotic) return std::nullopt;
        return sup("base curve k_n", d.base_class.sup_k_n, d.tol_class);
    };
    auto base_prin = [&]() -> std::optional<std::string> {
        if (d.base_class.is_principal) return std::nullopt;
        return sup("base curve tau_g", d.base_class.sup_tau_g, d.tol_class);
    };
    auto partner_geo = [&]() -> std::optional<std::string> {
        if (d.partner_class.is_geodesic) return std::nullopt;
        return sup("partner k_g1", d.partner_class.sup_k_g, d.tol_class);
    };
    auto partner_asym = [&]() -> std::optional<std::string> {
        if (d.partner_class.is_asymptotic) return std::nullopt;
        return sup("partner k_n1", d.partner_class.sup_k_n, d.tol_class);
    };
    auto partner_prin = [&]() -> std::optional<std::string> {
        if (d.partner_class.is_principal) return std::nullopt;
        return sup("partner tau_g1", d.partner_class.sup_tau_g, d.tol_class);
    };
    auto combine = [](std::optional<std::string> a,
                      std::optional<std::string> b) -> std::optional<std::string> {
        if (!a && !b) return std::nullopt;
        if (a && b) return *a + "; " + *b;
        return a ? a : b;
    };

    switch (gate) {
        case Gate::Always: return std::nullopt;
        case Gate::MinAbsCos: {
            double m = 1.0;
            for (double c : d.cos_t) m = std::min(m, std::abs(c));
            if (m > kTrigGate) return std::nullopt;
            std::ostringstream os;
            os << "min |cos theta| = " << m << " is not above " << kTrigGate;
            return os.str();
        }
        case Gate::MinAbsSin: {
            double m = 1.0;
            for (double s : d.sin_t) m = std::min(m, std::abs(s));
            if (m > kTrigGate) return std::nullopt;
            std::ostringstream os;
            os << "min |sin theta| = " << m << " is not above " << kTrigGate;
            return os.str();
        }
        case Gate::BaseGeodesic: return base_geo();
        case Gate::BaseAsymptotic: return base_asym();
        case Gate::BasePrincipal: return base_prin();
        case Gate::PartnerGeodesic: return partner_geo();
        case Gate::PartnerAsymptotic: return partner_asym();
        case Gate::PartnerPrincipal: return partner_prin();
        case Gate::BaseAsymPartnerGeodesic: return combine(base_asym(), partner_geo());
        case Gate::BaseAsymPartnerAsym: return combine(base_asym(), partner_asym());
        case Gate::BaseAsymPartnerPrincipal: return combine(base_asym(), partner_prin());
    }
    return std::nullopt;
}

// CHAR14 family: sign_kg1 = +1 selects CHAR14_P, -1 the sign-flipped CHAR14_M.
Residual eval_char14(const PairData& d, double sign_kg1) {
    Residual res(d.n);
    const double lam = d.lambda;
    for (std::size_t i = 0; i < d.n; ++i) {
        const double den = 1.0 - lam * d.kn1[i];
        const double rho0_sq = den * den + lam * lam * d.tg1[i] * d.tg1[i];
        res.add(i, -lam * d.d_tg1[i]);
        res.add(i, -(rho0_sq / den) * ((lam * d.kn1[i] - 1.0) / d.cos_t[i]) * d.kn[i]);
        res.add(i, -(rho0_sq / den) * sign_kg1 * d.kg1[i]);
        res.add(i, -lam * lam * d.tg1[i] * d.d_kn1[i] / den);
    }
    return res;
}

// EQ30 family: leading_kn1 switches the leading coefficient between k_n1
// (EQ30_KN1) and k_n (EQ30_KN).
Residual eval_eq30(const PairData& d, bool leading_kn1) {
    Residual res(d.n);
    const double lam = d.lambda;
    for (std::size_t i = 0; i < d.n; ++i) {
        const double rho = d.rho[i];
        const double rho2 = rho * rho;
        const double rho3 = rho2 * rho;
        const double one_lkg = 1.0 + lam * d.kg[i];
        const double lead = leading_kn1 ? d.kn1[i] : d.kn[i];
        res.add(i, d.kg1[i]);
        res.add(i, rho3 * lead * one_lkg * one_lkg);
        res.add(i, rho3 * lam * lam * d.tg[i] * d.tg[i] * d.kn[i]);
        res.add(i, -rho2 * lam * (d.d_tg[i] * one_lkg - lam * d.tg[i] * d.d_kg[i]));
    }
    return res;
}

const std::vector<IdentitySpec>& registry() {
    static const std::vector<IdentitySpec> specs = [] {
        std::vector<IdentitySpec> r;
        auto add = [&r](std::string id, Gate gate, std::function<Residual(const PairData&)> f) {
            r.push_back(IdentitySpec{std::move(id), gate, std::move(f)});
        };

        add("COINCIDE", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.set(i, std::abs(d.gdotn1[i]) - 1.0, 1.0);
            }
            return res;
        });

        add("TAN_THETA", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, std::tan(d.theta[i]));
                res.add(i, d.lambda * d.tg1[i] / (1.0 - d.lambda * d.kn1[i]));
            }
            return res;
        });

        add("SPEED_A", Gate::MinAbsCos, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.rho[i]);
                res.add(i, -(1.0 - d.lambda * d.kn1[i]) / d.cos_t[i]);
            }
            return res;
        });

        add("SPEED_B", Gate::MinAbsSin, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.rho[i]);
                res.add(i, d.lambda * d.tg1[i] / d.sin_t[i]);
            }
            return res;
        });

        add("SPEED_SQ", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                const double den = 1.0 - d.lambda * d.kn1[i];
                res.add(i, d.rho[i] * d.rho[i]);
                res.add(i, -den * den);
                res.add(i, -d.lambda * d.lambda * d.tg1[i] * d.tg1[i]);
            }
            return res;
        });

        add("THETA_DOT", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.d_theta[i]);
                res.add(i, d.kn[i] * d.rho[i]);
                res.add(i, d.kg1[i]);
            }
            return res;
        });

        add("CHAR15", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                const double den = 1.0 - lam * d.kn1[i];
                const double rho0_sq = den * den + lam * lam * d.tg1[i] * d.tg1[i];
                res.add(i, d.kn[i] * d.rho[i] * d.rho[i] * d.rho[i]);
                res.add(i, -lam * d.d_tg1[i] * den);
                res.add(i, -lam * lam * d.tg1[i] * d.d_kn1[i]);
                res.add(i, rho0_sq * d.kg1[i]);
            }
            return res;
        });

        add("CHAR14_P", Gate::Always, [](const PairData& d) { return eval_char14(d, +1.0); });
        add("CHAR14_M", Gate::Always, [](const PairData& d) { return eval_char14(d, -1.0); });

        add("THM2", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kg[i]);
                res.add(i, -d.kn1[i]);
                res.add(i, -d.lambda * (d.kg[i] * d.kn1[i] - d.tg[i] * d.tg1[i]));
            }
            return res;
        });

        add("EQ28_C", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.cos_t[i]);
                res.add(i, -(1.0 + d.lambda * d.kg[i]) * d.rho[i]);
            }
            return res;
        });

        add("EQ28_S", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.sin_t[i]);
                res.add(i, d.lambda * d.tg[i] * d.rho[i]);
            }
            return res;
        });

        add("T3_I", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kg1[i]);
                res.add(i, d.kn[i] * d.rho[i]);
                res.add(i, d.d_theta[i]);
            }
            return res;
        });

        add("T3_II", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.tg[i] * d.rho[i]);
                res.add(i, d.kn1[i] * d.sin_t[i]);
                res.add(i, -d.tg1[i] * d.cos_t[i]);
            }
            return res;
        });

        add("T3_III", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kg[i] * d.rho[i]);
                res.add(i, -d.kn1[i] * d.cos_t[i]);
                res.add(i, -d.tg1[i] * d.sin_t[i]);
            }
            return res;
        });

        add("T3_IV", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.tg1[i]);
                res.add(i, -(d.kg[i] * d.sin_t[i] + d.tg[i] * d.cos_t[i]) * d.rho[i]);
            }
            return res;
        });

        add("COR2_A", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.tg1[i]);
                res.add(i, -d.rho[i] * d.rho[i] * d.tg[i]);
            }
            return res;
        });

        add("COR2_B", Gate::Always, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.tg[i] * d.tg1[i]);
                res.add(i, -d.sin_t[i] * d.sin_t[i] / (d.lambda * d.lambda));
            }
            return res;
        });

        add("COR3", Gate::PartnerAsymptotic, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.tg[i]);
                res.add(i, -d.cos_t[i] * d.cos_t[i] * d.tg1[i]);
            }
            return res;
        });

        add("COR1_I", Gate::BaseGeodesic, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                const double rho = d.rho[i];
                res.add(i, d.kg1[i]);
                res.add(i, rho * rho * rho * (1.0 + lam * lam * d.tg[i] * d.tg[i]) * d.kn[i]);
                res.add(i, -rho * rho * lam * d.d_tg[i]);
            }
            return res;
        });

        add("COR1_II", Gate::BaseAsymptotic, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                const double rho2 = d.rho[i] * d.rho[i];
                res.add(i, d.kg1[i]);
                res.add(i, -lam * rho2 *
                               (d.d_tg[i] * (1.0 + lam * d.kg[i]) - lam * d.tg[i] * d.d_kg[i]));
            }
            return res;
        });

        add("COR1_III", Gate::BasePrincipal, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                const double rho = d.rho[i];
                const double one_lkg = 1.0 + lam * d.kg[i];
                res.add(i, d.kg1[i]);
                res.add(i, rho * rho * rho * one_lkg * one_lkg * d.kn[i]);
            }
            return res;
        });

        add("SC_T1_I", Gate::BaseAsymPartnerGeodesic, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.d_tg1[i]);
                res.add(i, lam * d.tg1[i] * d.d_kn1[i] / (1.0 - lam * d.kn1[i]));
            }
            return res;
        });

        add("SC_T1_II", Gate::BaseAsymPartnerAsym, [](const PairData& d) {
            Residual res(d.n);
            const double lam = d.lambda;
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, lam * d.d_tg1[i]);
                res.add(i, (1.0 + lam * lam * d.tg1[i] * d.tg1[i]) * d.kg1[i]);
            }
            return res;
        });

        add("SC_T1_III", Gate::BaseAsymPartnerPrincipal, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                const double a = std::abs(d.kg1[i]);
                const double b = std::abs(d.kn1[i] - 1.0 / d.lambda);
                res.set(i, std::min(a, b), std::max(a, b));
            }
            return res;
        });

        add("SC_T2_I", Gate::PartnerAsymptotic, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kg[i]);
                res.add(i, d.lambda * d.tg[i] * d.tg1[i]);
            }
            return res;
        });

        auto thm2_special = [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kg[i]);
                res.add(i, -d.kn1[i]);
                res.add(i, -d.lambda * d.kg[i] * d.kn1[i]);
            }
            return res;
        };
        add("SC_T2_II", Gate::PartnerPrincipal, thm2_special);

        add("SC_T2_III", Gate::BaseGeodesic, [](const PairData& d) {
            Residual res(d.n);
            for (std::size_t i = 0; i < d.n; ++i) {
                res.add(i, d.kn1[i]);
                res.add(i, -d.lambda * d.tg[i] * d.tg1[i]);
            }
            return res;
        });

        add("SC_T2_IV", Gate::BasePrincipal, thm2_special);

        add("EQ30_KN", Gate::Always, [](const PairData& d) { return eval_eq30(d, false); });
        add("EQ30_KN1", Gate::Always, [](const PairData& d) { return eval_eq30(d, true); });

        return r;
    }();
    return specs;
}

IdentityResult evaluate(const IdentitySpec& spec, const PairData& d) {
    IdentityResult out;
    out.id = spec.id;
    if (const auto reason = gate_reason(spec.gate, d)) {
        out.applicable = false;
        out.gate_reason = *reason;
        return out;
    }
    out.applicable = true;
    Residual res = spec.eval(d);
    out.residual = ScalarSeries::uniform(0.0, d.h1, std::move(res.r));
    out.max_abs = out.residual.max_abs();
    out.rms = out.residual.rms();
    out.normalized_max = out.max_abs / std::max(1.0, res.scale);
    return out;
}

}  // namespace

const IdentityResult& VerificationReport::find(const std::string& id) const {
    for (const auto& r : identities) {
        if (r.id == id) return r;
    }
    throw UnknownEntry("report has no identity '" + id + "'");
}

const std::vector<std::string>& identity_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& spec : registry()) v.push_back(spec.id);
        return v;
    }();
    return ids;
}

bool is_identity_id(const std::string& id) {
    const auto& ids = identity_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

VerificationReport verify_pair(const MannheimPair& pair, const std::vector<std::string>& ids,
                               double tol_class) {
    for (const auto& id : ids) {
        if (!is_identity_id(id)) {
            std::string valid;
            for (const auto& v : identity_ids()) {
                if (!valid.empty()) valid += ", ";
                valid += v;
            }
            throw UnknownEntry("unknown identity id '" + id + "'; valid ids: " + valid);
        }
    }

    const PairData data = make_pair_data(pair, tol_class);

    VerificationReport report;
    report.lambda = pair.lambda;
    report.n_stations = static_cast<int>(pair.partner.size());
    report.h1 = pair.h1;
    report.coincidence_sign = pair.coincidence_sign;

    auto requested = [&ids](const std::string& id) {
        return ids.empty() || std::find(ids.begin(), ids.end(), id) != ids.end();
    };

    std::optional<IdentityResult> char14_p, char14_m, eq30_kn, eq30_kn1;
    for (const auto& spec : registry()) {
        if (!requested(spec.id)) continue;
        IdentityResult result = evaluate(spec, data);
        if (spec.id == "CHAR14_P") char14_p = result;
        if (spec.id == "CHAR14_M") char14_m = result;
        if (spec.id == "EQ30_KN") eq30_kn = result;
        if (spec.id == "EQ30_KN1") eq30_kn1 = result;
        report.identities.push_back(std::move(result));
    }

    if (char14_p && char14_m) {
        report.char14.vanishing =
            (char14_m->normalized_max <= char14_p->normalized_max) ? "CHAR14_M" : "CHAR14_P";
        // The variants differ by 2 rho^2 k_g1/(1 - lambda k_n1); with k_g1
        // identically zero they coincide and the pair cannot adjudicate.
        report.char14.decidable = data.partner_class.sup_k_g > 1e-3;
    }
    if (eq30_kn && eq30_kn1) {
        report.eq30.vanishing =
            (eq30_kn->normalized_max <= eq30_kn1->normalized_max) ? "EQ30_KN" : "EQ30_KN1";
        double max_diff = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
            max_diff = std::max(max_diff, std::abs(data.kn[i] - data.kn1[i]));
        }
        report.eq30.decidable = max_diff > 1e-3;
    }
    return report;
}

}  // namespace darboux::mannheim
