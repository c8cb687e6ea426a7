#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/mannheim.hpp"
#include "darboux/series.hpp"

namespace darboux::mannheim {

/// One verified identity: raw residual series on the s1 grid plus summary
/// statistics. An unmet gate leaves the residual empty and explains itself.
struct IdentityResult {
    std::string id;
    bool applicable = false;
    std::string gate_reason;  // non-empty exactly when applicable is false
    ScalarSeries residual;
    double max_abs = 0.0;
    double rms = 0.0;
    /// max |residual| / max(1, largest |term| entering the identity).
    double normalized_max = 0.0;
};

/// Which of a pair of alternative identity readings vanished on this pair,
/// and whether the pair can tell them apart at all.
struct VariantAdjudication {
    std::string vanishing;   // id of the variant with smaller normalized residual
    bool decidable = false;  // false when the variants coincide on this pair
};

struct VerificationReport {
    double lambda = 0.0;
    int n_stations = 0;
    double h1 = 0.0;
    double coincidence_sign = 1.0;
    /// EQ28_C/EQ28_S (tangent decomposition of the partner) are verified with
    /// the ratio ds/ds1, the reading under which they close algebraically.
    std::string eq28_ratio = "ds/ds1";
    std::vector<IdentityResult> identities;
    VariantAdjudication char14;  // CHAR14_P vs CHAR14_M (decidable iff k_g1 != 0)
    VariantAdjudication eq30;    // EQ30_KN vs EQ30_KN1 (decidable iff k_n != k_n1 path differs)

    const IdentityResult& find(const std::string& id) const;
};

/// Ordered ids of the full registry.
const std::vector<std::string>& identity_ids();

bool is_identity_id(const std::string& id);

/// Evaluate the requested identities (all of them when ids is empty) on a
/// constructed pair. Gates classify the base/partner curves at tol_class.
/// Unknown ids throw UnknownEntry listing the valid ones.
VerificationReport verify_pair(const MannheimPair& pair,
                               const std::vector<std::string>& ids = {},
                               double tol_class = kTolClass);

}  // namespace darboux::mannheim
