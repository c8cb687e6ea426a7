#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/framing.hpp"
#include "darboux/surface.hpp"

namespace darboux::catalog {

using Params = std::map<std::string, double>;

/// Closed-form (k_g, k_n, tau_g) along a curve as a function of its parameter.
using InvariantFn = std::function<FrameInvariants(double)>;

/// A named curve on a catalog surface. `expected` carries the closed-form
/// invariants under the entry's own P_u x P_v orientation; it is the ground
/// truth the framing pipeline is checked against.
struct CatalogCurve {
    std::string name;
    Params defaults;
    std::function<std::shared_ptr<ParamCurve>(const Params& surface, const Params& curve)> make;
    std::function<InvariantFn(const Params& surface, const Params& curve)> expected;
};

struct CatalogEntry {
    std::string name;
    Params defaults;
    std::function<std::shared_ptr<SurfacePatch>(const Params&)> make_patch;
    std::vector<CatalogCurve> curves;

    const CatalogCurve& curve(const std::string& curve_name) const;
};

/// Lookup by name; throws UnknownEntry for names absent from list_entries().
const CatalogEntry& get_entry(const std::string& name);

/// Alphabetized entry names.
std::vector<std::string> list_entries();

/// Merge overrides into defaults; unknown parameter names are errors.
Params merge_params(const Params& defaults, const Params& overrides);

}  // namespace darboux::catalog
