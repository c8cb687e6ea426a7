#include <benchmark/benchmark.h>

#include <memory>

#include "darboux/arclength.hpp"
#include "darboux/catalog.hpp"
#include "darboux/dsl.hpp"
#include "darboux/framing.hpp"
#include "darboux/identities.hpp"
#include "darboux/mannheim.hpp"

using namespace darboux;

namespace {

struct HelixSetup {
    std::shared_ptr<SurfacePatch> patch;
    std::shared_ptr<ParamCurve> curve;
    ArcLengthTable table;

    HelixSetup() {
        const auto& entry = catalog::get_entry("cylinder");
        const auto& helix = entry.curve("helix");
        patch = entry.make_patch(entry.defaults);
        curve = helix.make(entry.defaults, helix.defaults);
        table = arc_length_table(patch, curve, 64);
    }
};

const HelixSetup& helix() {
    static const HelixSetup setup;
    return setup;
}

void BM_DarbouxStation(benchmark::State& state) {
    const auto& h = helix();
    const double L = h.table.total_length();
    double s = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(darboux_at(*h.patch, *h.curve, h.table, s));
        s += 0.1;
        if (s > L) s = 0.0;
    }
}
BENCHMARK(BM_DarbouxStation);

void BM_ArcLengthTable(benchmark::State& state) {
    const auto& h = helix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(arc_length_table(h.patch, h.curve,
                                                  static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_ArcLengthTable)->Arg(16)->Arg(64)->Arg(256);

void BM_DslJet(benchmark::State& state) {
    const auto patch = dsl::compile_surface(dsl::parse_surface(
        "cos(u)*(2 + 0.5*cos(v))", "sin(u)*(2 + 0.5*cos(v))", "0.5*sin(v)",
        Domain{-6.0, 6.0, -6.0, 6.0}));
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(patch->jet(u, 0.5 * u));
        u += 0.01;
        if (u > 6.0) u = -6.0;
    }
}
BENCHMARK(BM_DslJet);

void BM_BuildPair(benchmark::State& state) {
    const auto& h = helix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mannheim::build_pair(h.patch, h.curve, 0.25, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_BuildPair)->Arg(64)->Arg(256);

void BM_VerifyRegistry(benchmark::State& state) {
    const auto& h = helix();
    const mannheim::MannheimPair pair = mannheim::build_pair(h.patch, h.curve, 0.25, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mannheim::verify_pair(pair));
    }
}
BENCHMARK(BM_VerifyRegistry);

}  // namespace

BENCHMARK_MAIN();
