#include "logfold/gspn.hpp"
#include "logfold/optimizer.hpp"
#include "logfold/predictor.hpp"
#include "logfold/simplify.hpp"
#include "logfold/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace logfold;

namespace {

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    FeatureMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = n(rng);
    return m;
}

const EventLog& noisy_log() {
    static const EventLog log = [] {
        SyntheticSpec spec;
        spec.noise = NoiseSpec{};
        return generate_synthetic(spec, 42);
    }();
    return log;
}

template <bool Parallel>
void BM_KMeansAssign(benchmark::State& state) {
    const FeatureMatrix pts = random_matrix(static_cast<std::size_t>(state.range(0)), 16, 1);
    const FeatureMatrix cents = random_matrix(8, 16, 2);
    std::vector<std::size_t> assignment;
    for (auto _ : state) {
        const double w = Parallel ? kmeans_assign_parallel(pts, cents, assignment)
                                  : kmeans_assign_serial(pts, cents, assignment);
        benchmark::DoNotOptimize(w);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_BestStump(benchmark::State& state) {
    const FeatureMatrix x = random_matrix(static_cast<std::size_t>(state.range(0)), 16, 3);
    std::vector<double> res(x.rows());
    for (std::size_t i = 0; i < res.size(); ++i)
        res[i] = 3.0 * x(i, 2) - x(i, 7);
    const auto order = sort_columns(x);
    for (auto _ : state) {
        const Stump s = Parallel ? best_stump_parallel(x, order, res) : best_stump_serial(x, order, res);
        benchmark::DoNotOptimize(s);
    }
}

template <bool Parallel>
void BM_FoldTraces(benchmark::State& state) {
    const EventLog& log = noisy_log();
    const std::vector<TraceFoldRule> rules{
        {FoldCandidate{FoldKind::Sequence, {"ER Registration", "ER Triage", "ER Sepsis Triage"}, "p", "q"}, "F1"},
        {FoldCandidate{FoldKind::SelfLoop, {"CRP"}, "r", "r"}, "F2"},
        {FoldCandidate{FoldKind::SelfLoop, {"Vital Signs Check"}, "s", "s"}, "F3"}};
    for (auto _ : state) {
        auto out = Parallel ? fold_traces_parallel(log.traces(), rules) : fold_traces_serial(log.traces(), rules);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.size()));
}

template <bool Parallel>
void BM_AssessCandidates(benchmark::State& state) {
    const EventLog& log = noisy_log();
    const auto [train, test] = temporal_split(log, 0.8);
    const std::vector<std::string> points{"IV Antibiotics", "Admission NC"};
    const auto cands = detect_substructures(alpha_discover(log), {points.begin(), points.end()});
    OptimizerConfig cfg;
    cfg.predictor.boosting.rounds = 30;
    cfg.predictor.kmeans_restarts = 2;
    const auto base = point_maes(train, test, points, cfg.predictor);
    for (auto _ : state) {
        auto a = Parallel ? assess_candidates_parallel(train, test, cands, base, cfg)
                          : assess_candidates_serial(train, test, cands, base, cfg);
        benchmark::DoNotOptimize(a);
    }
}

} // namespace

BENCHMARK(BM_KMeansAssign<false>)->Name("kmeans_assign/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_KMeansAssign<true>)->Name("kmeans_assign/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(BM_BestStump<false>)->Name("best_stump/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_BestStump<true>)->Name("best_stump/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(BM_FoldTraces<false>)->Name("fold_traces/serial");
BENCHMARK(BM_FoldTraces<true>)->Name("fold_traces/parallel");
BENCHMARK(BM_AssessCandidates<false>)->Name("assess_candidates/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssessCandidates<true>)->Name("assess_candidates/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
