#pragma once

#include "logfold/event_log.hpp"
#include "logfold/gspn.hpp"
#include "logfold/parallel.hpp"
#include "logfold/prediction_points.hpp"
#include "logfold/predictor.hpp"
#include "logfold/simplify.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logfold {

struct CandidateAssessment {
    FoldCandidate candidate;
    std::size_t k = 0;
    /// Worst-case |MAE_folded - MAE_original| over the assessed points.
    double mu = 0.0;
    bool selected = false;
    std::map<std::string, double> mae_original;
    std::map<std::string, double> mae_folded;
};

struct Budget {
    double gamma = 0.0;
    double g = 1.0;

    double limit() const noexcept { return g * gamma; }
    /// Throws ConfigError unless gamma and g are finite and non-negative.
    void validate() const;
};

struct OptimizerConfig {
    PredictorConfig predictor{};
    /// Train share of the temporal split used for every MAE measurement.
    double split_fraction = 0.8;
    OrDelayMode or_mode = OrDelayMode::Relabel;
    /// Assess only at this point instead of taking the worst case over all.
    std::optional<std::string> assess_point;
    Exec exec = Exec::Parallel;
};

/// Test MAE of a model trained on `train`, for every point that has samples
/// on both sides. Points without samples are left out. `base` is passed on
/// to evaluate_point.
std::map<std::string, double> point_maes(const EventLog& train, const EventLog& test,
                                         const std::vector<std::string>& points, const PredictorConfig& cfg,
                                         const ActivityDictionary* base = nullptr);

/// Folds `cand` alone into both logs and measures the MAE shift at each
/// point in `baseline`. The folded model codes activities with the
/// dictionary of `train`, extended by the fold label. Throws
/// ConsistencyError if a point is a member of the candidate or disappears
/// after folding.
CandidateAssessment assess_candidate(const EventLog& train, const EventLog& test, const FoldCandidate& cand,
                                     const std::map<std::string, double>& baseline, const OptimizerConfig& cfg);

std::vector<CandidateAssessment> assess_candidates_serial(const EventLog& train, const EventLog& test,
                                                          const std::vector<FoldCandidate>& cands,
                                                          const std::map<std::string, double>& baseline,
                                                          const OptimizerConfig& cfg);
std::vector<CandidateAssessment> assess_candidates_parallel(const EventLog& train, const EventLog& test,
                                                            const std::vector<FoldCandidate>& cands,
                                                            const std::map<std::string, double>& baseline,
                                                            const OptimizerConfig& cfg);

struct KnapsackSolution {
    std::vector<std::size_t> selected; // ascending indices
    std::size_t total_k = 0;
    double total_mu = 0.0;
};

/// Exact 0/1 knapsack: maximise the k sum with the mu sum (taken in index
/// order) at most `capacity`. Ties go to the smaller mu sum, then to the
/// lexicographically smallest index set. Branch-and-bound up to 20 items,
/// otherwise a dynamic program over the attainable k sums.
KnapsackSolution solve_knapsack(const std::vector<std::size_t>& k, const std::vector<double>& mu, double capacity);

/// Sets `selected` on each assessment according to the optimum.
std::vector<CandidateAssessment> solve_knapsack(std::vector<CandidateAssessment> assessments, const Budget& budget);

enum class GammaMode { ValidationMae, Fixed };
GammaMode parse_gamma_mode(const std::string& s);
std::string to_string(GammaMode m);

struct BudgetSpec {
    GammaMode gamma_mode = GammaMode::ValidationMae;
    double gamma_value = 0.0;
    double g = 1.0;
};

struct PointResult {
    std::string point;
    std::optional<double> mae_original;
    std::optional<double> mae_simplified;
};

struct OptimizationReport {
    Budget budget;
    std::vector<CandidateAssessment> assessments;
    std::vector<FoldedActivity> folds;
    std::vector<PointResult> points;
    std::size_t events_original = 0;
    std::size_t events_simplified = 0;

    double selected_mu() const;
    double reduction_percent() const;
};

struct OptimizationResult {
    SimplifiedLog simplified;
    OptimizationReport report;
};

/// Assesses every candidate on a fit/validation split of the training part
/// of `log`, solves the knapsack, folds the accepted candidates into the
/// whole log and compares train/test MAE before and after at every point.
/// A zero budget limit folds nothing.
OptimizationResult optimize_log(const EventLog& log, const Gspn& net, const std::vector<FoldCandidate>& candidates,
                                const PredictionPointSet& points, const BudgetSpec& budget,
                                const OptimizerConfig& cfg);

} // namespace logfold
