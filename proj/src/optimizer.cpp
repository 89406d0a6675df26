#include "logfold/optimizer.hpp"

#include "logfold/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

namespace logfold {

void Budget::validate() const {
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw ConfigError("budget gamma must be a non-negative number");
    if (!std::isfinite(g) || g < 0.0)
        throw ConfigError("budget g must be a non-negative number");
}

std::map<std::string, double> point_maes(const EventLog& train, const EventLog& test,
                                         const std::vector<std::string>& points, const PredictorConfig& cfg,
                                         const ActivityDictionary* base) {
    std::map<std::string, double> out;
    for (const auto& p : points) {
        try {
            out[p] = evaluate_point(train, test, p, cfg, base).mae;
        } catch (const NotApplicableError&) {
        }
    }
    return out;
}

CandidateAssessment assess_candidate(const EventLog& train, const EventLog& test, const FoldCandidate& cand,
                                     const std::map<std::string, double>& baseline, const OptimizerConfig& cfg) {
    for (const auto& [point, _] : baseline)
        if (std::find(cand.members.begin(), cand.members.end(), point) != cand.members.end())
            throw ConsistencyError("prediction point '" + point + "' is a member of a fold candidate");

    const SimplifyOptions opts{cfg.or_mode, Exec::Serial};
    const EventLog folded_train = simplify_log(train, {cand}, opts).log;
    const EventLog folded_test = simplify_log(test, {cand}, opts).log;

    const ActivityDictionary base(train);
    CandidateAssessment a;
    a.candidate = cand;
    a.k = cand.activity_count();
    for (const auto& [point, original] : baseline) {
        if (!folded_train.has_activity(point))
            throw ConsistencyError("prediction point '" + point + "' vanished after folding");
        const double folded = evaluate_point(folded_train, folded_test, point, cfg.predictor, &base).mae;
        a.mae_original[point] = original;
        a.mae_folded[point] = folded;
        a.mu = std::max(a.mu, std::abs(folded - original));
    }
    return a;
}

std::vector<CandidateAssessment> assess_candidates_serial(const EventLog& train, const EventLog& test,
                                                          const std::vector<FoldCandidate>& cands,
                                                          const std::map<std::string, double>& baseline,
                                                          const OptimizerConfig& cfg) {
    OptimizerConfig serial = cfg;
    serial.predictor.exec = Exec::Serial;
    serial.predictor.boosting.exec = Exec::Serial;
    std::vector<CandidateAssessment> out;
    out.reserve(cands.size());
    for (const auto& c : cands)
        out.push_back(assess_candidate(train, test, c, baseline, serial));
    return out;
}

std::vector<CandidateAssessment> assess_candidates_parallel(const EventLog& train, const EventLog& test,
                                                            const std::vector<FoldCandidate>& cands,
                                                            const std::map<std::string, double>& baseline,
                                                            const OptimizerConfig& cfg) {
    OptimizerConfig inner = cfg;
    inner.predictor.exec = Exec::Serial;
    inner.predictor.boosting.exec = Exec::Serial;
    std::vector<CandidateAssessment> out(cands.size());
    std::vector<std::exception_ptr> errors(cands.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(cands.size()); ++i) {
        const auto c = static_cast<std::size_t>(i);
        try {
            out[c] = assess_candidate(train, test, cands[c], baseline, inner);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

// --------------------------------------------------------------- knapsack

namespace {

struct BranchAndBound {
    const std::vector<std::size_t>& k;
    const std::vector<double>& mu;
    double capacity;
    std::vector<std::size_t> by_ratio;

    std::vector<std::size_t> current, best;
    std::size_t best_k = 0;
    double best_mu = 0.0;
    bool have_best = false;

    double bound(std::size_t next, double room) const {
        double ub = 0.0;
        for (std::size_t i : by_ratio) {
            if (i < next)
                continue;
            if (mu[i] <= room) {
                room -= mu[i];
                ub += static_cast<double>(k[i]);
            } else {
                ub += static_cast<double>(k[i]) * room / mu[i];
                break;
            }
        }
        return ub;
    }

    void visit(std::size_t next, std::size_t sum_k, double sum_mu) {
        if (next == k.size()) {
            if (!have_best || sum_k > best_k || (sum_k == best_k && sum_mu < best_mu)) {
                best = current;
                best_k = sum_k;
                best_mu = sum_mu;
                have_best = true;
            }
            return;
        }
        if (have_best && static_cast<double>(sum_k) + bound(next, capacity - sum_mu) < static_cast<double>(best_k) - 1e-9)
            return;
        const double with = sum_mu + mu[next];
        if (with <= capacity) {
            current.push_back(next);
            visit(next + 1, sum_k + k[next], with);
            current.pop_back();
        }
        visit(next + 1, sum_k, sum_mu);
    }
};

KnapsackSolution solve_branch_and_bound(const std::vector<std::size_t>& k, const std::vector<double>& mu,
                                        double capacity) {
    BranchAndBound bb{k, mu, capacity, {}, {}, {}};
    bb.by_ratio.resize(k.size());
    std::iota(bb.by_ratio.begin(), bb.by_ratio.end(), 0);
    std::stable_sort(bb.by_ratio.begin(), bb.by_ratio.end(), [&](std::size_t a, std::size_t b) {
        // k[a]/mu[a] > k[b]/mu[b], with mu = 0 ranking first
        return static_cast<double>(k[a]) * mu[b] > static_cast<double>(k[b]) * mu[a];
    });
    bb.visit(0, 0, 0.0);
    return {bb.best, bb.best_k, bb.best_mu};
}

KnapsackSolution solve_dynamic(const std::vector<std::size_t>& k, const std::vector<double>& mu, double capacity) {
    const std::size_t n = k.size();
    const std::size_t total = std::accumulate(k.begin(), k.end(), std::size_t{0});
    constexpr double inf = std::numeric_limits<double>::infinity();
    // f[i][p]: least mu sum reaching exactly k sum p with items i..n-1
    std::vector<std::vector<double>> f(n + 1, std::vector<double>(total + 1, inf));
    f[n][0] = 0.0;
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t p = 0; p <= total; ++p) {
            double v = f[i + 1][p];
            if (k[i] <= p && f[i + 1][p - k[i]] < inf)
                v = std::min(v, mu[i] + f[i + 1][p - k[i]]);
            f[i][p] = v;
        }
    std::size_t target = 0;
    for (std::size_t p = total + 1; p-- > 0;)
        if (f[0][p] <= capacity) {
            target = p;
            break;
        }

    KnapsackSolution sol;
    std::size_t p = target;
    double room = f[0][target];
    const double eps = 1e-9 * std::max(1.0, room);
    for (std::size_t i = 0; i < n && p > 0; ++i) {
        if (k[i] <= p && f[i + 1][p - k[i]] < inf && mu[i] + f[i + 1][p - k[i]] <= room + eps) {
            sol.selected.push_back(i);
            room -= mu[i];
            p -= k[i];
        }
    }
    for (std::size_t i : sol.selected) {
        sol.total_k += k[i];
        sol.total_mu += mu[i];
    }
    return sol;
}

} // namespace

KnapsackSolution solve_knapsack(const std::vector<std::size_t>& k, const std::vector<double>& mu, double capacity) {
    if (k.size() != mu.size())
        throw ArgumentError("knapsack: k and mu lengths differ");
    for (double m : mu)
        if (!(m >= 0.0) || !std::isfinite(m))
            throw ArgumentError("knapsack: deviations must be finite and non-negative");
    if (!(capacity >= 0.0))
        throw ArgumentError("knapsack: capacity must be non-negative");
    return k.size() <= 20 ? solve_branch_and_bound(k, mu, capacity) : solve_dynamic(k, mu, capacity);
}

std::vector<CandidateAssessment> solve_knapsack(std::vector<CandidateAssessment> assessments, const Budget& budget) {
    budget.validate();
    std::vector<std::size_t> k;
    std::vector<double> mu;
    for (const auto& a : assessments) {
        k.push_back(a.k);
        mu.push_back(a.mu);
    }
    const KnapsackSolution sol = solve_knapsack(k, mu, budget.limit());
    for (auto& a : assessments)
        a.selected = false;
    for (std::size_t i : sol.selected)
        assessments[i].selected = true;
    return assessments;
}

// -------------------------------------------------------------- pipeline

GammaMode parse_gamma_mode(const std::string& s) {
    if (s == "validation_mae")
        return GammaMode::ValidationMae;
    if (s == "fixed")
        return GammaMode::Fixed;
    throw ConfigError("unknown gamma_mode '" + s + "' (expected validation_mae or fixed)");
}

std::string to_string(GammaMode m) {
    return m == GammaMode::Fixed ? "fixed" : "validation_mae";
}

double OptimizationReport::selected_mu() const {
    double s = 0.0;
    for (const auto& a : assessments)
        if (a.selected)
            s += a.mu;
    return s;
}

double OptimizationReport::reduction_percent() const {
    if (events_original == 0)
        return 0.0;
    return 100.0 * (1.0 - static_cast<double>(events_simplified) / static_cast<double>(events_original));
}

OptimizationResult optimize_log(const EventLog& log, const Gspn& net, const std::vector<FoldCandidate>& candidates,
                                const PredictionPointSet& points, const BudgetSpec& budget_spec,
                                const OptimizerConfig& cfg) {
    if (points.points.empty())
        throw ArgumentError("no prediction points to optimise for");
    for (const auto& c : candidates)
        for (const auto& m : c.members)
            if (std::find(points.points.begin(), points.points.end(), m) != points.points.end())
                throw ArgumentError("fold candidate contains prediction point '" + m + "'");

    const auto [train, test] = temporal_split(log, cfg.split_fraction);
    const auto [fit, validation] = temporal_split(train, cfg.split_fraction);

    std::vector<std::string> assessed = points.points;
    if (cfg.assess_point) {
        if (std::find(assessed.begin(), assessed.end(), *cfg.assess_point) == assessed.end())
            throw ConfigError("assessment point '" + *cfg.assess_point + "' is not a prediction point");
        assessed = {*cfg.assess_point};
    }
    const auto baseline = point_maes(fit, validation, assessed, cfg.predictor);
    if (baseline.empty())
        throw DegenerateError("no prediction point has samples in both the fit and validation slices");

    OptimizationResult res;
    OptimizationReport& rep = res.report;
    rep.budget.g = budget_spec.g;
    if (budget_spec.gamma_mode == GammaMode::Fixed) {
        rep.budget.gamma = budget_spec.gamma_value;
    } else {
        double s = 0.0;
        for (const auto& [_, v] : baseline)
            s += v;
        rep.budget.gamma = s / static_cast<double>(baseline.size());
    }
    rep.budget.validate();

    rep.assessments = cfg.exec == Exec::Parallel ? assess_candidates_parallel(fit, validation, candidates, baseline, cfg)
                                                 : assess_candidates_serial(fit, validation, candidates, baseline, cfg);
    if (rep.budget.limit() > 0.0)
        rep.assessments = solve_knapsack(std::move(rep.assessments), rep.budget);

    std::vector<FoldCandidate> accepted;
    for (const auto& a : rep.assessments)
        if (a.selected)
            accepted.push_back(a.candidate);
    res.simplified = simplify_log(log, net, accepted, SimplifyOptions{cfg.or_mode, cfg.exec});
    rep.folds = res.simplified.folds;
    rep.events_original = log.event_count();
    rep.events_simplified = res.simplified.log.event_count();

    const auto before = point_maes(train, test, points.points, cfg.predictor);
    const auto [s_train, s_test] = temporal_split(res.simplified.log, cfg.split_fraction);
    const ActivityDictionary base(train);
    const auto after = point_maes(s_train, s_test, points.points, cfg.predictor, &base);
    for (const auto& p : points.points) {
        PointResult pr{p, {}, {}};
        if (auto it = before.find(p); it != before.end())
            pr.mae_original = it->second;
        if (auto it = after.find(p); it != after.end())
            pr.mae_simplified = it->second;
        rep.points.push_back(std::move(pr));
    }
    return res;
}

} // namespace logfold
