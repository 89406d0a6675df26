#pragma once

#include "logfold/baselines.hpp"
#include "logfold/community.hpp"
#include "logfold/event_log.hpp"
#include "logfold/gspn.hpp"
#include "logfold/optimizer.hpp"
#include "logfold/prediction_points.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace logfold {

struct RunConfig {
    /// CSV log to read; the synthetic generator is used when absent.
    std::optional<std::string> input;
    ColumnMap columns{};
    TimestampFormat timestamp_format = TimestampFormat::Iso8601;
    /// Hand-built net (JSON) replacing alpha discovery.
    std::optional<std::string> model;
    /// Edge list replacing the handover network built from the log.
    std::optional<std::string> network;

    std::size_t cases = 1000;
    bool noise = false;

    double split_fraction = 0.8;
    std::size_t prefix_len = 8;
    std::size_t k = 3;
    std::uint64_t seed = 42;

    GammaMode gamma_mode = GammaMode::ValidationMae;
    double gamma_value = 0.0;
    double g = 1.0;

    /// Overrides the community-based point selection when non-empty.
    std::vector<std::string> points;
    std::size_t per_community = 1;
    std::optional<std::string> assess_point;
    OrDelayMode or_mode = OrDelayMode::Relabel;

    bool baselines = false;
    std::string attribute_activity = "CRP";
    double attribute_fraction = 0.5;
    std::set<std::string> endpoint_starts{"ER Registration", "ER Triage", "ER Sepsis Triage"};
    std::set<std::string> endpoint_ends{"Release A", "Release B", "Release C", "Release D"};

    std::string out_dir = "out";
    /// 0 keeps the OpenMP default.
    int threads = 0;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    OptimizerConfig optimizer_config() const;
};

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped, list values are comma-separated. Unknown keys and malformed
/// values raise ConfigError naming the line.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});
/// Inverse of parse_run_config. out_dir and threads are left out: they do not
/// affect results, and leaving them out keeps reports from different output
/// directories byte-identical.
std::string run_config_to_text(const RunConfig& cfg);

OrDelayMode parse_or_mode(const std::string& s);
std::string to_string(OrDelayMode m);

/// The point whose first occurrence sits furthest into the traces on
/// average (mean event index over the traces containing it). Ties go to
/// the earlier entry of `points`.
std::string latest_point(const EventLog& log, const std::vector<std::string>& points);

struct BaselineRow {
    std::string point;
    std::optional<double> original, proposed, attribute_filter, endpoint_filter;
};

struct BaselineComparison {
    std::vector<BaselineRow> rows;
    std::vector<std::string> warnings;
    std::size_t events_attribute_filter = 0;
    std::size_t events_endpoint_filter = 0;

    /// Mean |MAE_method - MAE_original| over the points every method could
    /// evaluate. `method` is "proposed", "attribute_filter" or
    /// "endpoint_filter".
    double deviation(const std::string& method) const;
    /// Same, restricted to one point.
    double deviation(const std::string& method, const std::string& point) const;
};

/// Applies both filters to the whole log and evaluates every point on the
/// same temporal split as the optimizer's before/after comparison.
BaselineComparison compare_baselines(const EventLog& log, const OptimizationReport& report,
                                     const std::vector<std::string>& points, const RunConfig& cfg);

struct ExperimentResult {
    EventLog log;
    Gspn net;
    ResourceCommunityNetwork communities;
    PredictionPointSet points;
    std::vector<FoldCandidate> candidates;
    OptimizationResult optimization;
    std::optional<BaselineComparison> baselines;
    std::vector<std::string> warnings;
};

/// Loads or generates the log; stage errors are rethrown as StageError.
EventLog load_experiment_log(const RunConfig& cfg);

/// discover -> social network -> communities -> points -> candidates ->
/// optimize -> baselines, without touching the file system except for the
/// optional model and network inputs.
ExperimentResult run_pipeline(const RunConfig& cfg, const EventLog& log);

/// Writes every report and artifact into cfg.out_dir and returns the file
/// names written, in order.
std::vector<std::string> write_reports(const ExperimentResult& res, const RunConfig& cfg);

/// load_experiment_log + run_pipeline + write_reports.
ExperimentResult run_experiment(const RunConfig& cfg);

// Report renderers, exposed for tests.
std::string deviation_table_csv(const OptimizationReport& r);
std::string deviation_table_markdown(const OptimizationReport& r);
std::string summary_table_csv(const OptimizationReport& r);
std::string summary_table_markdown(const OptimizationReport& r);
std::string point_mae_csv(const OptimizationReport& r, const std::optional<BaselineComparison>& b);
std::string baselines_csv(const BaselineComparison& b);
std::string baselines_markdown(const BaselineComparison& b);
std::string budget_summary_json(const OptimizationReport& r);

} // namespace logfold
