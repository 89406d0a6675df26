#pragma once

#include "logfold/event_log.hpp"
#include "logfold/gspn.hpp"
#include "logfold/parallel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logfold {

/// How an or-fold treats the per-trace member durations.
enum class OrDelayMode {
    Relabel,            ///< keep each trace's own duration, report the pooled mean
    OverwriteWithPooled ///< reset the member duration to the pooled mean (shifts later events)
};

struct FoldedActivity {
    std::string label;
    FoldKind kind = FoldKind::Sequence;
    std::vector<std::string> replaced;
    /// "sum" for sequences, "repeat-sum" for self-loops, "mean" for or blocks.
    std::string delay_rule;
    /// Pooled or-delay in seconds; empty for other kinds or when no trace matched.
    std::optional<double> pooled_delay;
    std::size_t traces_matched = 0;
};

/// Replaces every contiguous, in-order occurrence of the members with one
/// event. The new event keeps the last member's timestamp and resource, so
/// its execution time is the sum of the members'. A run starting the trace
/// keeps the first member's timestamp instead, which preserves the trace
/// span.
Trace fold_sequence(const Trace& trace, const FoldCandidate& cand, const std::string& label);

/// Collapses each maximal run of the member activity into one event, with
/// the same timestamp rule as fold_sequence.
Trace fold_self_loop(const Trace& trace, const FoldCandidate& cand, const std::string& label);

struct OrFold {
    EventLog log;
    double delay = 0.0; ///< mean member execution time over matching traces
    std::size_t traces_matched = 0;
};

/// Relabels the member event in every trace that contains exactly one
/// member event. Throws NotApplicableError when no trace qualifies.
OrFold fold_or(const EventLog& log, const FoldCandidate& cand, const std::string& label,
               OrDelayMode mode = OrDelayMode::Relabel);

struct SimplifyOptions {
    OrDelayMode or_mode = OrDelayMode::Relabel;
    Exec exec = Exec::Parallel;
};

struct SimplifiedLog {
    EventLog log;
    Gspn net;
    std::vector<FoldedActivity> folds;
};

/// Fresh label for the n-th (1-based) fold, `FOLD_<kind>_<n>`, suffixed with
/// `_x` until it collides with no existing activity.
std::string fold_label(FoldKind kind, std::size_t n, const std::set<std::string>& taken);

/// Applies all accepted folds to every trace and rewrites each matched
/// substructure in the net as one visible transition from entry to exit.
SimplifiedLog simplify_log(const EventLog& log, const Gspn& net, const std::vector<FoldCandidate>& accepted,
                           const SimplifyOptions& options = {});

/// Log-only variant used where the net is not needed.
SimplifiedLog simplify_log(const EventLog& log, const std::vector<FoldCandidate>& accepted,
                           const SimplifyOptions& options = {});

/// Per-trace kernel: `rules[i]` is applied to every trace. Serial reference
/// and OpenMP versions; results are identical.
struct TraceFoldRule {
    FoldCandidate candidate;
    std::string label;
};
std::vector<Trace> fold_traces_serial(const std::vector<Trace>& traces, const std::vector<TraceFoldRule>& rules);
std::vector<Trace> fold_traces_parallel(const std::vector<Trace>& traces, const std::vector<TraceFoldRule>& rules);

std::string fold_manifest_json(const std::vector<FoldedActivity>& folds);

} // namespace logfold
