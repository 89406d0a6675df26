#include "logfold/simplify.hpp"

#include "logfold/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace logfold {

namespace {

/// Builds the replacement for events[first..last] (inclusive).
Event merged_event(const Trace& trace, std::size_t first, std::size_t last, const std::string& label) {
    Event e = trace.events[last];
    e.activity = label;
    if (first == 0)
        e.timestamp = trace.events[first].timestamp;
    return e;
}

bool matches_at(const Trace& trace, std::size_t pos, const std::vector<std::string>& members) {
    if (pos + members.size() > trace.size())
        return false;
    for (std::size_t k = 0; k < members.size(); ++k)
        if (trace.events[pos + k].activity != members[k])
            return false;
    return true;
}

std::size_t member_event_count(const Trace& trace, const std::set<std::string>& members) {
    return static_cast<std::size_t>(std::count_if(trace.events.begin(), trace.events.end(),
                                                  [&](const Event& e) { return members.count(e.activity) != 0; }));
}

Trace relabel_or(const Trace& trace, const FoldCandidate& cand, const std::string& label) {
    const std::set<std::string> members(cand.members.begin(), cand.members.end());
    if (member_event_count(trace, members) != 1)
        return trace;
    Trace out = trace;
    for (Event& e : out.events)
        if (members.count(e.activity))
            e.activity = label;
    return out;
}

Trace apply_rule(const Trace& trace, const TraceFoldRule& rule) {
    switch (rule.candidate.kind) {
    case FoldKind::Sequence: return fold_sequence(trace, rule.candidate, rule.label);
    case FoldKind::SelfLoop: return fold_self_loop(trace, rule.candidate, rule.label);
    case FoldKind::Or: return relabel_or(trace, rule.candidate, rule.label);
    }
    return trace;
}

Trace apply_rules(const Trace& trace, const std::vector<TraceFoldRule>& rules) {
    Trace t = trace;
    for (const auto& r : rules)
        t = apply_rule(t, r);
    return t;
}

} // namespace

Trace fold_sequence(const Trace& trace, const FoldCandidate& cand, const std::string& label) {
    if (cand.kind != FoldKind::Sequence)
        throw ArgumentError("fold_sequence needs a Sequence candidate");
    if (cand.members.empty())
        return trace;
    Trace out{trace.case_id, {}};
    out.events.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size();) {
        if (matches_at(trace, i, cand.members)) {
            out.events.push_back(merged_event(trace, i, i + cand.members.size() - 1, label));
            i += cand.members.size();
        } else {
            out.events.push_back(trace.events[i++]);
        }
    }
    return out;
}

Trace fold_self_loop(const Trace& trace, const FoldCandidate& cand, const std::string& label) {
    if (cand.kind != FoldKind::SelfLoop || cand.members.size() != 1)
        throw ArgumentError("fold_self_loop needs a single-member SelfLoop candidate");
    const std::string& a = cand.members.front();
    Trace out{trace.case_id, {}};
    out.events.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size();) {
        if (trace.events[i].activity != a) {
            out.events.push_back(trace.events[i++]);
            continue;
        }
        std::size_t j = i;
        while (j + 1 < trace.size() && trace.events[j + 1].activity == a)
            ++j;
        out.events.push_back(merged_event(trace, i, j, label));
        i = j + 1;
    }
    return out;
}

namespace {

struct OrStats {
    double delay = 0.0;
    std::size_t n = 0;
};

OrStats or_stats(const EventLog& log, const FoldCandidate& cand) {
    const std::set<std::string> members(cand.members.begin(), cand.members.end());
    double total = 0.0;
    std::size_t n = 0;
    for (const Trace& t : log.traces()) {
        if (member_event_count(t, members) != 1)
            continue;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (members.count(t.events[i].activity)) {
                total += i == 0 ? 0.0 : static_cast<double>(t.events[i].timestamp - t.events[i - 1].timestamp);
                break;
            }
        ++n;
    }
    return {n ? total / static_cast<double>(n) : 0.0, n};
}

/// Moves the fold event (and everything after it) so its execution time
/// equals `delay`.
Trace overwrite_or_delay(const Trace& trace, const std::string& label, double delay) {
    Trace out = trace;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.events[i].activity != label)
            continue;
        if (i == 0)
            break;
        const Timestamp want = out.events[i - 1].timestamp + static_cast<Timestamp>(std::llround(delay));
        const Timestamp shift = want - out.events[i].timestamp;
        for (std::size_t j = i; j < out.size(); ++j)
            out.events[j].timestamp += shift;
        break;
    }
    return out;
}

} // namespace

OrFold fold_or(const EventLog& log, const FoldCandidate& cand, const std::string& label, OrDelayMode mode) {
    if (cand.kind != FoldKind::Or)
        throw ArgumentError("fold_or needs an Or candidate");
    const OrStats stats = or_stats(log, cand);
    if (stats.n == 0)
        throw NotApplicableError("no trace contains exactly one member of the or block");
    std::vector<Trace> traces;
    traces.reserve(log.size());
    for (const Trace& t : log.traces()) {
        Trace r = relabel_or(t, cand, label);
        if (mode == OrDelayMode::OverwriteWithPooled)
            r = overwrite_or_delay(r, label, stats.delay);
        traces.push_back(std::move(r));
    }
    return {EventLog::from_traces(std::move(traces), log.extra_columns()), stats.delay, stats.n};
}

std::string fold_label(FoldKind kind, std::size_t n, const std::set<std::string>& taken) {
    std::string label = "FOLD_" + to_string(kind) + "_" + std::to_string(n);
    while (taken.count(label))
        label += "_x";
    return label;
}

std::vector<Trace> fold_traces_serial(const std::vector<Trace>& traces, const std::vector<TraceFoldRule>& rules) {
    std::vector<Trace> out;
    out.reserve(traces.size());
    for (const Trace& t : traces)
        out.push_back(apply_rules(t, rules));
    return out;
}

std::vector<Trace> fold_traces_parallel(const std::vector<Trace>& traces, const std::vector<TraceFoldRule>& rules) {
    std::vector<Trace> out(traces.size());
    const auto n = static_cast<long>(traces.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = apply_rules(traces[static_cast<std::size_t>(i)], rules);
    return out;
}

namespace {

void check_disjoint(const std::vector<FoldCandidate>& accepted) {
    std::set<std::string> seen;
    for (const auto& c : accepted)
        for (const auto& m : c.members)
            if (!seen.insert(m).second)
                throw ArgumentError("accepted folds overlap on activity '" + m + "'");
}

/// Replaces the candidate's subnet with one visible transition, or returns
/// the net unchanged when the substructure is not present.
Gspn rewrite_net(const Gspn& net, const FoldCandidate& cand, const std::string& label) {
    std::set<std::string> drop_transitions, drop_places;
    for (std::size_t k = 0; k < cand.members.size(); ++k) {
        const Transition* t = net.find_visible(cand.members[k]);
        if (!t)
            return net;
        drop_transitions.insert(t->id);
        if (cand.kind == FoldKind::Sequence && k + 1 < cand.members.size())
            for (const auto& p : net.postset(t->id))
                drop_places.insert(p);
    }
    if (!net.is_place(cand.entry) || !net.is_place(cand.exit))
        return net;
    if (cand.kind == FoldKind::SelfLoop && cand.entry != cand.exit)
        for (const auto& tau : net.postset(cand.exit)) {
            const Transition& u = net.transition(tau);
            const auto& post = net.postset(tau);
            if (!u.visible() && net.preset(tau).size() == 1 && post.size() == 1 && post.front() == cand.entry)
                drop_transitions.insert(tau);
        }

    std::vector<std::string> places;
    for (const auto& p : net.places())
        if (!drop_places.count(p))
            places.push_back(p);
    std::vector<Transition> transitions;
    bool inserted = false;
    for (const auto& t : net.transitions()) {
        if (drop_transitions.count(t.id)) {
            if (!inserted) {
                transitions.push_back(Transition{label, label});
                inserted = true;
            }
            continue;
        }
        transitions.push_back(t);
    }
    std::vector<Arc> arcs;
    for (const auto& a : net.arcs())
        if (!drop_transitions.count(a.source) && !drop_transitions.count(a.target) && !drop_places.count(a.source) &&
            !drop_places.count(a.target))
            arcs.push_back(a);
    arcs.push_back(Arc{cand.entry, label, 1});
    arcs.push_back(Arc{label, cand.exit, 1});
    return Gspn(std::move(places), std::move(transitions), std::move(arcs));
}

SimplifiedLog simplify_impl(const EventLog& log, const Gspn* net, const std::vector<FoldCandidate>& accepted,
                            const SimplifyOptions& options) {
    check_disjoint(accepted);
    std::set<std::string> taken(log.activities().begin(), log.activities().end());
    if (net) {
        const auto acts = net->activities();
        taken.insert(acts.begin(), acts.end());
        for (const auto& t : net->transitions())
            taken.insert(t.id);
    }

    SimplifiedLog out;
    std::vector<TraceFoldRule> rules;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        const auto& c = accepted[i];
        FoldedActivity f;
        f.label = fold_label(c.kind, i + 1, taken);
        taken.insert(f.label);
        f.kind = c.kind;
        f.replaced = c.members;
        switch (c.kind) {
        case FoldKind::Sequence: f.delay_rule = "sum"; break;
        case FoldKind::SelfLoop: f.delay_rule = "repeat-sum"; break;
        case FoldKind::Or: {
            f.delay_rule = "mean";
            const OrStats s = or_stats(log, c);
            if (s.n > 0)
                f.pooled_delay = s.delay;
            break;
        }
        }
        rules.push_back(TraceFoldRule{c, f.label});
        out.folds.push_back(std::move(f));
    }

    std::vector<Trace> traces = options.exec == Exec::Parallel ? fold_traces_parallel(log.traces(), rules)
                                                               : fold_traces_serial(log.traces(), rules);
    if (options.or_mode == OrDelayMode::OverwriteWithPooled)
        for (const auto& f : out.folds)
            if (f.kind == FoldKind::Or && f.pooled_delay)
                for (Trace& t : traces)
                    t = overwrite_or_delay(t, f.label, *f.pooled_delay);

    for (auto& f : out.folds)
        f.traces_matched = static_cast<std::size_t>(std::count_if(traces.begin(), traces.end(), [&](const Trace& t) {
            return std::any_of(t.events.begin(), t.events.end(), [&](const Event& e) { return e.activity == f.label; });
        }));

    out.log = EventLog::from_traces(std::move(traces), log.extra_columns());
    if (net) {
        Gspn g = *net;
        for (std::size_t i = 0; i < accepted.size(); ++i)
            g = rewrite_net(g, accepted[i], out.folds[i].label);
        out.net = std::move(g);
    }
    return out;
}

} // namespace

SimplifiedLog simplify_log(const EventLog& log, const Gspn& net, const std::vector<FoldCandidate>& accepted,
                           const SimplifyOptions& options) {
    return simplify_impl(log, &net, accepted, options);
}

SimplifiedLog simplify_log(const EventLog& log, const std::vector<FoldCandidate>& accepted,
                           const SimplifyOptions& options) {
    return simplify_impl(log, nullptr, accepted, options);
}

std::string fold_manifest_json(const std::vector<FoldedActivity>& folds) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& f : folds) {
        nlohmann::ordered_json jf;
        jf["label"] = f.label;
        jf["kind"] = to_string(f.kind);
        jf["members"] = f.replaced;
        jf["delay_rule"] = f.delay_rule;
        jf["pooled_delay_seconds"] =
            f.pooled_delay ? nlohmann::ordered_json(*f.pooled_delay) : nlohmann::ordered_json(nullptr);
        jf["traces_matched"] = f.traces_matched;
        j.push_back(std::move(jf));
    }
    return j.dump(2) + "\n";
}

} // namespace logfold
