#include "logfold/baselines.hpp"

#include "logfold/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace logfold {

FilterResult baseline_attribute_filter(const EventLog& log, const std::string& activity, double fraction,
                                       std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ArgumentError("drop fraction must lie in [0,1]");
    FilterResult out;
    if (!log.has_activity(activity)) {
        out.log = log;
        out.warnings.push_back("activity '" + activity + "' does not occur; log left unchanged");
        return out;
    }

    std::vector<std::pair<std::size_t, std::size_t>> hits; // (trace, event)
    const auto& traces = log.traces();
    for (std::size_t t = 0; t < traces.size(); ++t)
        for (std::size_t e = 0; e < traces[t].events.size(); ++e)
            if (traces[t].events[e].activity == activity)
                hits.emplace_back(t, e);

    std::mt19937_64 rng(seed);
    for (std::size_t i = hits.size(); i > 1; --i)
        std::swap(hits[i - 1], hits[static_cast<std::size_t>(rng() % i)]);
    const auto drop = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(hits.size())));
    std::vector<std::vector<bool>> dropped(traces.size());
    for (std::size_t t = 0; t < traces.size(); ++t)
        dropped[t].assign(traces[t].events.size(), false);
    for (std::size_t i = 0; i < drop; ++i)
        dropped[hits[i].first][hits[i].second] = true;

    std::vector<Trace> kept;
    kept.reserve(traces.size());
    for (std::size_t t = 0; t < traces.size(); ++t) {
        Trace nt{traces[t].case_id, {}};
        for (std::size_t e = 0; e < traces[t].events.size(); ++e)
            if (!dropped[t][e])
                nt.events.push_back(traces[t].events[e]);
        if (!nt.empty())
            kept.push_back(std::move(nt));
    }
    out.log = EventLog::from_traces(std::move(kept), log.extra_columns());
    return out;
}

FilterResult baseline_endpoints_filter(const EventLog& log, const std::set<std::string>& starts,
                                       const std::set<std::string>& ends) {
    std::vector<Trace> kept;
    for (const auto& t : log.traces())
        if (!t.empty() && starts.count(t.events.front().activity) && ends.count(t.events.back().activity))
            kept.push_back(t);
    FilterResult out;
    if (kept.empty())
        out.warnings.push_back("endpoint filter removed every trace");
    out.log = EventLog::from_traces(std::move(kept), log.extra_columns());
    return out;
}

} // namespace logfold
