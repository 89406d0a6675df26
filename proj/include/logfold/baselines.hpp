#pragma once

#include "logfold/event_log.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace logfold {

struct FilterResult {
    EventLog log;
    std::vector<std::string> warnings;
};

/// Drops `fraction` of the events labelled `activity`, chosen by a seeded
/// shuffle (rounded to the nearest count). Traces left empty are removed.
/// An unknown activity leaves the log unchanged and adds a warning.
FilterResult baseline_attribute_filter(const EventLog& log, const std::string& activity, double fraction,
                                       std::uint64_t seed);

/// Keeps the traces that start with one of `starts` and end with one of
/// `ends`. An empty result is returned with a warning.
FilterResult baseline_endpoints_filter(const EventLog& log, const std::set<std::string>& starts,
                                       const std::set<std::string>& ends);

} // namespace logfold
