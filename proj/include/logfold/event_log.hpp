#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace logfold {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Performer assigned to events whose resource field is empty.
inline constexpr const char* kUnknownResource = "UNKNOWN";

struct Event {
    std::string case_id;
    std::string activity;
    std::string resource;
    Timestamp timestamp = 0;
    /// Values of columns beyond the four mapped ones, in header order.
    std::vector<std::string> extra;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;

    bool empty() const noexcept { return events.empty(); }
    std::size_t size() const noexcept { return events.size(); }
    Timestamp start() const { return events.front().timestamp; }
    Timestamp end() const { return events.back().timestamp; }

    bool operator==(const Trace&) const = default;
};

/// An immutable set of traces. Activity and resource rosters are kept in
/// first-appearance order, which downstream algorithms (community traversal,
/// activity dictionaries) rely on for determinism.
class EventLog {
public:
    EventLog() = default;

    /// Validates the trace invariants (non-empty ids, shared case id,
    /// non-decreasing timestamps, unique case ids) and derives the rosters.
    static EventLog from_traces(std::vector<Trace> traces,
                                std::vector<std::string> extra_columns = {});

    const std::vector<Trace>& traces() const noexcept { return traces_; }
    const std::vector<std::string>& activities() const noexcept { return activities_; }
    /// Distinct performers, excluding the UNKNOWN sentinel.
    const std::vector<std::string>& resources() const noexcept { return resources_; }
    const std::vector<std::string>& extra_columns() const noexcept { return extra_columns_; }

    bool has_activity(const std::string& a) const { return activity_set_.count(a) != 0; }
    std::size_t event_count() const noexcept { return event_count_; }
    std::size_t size() const noexcept { return traces_.size(); }
    bool empty() const noexcept { return traces_.empty(); }

    bool operator==(const EventLog& o) const {
        return traces_ == o.traces_ && extra_columns_ == o.extra_columns_;
    }

private:
    std::vector<Trace> traces_;
    std::vector<std::string> activities_;
    std::vector<std::string> resources_;
    std::set<std::string> activity_set_;
    std::vector<std::string> extra_columns_;
    std::size_t event_count_ = 0;
};

enum class TimestampFormat { Iso8601, Epoch };

struct ColumnMap {
    std::string case_id = "case_id";
    std::string activity = "activity";
    std::string resource = "resource";
    std::string timestamp = "timestamp";
};

TimestampFormat parse_timestamp_format(const std::string& name);

/// Accepts `YYYY-MM-DD[T| ]hh:mm:ss[.frac][Z|±hh:mm]` and date-only values.
Timestamp parse_iso8601(const std::string& text);
std::string format_iso8601(Timestamp ts);

EventLog parse_csv(const std::string& path, const ColumnMap& columns = {},
                   TimestampFormat format = TimestampFormat::Iso8601);
EventLog parse_csv_text(const std::string& text, const ColumnMap& columns = {},
                        TimestampFormat format = TimestampFormat::Iso8601);

std::string to_csv(const EventLog& log, TimestampFormat format = TimestampFormat::Iso8601);
void write_csv(const EventLog& log, const std::string& path,
               TimestampFormat format = TimestampFormat::Iso8601);

/// Backward differences of the timestamps; the first event gets 0.
std::vector<std::pair<std::string, std::int64_t>> execution_times(const Trace& trace);

/// Sorts by first-event timestamp (ties by case id) and puts the first
/// ceil(fraction * n) traces into the training log.
std::pair<EventLog, EventLog> temporal_split(const EventLog& log, double fraction);

std::int64_t remaining_time(const Trace& trace, std::size_t index);

} // namespace logfold
