#include "logfold/event_log.hpp"

#include "logfold/error.hpp"
#include "logfold/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace logfold {

EventLog EventLog::from_traces(std::vector<Trace> traces, std::vector<std::string> extra_columns) {
    EventLog log;
    std::set<std::string> case_ids;
    std::set<std::string> seen_resources;
    for (const Trace& t : traces) {
        if (t.case_id.empty())
            throw ArgumentError("trace with empty case id");
        if (!case_ids.insert(t.case_id).second)
            throw ArgumentError("duplicate case id: " + t.case_id);
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            const Event& e = t.events[i];
            if (e.case_id != t.case_id)
                throw ArgumentError("event case id '" + e.case_id + "' inside trace '" + t.case_id + "'");
            if (e.activity.empty())
                throw ArgumentError("event with empty activity in case " + t.case_id);
            if (i > 0 && e.timestamp < t.events[i - 1].timestamp)
                throw ArgumentError("timestamps decrease inside case " + t.case_id);
            if (log.activity_set_.insert(e.activity).second)
                log.activities_.push_back(e.activity);
            if (e.resource != kUnknownResource && seen_resources.insert(e.resource).second)
                log.resources_.push_back(e.resource);
            ++log.event_count_;
        }
    }
    log.traces_ = std::move(traces);
    log.extra_columns_ = std::move(extra_columns);
    return log;
}

TimestampFormat parse_timestamp_format(const std::string& name) {
    if (name == "iso8601" || name == "iso")
        return TimestampFormat::Iso8601;
    if (name == "epoch")
        return TimestampFormat::Epoch;
    throw ArgumentError("unknown timestamp format '" + name + "' (expected iso8601 or epoch)");
}

namespace {

bool read_int(const std::string& s, std::size_t& pos, std::size_t digits, int& out) {
    if (pos + digits > s.size())
        return false;
    int v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9')
            return false;
        v = v * 10 + (c - '0');
    }
    pos += digits;
    out = v;
    return true;
}

bool expect(const std::string& s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

} // namespace

Timestamp parse_iso8601(const std::string& text) {
    using namespace std::chrono;
    const auto fail = [&]() -> Timestamp { throw ArgumentError("unparseable timestamp '" + text + "'"); };
    std::size_t pos = 0;
    int y, mo, d, h = 0, mi = 0, s = 0;
    if (!read_int(text, pos, 4, y) || !expect(text, pos, '-') || !read_int(text, pos, 2, mo) ||
        !expect(text, pos, '-') || !read_int(text, pos, 2, d))
        return fail();
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return fail();
    long offset = 0;
    if (pos < text.size()) {
        if (text[pos] != 'T' && text[pos] != ' ')
            return fail();
        ++pos;
        if (!read_int(text, pos, 2, h) || !expect(text, pos, ':') || !read_int(text, pos, 2, mi))
            return fail();
        if (expect(text, pos, ':') && !read_int(text, pos, 2, s))
            return fail();
        if (h > 23 || mi > 59 || s > 60)
            return fail();
        if (expect(text, pos, '.')) {
            // sub-second precision is dropped
            const std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos == start)
                return fail();
        }
        if (pos < text.size()) {
            const char z = text[pos];
            if (z == 'Z') {
                ++pos;
            } else if (z == '+' || z == '-') {
                ++pos;
                int oh, om = 0;
                if (!read_int(text, pos, 2, oh))
                    return fail();
                expect(text, pos, ':');
                if (pos < text.size() && !read_int(text, pos, 2, om))
                    return fail();
                offset = (z == '+' ? 1 : -1) * (oh * 3600L + om * 60L);
            }
        }
        if (pos != text.size())
            return fail();
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<Timestamp>(days) * 86400 + h * 3600 + mi * 60 + s - offset;
}

std::string format_iso8601(Timestamp ts) {
    using namespace std::chrono;
    const auto tp = sys_seconds{seconds{ts}};
    const auto dp = floor<days>(tp);
    const year_month_day ymd{dp};
    const hh_mm_ss hms{tp - dp};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

namespace {

Timestamp parse_timestamp(const std::string& text, TimestampFormat fmt) {
    if (fmt == TimestampFormat::Iso8601)
        return parse_iso8601(text);
    Timestamp v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ArgumentError("unparseable epoch timestamp '" + text + "'");
    return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

EventLog parse_csv_text(const std::string& text, const ColumnMap& columns, TimestampFormat format) {
    const auto records = parse_csv_records(text);
    if (records.empty())
        throw EmptyLogError("empty event log file");
    const auto& header = records.front().fields;
    const std::size_t ci = column_index(header, columns.case_id);
    const std::size_t ai = column_index(header, columns.activity);
    const std::size_t ri = column_index(header, columns.resource);
    const std::size_t ti = column_index(header, columns.timestamp);

    std::vector<std::size_t> extra_idx;
    std::vector<std::string> extra_names;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != ci && i != ai && i != ri && i != ti) {
            extra_idx.push_back(i);
            extra_names.push_back(header[i]);
        }

    std::vector<Trace> traces;
    std::unordered_map<std::string, std::size_t> trace_of;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(rec.fields.size()),
                             rec.line);
        Event e;
        e.case_id = rec.fields[ci];
        e.activity = rec.fields[ai];
        e.resource = rec.fields[ri].empty() ? kUnknownResource : rec.fields[ri];
        if (e.case_id.empty())
            throw ParseError("empty case id", rec.line);
        if (e.activity.empty())
            throw ParseError("empty activity", rec.line);
        try {
            e.timestamp = parse_timestamp(rec.fields[ti], format);
        } catch (const ArgumentError& err) {
            throw ParseError(err.what(), rec.line);
        }
        for (std::size_t i : extra_idx)
            e.extra.push_back(rec.fields[i]);
        auto [it, inserted] = trace_of.emplace(e.case_id, traces.size());
        if (inserted)
            traces.push_back(Trace{e.case_id, {}});
        traces[it->second].events.push_back(std::move(e));
    }
    if (traces.empty())
        throw EmptyLogError("event log has a header but no events");
    for (Trace& t : traces)
        std::stable_sort(t.events.begin(), t.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    return EventLog::from_traces(std::move(traces), std::move(extra_names));
}

EventLog parse_csv(const std::string& path, const ColumnMap& columns, TimestampFormat format) {
    return parse_csv_text(read_file(path), columns, format);
}

std::string to_csv(const EventLog& log, TimestampFormat format) {
    std::ostringstream out;
    out << "case_id,activity,resource,timestamp";
    for (const auto& c : log.extra_columns())
        out << ',' << csv_escape(c);
    out << '\n';
    for (const Trace& t : log.traces())
        for (const Event& e : t.events) {
            out << csv_escape(e.case_id) << ',' << csv_escape(e.activity) << ','
                << csv_escape(e.resource) << ','
                << (format == TimestampFormat::Iso8601 ? format_iso8601(e.timestamp)
                                                      : std::to_string(e.timestamp));
            for (std::size_t i = 0; i < log.extra_columns().size(); ++i)
                out << ',' << (i < e.extra.size() ? csv_escape(e.extra[i]) : std::string());
            out << '\n';
        }
    return out.str();
}

void write_csv(const EventLog& log, const std::string& path, TimestampFormat format) {
    write_file_atomic(path, to_csv(log, format));
}

std::vector<std::pair<std::string, std::int64_t>> execution_times(const Trace& trace) {
    if (trace.empty())
        throw ArgumentError("execution_times of an empty trace");
    std::vector<std::pair<std::string, std::int64_t>> out;
    out.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto d = i == 0 ? 0 : trace.events[i].timestamp - trace.events[i - 1].timestamp;
        out.emplace_back(trace.events[i].activity, d);
    }
    return out;
}

std::pair<EventLog, EventLog> temporal_split(const EventLog& log, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ArgumentError("split fraction must lie in (0,1)");
    if (log.empty())
        throw EmptyLogError("cannot split an empty log");
    std::vector<Trace> sorted = log.traces();
    std::sort(sorted.begin(), sorted.end(), [](const Trace& a, const Trace& b) {
        if (a.start() != b.start())
            return a.start() < b.start();
        return a.case_id < b.case_id;
    });
    const auto n_train = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size()) - 1e-9));
    std::vector<Trace> train(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Trace> test(sorted.begin() + static_cast<std::ptrdiff_t>(n_train), sorted.end());
    return {EventLog::from_traces(std::move(train), log.extra_columns()),
            EventLog::from_traces(std::move(test), log.extra_columns())};
}

std::int64_t remaining_time(const Trace& trace, std::size_t index) {
    if (index >= trace.size())
        throw ArgumentError("event index " + std::to_string(index) + " out of range");
    return trace.end() - trace.events[index].timestamp;
}

} // namespace logfold
