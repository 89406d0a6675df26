#include "logfold/error.hpp"
#include "logfold/event_log.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace logfold;

TEST_CASE("example log parses into five cases") {
    const EventLog log = parse_csv(data_path("example_log.csv"));
    CHECK(log.size() == 5);
    CHECK(log.event_count() == 19);
    std::vector<std::string> acts = log.activities();
    std::sort(acts.begin(), acts.end());
    CHECK(acts == std::vector<std::string>{"A", "B", "C", "D", "E"});
    CHECK(log.resources().size() == 6);
    for (const auto& t : log.traces())
        CHECK(t.events.front().activity == "A");
}

TEST_CASE("single row and interleaved cases") {
    const EventLog one = parse_csv_text("case_id,activity,resource,timestamp\nx,a,r,2020-01-01T00:00:00Z\n");
    CHECK(one.size() == 1);
    CHECK(one.traces()[0].size() == 1);

    const EventLog two = parse_csv_text("case_id,activity,resource,timestamp\n"
                                        "p,b,r,2020-01-01T00:00:10Z\n"
                                        "q,a,r,2020-01-01T00:00:05Z\n"
                                        "p,a,r,2020-01-01T00:00:01Z\n"
                                        "q,b,r,2020-01-01T00:00:09Z\n");
    REQUIRE(two.size() == 2);
    for (const auto& t : two.traces()) {
        CHECK(t.events[0].activity == "a");
        CHECK(t.events[0].timestamp <= t.events[1].timestamp);
    }
}

TEST_CASE("equal timestamps keep file order") {
    const EventLog log = parse_csv_text("case_id,activity,resource,timestamp\n"
                                        "c,z,r,100\nc,y,r,100\nc,x,r,50\n",
                                        {}, TimestampFormat::Epoch);
    const auto& ev = log.traces()[0].events;
    CHECK(ev[0].activity == "x");
    CHECK(ev[1].activity == "z");
    CHECK(ev[2].activity == "y");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_csv_text("case_id,activity,timestamp\nc,a,1\n", {}, TimestampFormat::Epoch), SchemaError);
    try {
        parse_csv_text("case_id,activity,resource,timestamp\nc,a,r,2020-01-01\nc,b,r,not-a-date\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_csv_text(""), EmptyLogError);
}

TEST_CASE("missing resource maps to the sentinel") {
    const EventLog log = parse_csv_text("case_id,activity,resource,timestamp\nc,a,,1\nc,b,r,2\n", {},
                                        TimestampFormat::Epoch);
    CHECK(log.traces()[0].events[0].resource == kUnknownResource);
    CHECK(log.resources() == std::vector<std::string>{"r"});
}

TEST_CASE("custom column names and quoted fields") {
    const EventLog log = parse_csv_text("id,task,who,when,extra\n"
                                        "\"c,1\",\"say \"\"hi\"\"\",ann,5,x\n",
                                        ColumnMap{"id", "task", "who", "when"}, TimestampFormat::Epoch);
    CHECK(log.traces()[0].case_id == "c,1");
    CHECK(log.traces()[0].events[0].activity == "say \"hi\"");
    CHECK(log.extra_columns() == std::vector<std::string>{"extra"});
}

TEST_CASE("csv round trip") {
    const EventLog log = parse_csv(data_path("example_log.csv"));
    CHECK(parse_csv_text(to_csv(log)) == log);
    CHECK(parse_csv_text(to_csv(log, TimestampFormat::Epoch), {}, TimestampFormat::Epoch) == log);
}

TEST_CASE("iso8601 forms") {
    CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601("1970-01-02") == 86400);
    CHECK(parse_iso8601("2000-03-01 12:00:00+02:00") == parse_iso8601("2000-03-01T10:00:00Z"));
    CHECK(format_iso8601(951912000) == "2000-03-01T12:00:00Z");
}

TEST_CASE("execution times") {
    const Trace t = make_trace("c", {{"a", 100}, {"b", 160}, {"c", 160}});
    const auto d = execution_times(t);
    REQUIRE(d.size() == 3);
    CHECK(d[0].second == 0);
    CHECK(d[1].second == 60);
    CHECK(d[2].second == 0);
    CHECK(execution_times(make_trace("c", {{"a", 7}}))[0].second == 0);
    CHECK(execution_times(make_trace("c", {{"e", 0}, {"f", 90}}))[1] == std::pair<std::string, std::int64_t>{"f", 90});
}

TEST_CASE("remaining time") {
    const Trace t = make_trace("c", {{"a", 0}, {"b", 50}, {"c", 200}});
    CHECK(remaining_time(t, 1) == 150);
    CHECK(remaining_time(t, 2) == 0);
    CHECK(remaining_time(make_trace("c", {{"a", 10}, {"b", 10}, {"c", 10}}), 0) == 0);
    CHECK_THROWS_AS(remaining_time(t, 3), ArgumentError);
}

TEST_CASE("temporal split") {
    std::vector<std::vector<std::pair<std::string, long>>> ts;
    for (int i = 9; i >= 0; --i)
        ts.push_back({{"a", i * 10}, {"b", i * 10 + 5}});
    const EventLog log = make_log(ts);
    const auto [train, test] = temporal_split(log, 0.8);
    CHECK(train.size() == 8);
    CHECK(test.size() == 2);
    Timestamp max_train = 0;
    for (const auto& t : train.traces())
        max_train = std::max(max_train, t.start());
    for (const auto& t : test.traces())
        CHECK(t.start() >= max_train);

    const EventLog single = make_log({{{"a", 0}}});
    const auto [tr1, te1] = temporal_split(single, 0.8);
    CHECK(tr1.size() == 1);
    CHECK(te1.size() == 0);

    CHECK_THROWS_AS(temporal_split(log, 0.0), ArgumentError);
    CHECK_THROWS_AS(temporal_split(log, 1.0), ArgumentError);
}

TEST_CASE("temporal split with tied starts is deterministic") {
    const EventLog log = make_log({{{"a", 0}}, {{"a", 0}}, {{"a", 0}}, {{"a", 0}}, {{"a", 0}}});
    const auto first = temporal_split(log, 0.8);
    const auto second = temporal_split(log, 0.8);
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);
    CHECK(first.second.traces()[0].case_id == "c5");
}

TEST_CASE("property: timing identities on random traces") {
    std::mt19937_64 rng(7);
    std::vector<Trace> traces;
    for (int c = 0; c < 200; ++c) {
        std::vector<std::pair<std::string, long>> evs;
        long ts = static_cast<long>(rng() % 1000);
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            ts += static_cast<long>(rng() % 500);
            evs.push_back({"a" + std::to_string(rng() % 4), ts});
        }
        traces.push_back(make_trace("c" + std::to_string(c), evs));
    }
    const EventLog log = EventLog::from_traces(traces);
    for (const auto& t : log.traces()) {
        std::int64_t sum = 0;
        for (const auto& [_, d] : execution_times(t))
            sum += d;
        CHECK(sum == t.end() - t.start());
        for (std::size_t i = 1; i < t.size(); ++i)
            CHECK(remaining_time(t, i) <= remaining_time(t, i - 1));
    }
    const auto [train, test] = temporal_split(log, 0.7);
    CHECK(train.size() + test.size() == log.size());
    std::set<std::string> ids;
    for (const auto* part : {&train, &test})
        for (const auto& t : part->traces())
            CHECK(ids.insert(t.case_id).second);
}
