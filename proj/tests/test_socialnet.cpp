#include "logfold/error.hpp"
#include "logfold/social_network.hpp"
#include "logfold/synthetic.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace logfold;

namespace {

Trace with_resources(const std::string& id, const std::vector<std::pair<std::string, std::string>>& evs) {
    Trace t{id, {}};
    long ts = 0;
    for (const auto& [a, r] : evs)
        t.events.push_back(Event{id, a, r, ts++, {}});
    return t;
}

} // namespace

TEST_CASE("example log handover topology") {
    const SocialNetwork sn = build_social_network(parse_csv(data_path("example_log.csv")));
    CHECK(sn.node_count() == 6);
    // John->Mike (case 1), Sue->Carol (case 3), Pete->? never hands over
    CHECK(sn.weight("John", "Mike") > 0.0);
    CHECK(sn.weight("Sue", "Carol") > 0.0);
    CHECK(sn.weight("Sue", "Clare") > 0.0);
    CHECK(sn.weight("John", "Pete") > 0.0);
    CHECK(sn.weight("John", "Clare") == 0.0);
    double maxw = 0.0;
    for (const auto& e : sn.edges()) {
        CHECK(e.weight > 0.0);
        CHECK(e.weight <= 1.0);
        maxw = std::max(maxw, e.weight);
    }
    CHECK(maxw == 1.0);
}

TEST_CASE("handover counting") {
    const EventLog log = EventLog::from_traces(
        {with_resources("1", {{"a", "x"}, {"b", "y"}}), with_resources("2", {{"a", "y"}, {"b", "x"}})});
    const SocialNetwork raw = build_social_network(log, false);
    CHECK(raw.edges().size() == 1);
    CHECK(raw.weight("x", "y") == 2.0);
    CHECK(raw.total_weight() == 2.0);

    const EventLog solo = EventLog::from_traces({with_resources("1", {{"a", "x"}, {"b", "x"}})});
    CHECK_THROWS_AS(build_social_network(solo), DegenerateError);
}

TEST_CASE("UNKNOWN performers are left out") {
    const EventLog log = EventLog::from_traces(
        {with_resources("1", {{"a", "x"}, {"b", kUnknownResource}, {"c", "y"}, {"d", "x"}})});
    const SocialNetwork sn = build_social_network(log, false);
    CHECK_FALSE(sn.has_node(kUnknownResource));
    CHECK(sn.weight("x", "y") == 1.0);
}

TEST_CASE("edge list loading") {
    const SocialNetwork sn = load_social_network(data_path("example_network.txt"));
    CHECK(sn.nodes() == std::vector<std::string>{"John", "Sue", "Mike", "Carol", "Peter", "Clare"});
    CHECK(sn.total_weight() == doctest::Approx(2.9).epsilon(1e-12));
    CHECK(sn.degree(sn.index_of("John")) == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(parse_social_network("").node_count() == 0);
    CHECK_THROWS_AS(parse_social_network("a,b,0\n"), ParseError);
    CHECK_THROWS_AS(parse_social_network("a,b,-1\n"), ParseError);
    CHECK_THROWS_AS(parse_social_network("a,b,1\nb,a,2\n"), ParseError);
    CHECK(parse_social_network(social_network_to_text(sn)).total_weight() == doctest::Approx(2.9));
}

TEST_CASE("property: degree identities and trace-order invariance") {
    SyntheticSpec spec;
    spec.cases = 200;
    const EventLog log = generate_synthetic(spec, 9);
    const SocialNetwork sn = build_social_network(log, false);
    double sum_k = 0.0, m = 0.0;
    for (std::size_t i = 0; i < sn.node_count(); ++i)
        sum_k += sn.degree(i);
    for (const auto& e : sn.edges())
        m += e.weight;
    CHECK(m == doctest::Approx(sn.total_weight()));
    CHECK(sum_k == doctest::Approx(2 * m));

    auto traces = log.traces();
    std::mt19937_64 rng(1);
    std::shuffle(traces.begin(), traces.end(), rng);
    const SocialNetwork shuffled = build_social_network(EventLog::from_traces(traces), false);
    for (const auto& e : sn.edges())
        CHECK(shuffled.weight(sn.nodes()[e.a], sn.nodes()[e.b]) == e.weight);
    CHECK(shuffled.edges().size() == sn.edges().size());
}
