#include "logfold/community.hpp"
#include "logfold/error.hpp"
#include "logfold/prediction_points.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace logfold;

namespace {

// The example log spells one performer "Pete"; the network file uses "Peter".
std::map<std::string, ActivitySet> example_profile() {
    auto profile = activities_by_performer(parse_csv(data_path("example_log.csv")));
    auto node = profile.extract("Pete");
    REQUIRE(!node.empty());
    node.key() = "Peter";
    profile.insert(std::move(node));
    return profile;
}

ActivitySet set_of(const CommunityActivities& ca, const ResourceCommunityNetwork& rcn, const std::string& member) {
    for (std::size_t i = 0; i < rcn.communities.size(); ++i)
        for (const auto& m : rcn.communities[i].members)
            if (m == member)
                return ca.sets[i];
    FAIL("member not found: " << member);
    return {};
}

} // namespace

TEST_CASE("activity sets of the example communities") {
    const auto rcn = louvain(load_social_network(data_path("example_network.txt")));
    const auto ca = community_activity_sets(example_profile(), rcn);
    CHECK(set_of(ca, rcn, "John") == ActivitySet{"A", "B", "C"});
    CHECK(set_of(ca, rcn, "Peter") == ActivitySet{"D", "E"});
    CHECK(set_of(ca, rcn, "Mike") == ActivitySet{"B", "C"});
    CHECK(ca.empty_communities.empty());
}

TEST_CASE("empty and all-in-one communities") {
    const EventLog log = make_log({{{"a", 0}, {"b", 1}, {"c", 2}}});
    ResourceCommunityNetwork rcn;
    rcn.communities = {Community{{"r1", "r2", "r3"}, 0.0}, Community{{"ghost"}, 0.0}};
    const auto ca = community_activity_sets(activities_by_performer(log), rcn);
    CHECK(ca.sets[0] == ActivitySet{"a", "b", "c"});
    CHECK(ca.sets[1].empty());
    CHECK(ca.empty_communities == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(community_activity_sets(log, rcn), ConsistencyError);
}

TEST_CASE("example sets admit a valid SDR") {
    const std::vector<ActivitySet> sets{{"A", "B", "C"}, {"D", "E"}, {"B", "C"}};
    const auto pts = select_prediction_points(sets);
    CHECK(pts.points.size() == 3);
    CHECK(pts.uncovered.empty());
    CHECK(is_valid_sdr(sets, pts.provenance));
    CHECK(pts.as_set() == std::set<std::string>{"A", "B", "D"});
    CHECK(is_valid_sdr(sets, {{"A", 0}, {"D", 1}, {"C", 2}}));
    CHECK_FALSE(is_valid_sdr(sets, {{"B", 0}, {"D", 1}, {"E", 2}}));
    CHECK_FALSE(is_valid_sdr(sets, {{"A", 0}, {"D", 0}}));
    CHECK(is_valid_sdr(sets, {{"A", 0}, {"B", 0}}, 2));
}

TEST_CASE("trivial and conflicting selections") {
    CHECK(select_prediction_points({{"X"}}).points == std::vector<std::string>{"X"});
    const auto clash = select_prediction_points({{"X"}, {"X"}});
    CHECK(clash.points.size() == 1);
    CHECK(clash.uncovered.size() == 1);
    CHECK(clash.points.size() == oracle::max_sdr({{"X"}, {"X"}}));
    CHECK_THROWS_AS(select_prediction_points({{}, {}}), ArgumentError);
}

TEST_CASE("several points per community") {
    const std::vector<ActivitySet> sets{{"a", "b", "c"}, {"c", "d"}};
    const auto pts = select_prediction_points(sets, 2);
    CHECK(pts.points.size() == 4);
    CHECK(is_valid_sdr(sets, pts.provenance, 2));
}

TEST_CASE("points from a user list") {
    const std::vector<ActivitySet> sets{{"a", "b"}, {"c"}};
    const auto pts = prediction_points_from_list({"c", "z"}, sets);
    CHECK(pts.points == std::vector<std::string>{"c", "z"});
    CHECK(pts.provenance.at("c") == 1);
    CHECK(pts.provenance.count("z") == 0);
}

TEST_CASE("property: matching is maximum and valid") {
    std::mt19937_64 rng(8);
    const std::vector<std::string> pool{"a", "b", "c", "d", "e", "f"};
    for (int round = 0; round < 300; ++round) {
        std::vector<ActivitySet> sets(1 + rng() % 8);
        for (auto& s : sets)
            for (const auto& a : pool)
                if (rng() % 3 == 0)
                    s.insert(a);
        sets[0].insert(pool[rng() % pool.size()]);
        const auto pts = select_prediction_points(sets);
        CHECK(is_valid_sdr(sets, pts.provenance));
        CHECK(pts.points.size() == oracle::max_sdr(sets));
        CHECK(pts.points.size() + pts.uncovered.size() == sets.size());
        CHECK(select_prediction_points(sets).points == pts.points);
    }
}
