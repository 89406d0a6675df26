#include "logfold/community.hpp"
#include "logfold/error.hpp"
#include "logfold/social_network.hpp"
#include "logfold/synthetic.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace logfold;

namespace {

oracle::Matrix to_matrix(const SocialNetwork& sn) {
    oracle::Matrix w(sn.node_count(), std::vector<double>(sn.node_count(), 0.0));
    for (const auto& e : sn.edges())
        w[e.a][e.b] = w[e.b][e.a] = e.weight;
    return w;
}

SocialNetwork random_network(std::mt19937_64& rng, std::size_t n, double density) {
    SocialNetwork sn;
    for (std::size_t i = 0; i < n; ++i)
        sn.add_node("v" + std::to_string(i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (u(rng) < density)
                sn.add_weight(sn.nodes()[i], sn.nodes()[j], 0.1 + u(rng));
    if (sn.total_weight() == 0.0)
        sn.add_weight("v0", "v1", 1.0);
    return sn;
}

std::vector<std::vector<std::string>> groups(const ResourceCommunityNetwork& rcn) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : rcn.communities) {
        auto m = c.members;
        std::sort(m.begin(), m.end());
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("closed-form gain on the six-performer network") {
    const SocialNetwork sn = load_social_network(data_path("example_network.txt"));
    const Partition single = Partition::singletons(sn.node_count());
    const auto john = sn.index_of("John");
    const double to_sue = modularity_gain(sn, single, john, single.community_of(sn.index_of("Sue")));
    const double to_mike = modularity_gain(sn, single, john, single.community_of(sn.index_of("Mike")));
    const double to_carol = modularity_gain(sn, single, john, single.community_of(sn.index_of("Carol")));
    CHECK(std::abs(to_sue - 0.085) <= 0.001);
    CHECK(std::abs(to_mike - (-0.058)) <= 0.001);
    CHECK(std::abs(to_carol - (-0.058)) <= 0.001);

    const auto w = to_matrix(sn);
    const auto& lab = single.assignment();
    CHECK(to_sue == doctest::Approx(oracle::closed_gain(w, lab, john, lab[sn.index_of("Sue")])));
    CHECK(to_mike == doctest::Approx(oracle::closed_gain(w, lab, john, lab[sn.index_of("Mike")])));
    CHECK(to_sue == doctest::Approx(0.9 / (2 * 2.9) - 0.9 * 1.3 / (2 * 2.9 * 2.9)));
}

TEST_CASE("gain with no edge into the target is negative") {
    const SocialNetwork sn = load_social_network(data_path("example_network.txt"));
    const Partition p = Partition::singletons(sn.node_count());
    const double g = modularity_gain(sn, p, sn.index_of("John"), p.community_of(sn.index_of("Peter")));
    CHECK(g < 0.0);
    CHECK(g == doctest::Approx(-0.6 * 1.3 / (2 * 2.9 * 2.9)));
    CHECK_THROWS_AS(modularity_gain(sn, p, 0, p.community_of(0)), ArgumentError);
}

TEST_CASE("modularity against the literal double sum") {
    const SocialNetwork sn = load_social_network(data_path("example_network.txt"));
    const auto w = to_matrix(sn);
    const Partition single = Partition::singletons(sn.node_count());
    CHECK(modularity(sn, single) == 0.0);
    const Partition all = Partition::from_assignment(std::vector<std::size_t>(sn.node_count(), 0));
    CHECK(modularity(sn, all) == doctest::Approx(oracle::modularity(w, all.assignment())));

    SocialNetwork cliques;
    for (const auto* g : {"a", "b"})
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                cliques.add_weight(std::string(g) + std::to_string(i), std::string(g) + std::to_string(j), 1.0);
    const Partition by_clique = Partition::from_groups(cliques, {{"a0", "a1", "a2"}, {"b0", "b1", "b2"}});
    // each clique: 6 ordered pairs of (1 - 2*2/12) over 2m = 12
    CHECK(modularity(cliques, by_clique) == doctest::Approx(2 * 6 * (1.0 - 4.0 / 12.0) / 12.0));
    CHECK(modularity(cliques, by_clique) == doctest::Approx(oracle::modularity(to_matrix(cliques), by_clique.assignment())));
    CHECK_THROWS_AS(modularity(SocialNetwork{}, Partition{}), DegenerateError);
}

TEST_CASE("detection recovers the three communities") {
    const SocialNetwork sn = load_social_network(data_path("example_network.txt"));
    const auto rcn = louvain(sn);
    CHECK(groups(rcn) == std::vector<std::vector<std::string>>{{"Carol", "Mike"}, {"Clare", "Peter"}, {"John", "Sue"}});
    double loops = 0.0, inter = 0.0;
    for (const auto& c : rcn.communities)
        loops += c.loop_weight;
    for (const auto& [_, w] : rcn.inter_weights)
        inter += w;
    CHECK(loops + inter == doctest::Approx(sn.total_weight()));
    CHECK(inter == doctest::Approx(0.4));
}

TEST_CASE("two nodes joined by one edge") {
    SocialNetwork sn;
    sn.add_weight("a", "b", 1.0);
    const Partition p = Partition::singletons(2);
    // k_in / 2m equals boundary * k_i / 2m^2 here, so the closed form is exactly zero
    CHECK(modularity_gain(sn, p, 0, 1) == 0.0);
    CHECK(oracle::full_gain(to_matrix(sn), p.assignment(), 0, 1) == doctest::Approx(0.5));
    const auto rcn = louvain(sn);
    CHECK(rcn.communities.size() == 2);

    SocialNetwork triangle;
    triangle.add_weight("a", "b", 1.0);
    triangle.add_weight("b", "c", 1.0);
    triangle.add_weight("a", "c", 1.0);
    triangle.add_weight("c", "d", 0.1);
    triangle.add_weight("d", "e", 1.0);
    triangle.add_weight("e", "f", 1.0);
    triangle.add_weight("d", "f", 1.0);
    CHECK(groups(louvain(triangle)) == std::vector<std::vector<std::string>>{{"a", "b", "c"}, {"d", "e", "f"}});

    SocialNetwork edgeless;
    edgeless.add_node("a");
    edgeless.add_node("b");
    CHECK_THROWS_AS(louvain(edgeless), DegenerateError);
}

TEST_CASE("property: full gain oracle matches the exact change of Q") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 50; ++round) {
        const SocialNetwork sn = random_network(rng, 3 + rng() % 8, 0.5);
        const auto w = to_matrix(sn);
        std::vector<std::size_t> labels(sn.node_count());
        for (auto& l : labels)
            l = rng() % 3;
        const Partition p = Partition::from_assignment(labels);
        const std::size_t node = rng() % sn.node_count();
        for (std::size_t t = 0; t < p.size(); ++t) {
            if (t == p.community_of(node))
                continue;
            const double exact = modularity(sn, p.moved(node, t)) - modularity(sn, p);
            CHECK(oracle::full_gain(w, p.assignment(), node, t) == doctest::Approx(exact).epsilon(1e-9));
            CHECK(modularity_gain(sn, p, node, t) ==
                  doctest::Approx(oracle::closed_gain(w, p.assignment(), node, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: every accepted move raises modularity") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        const SocialNetwork sn = random_network(rng, 4 + rng() % 12, 0.3);
        std::vector<CommunityMove> moves;
        const auto rcn = louvain(sn, &moves);
        for (const auto& mv : moves) {
            CHECK(mv.gain > 0.0);
            CHECK(modularity(sn, mv.after) > modularity(sn, mv.before));
            if (mv.level == 0) {
                REQUIRE(mv.members.size() == 1);
                const std::size_t node = mv.members[0];
                const auto& joined = mv.after.communities()[mv.after.community_of(node)];
                REQUIRE(joined.size() > 1);
                const std::size_t peer = joined.front() == node ? joined.back() : joined.front();
                const std::size_t target = mv.before.community_of(peer);
                CHECK(mv.gain == doctest::Approx(modularity_gain(sn, mv.before, node, target)).epsilon(1e-9));
            }
        }
        // determinism and coverage
        CHECK(groups(louvain(sn)) == groups(rcn));
        std::size_t covered = 0;
        for (const auto& c : rcn.communities)
            covered += c.members.size();
        CHECK(covered == sn.node_count());
    }
}

TEST_CASE("community json lists members and weights") {
    const auto rcn = louvain(load_social_network(data_path("example_network.txt")));
    const std::string js = community_network_to_json(rcn);
    CHECK(js.find("\"members\"") != std::string::npos);
    CHECK(js.find("\"loop_weight\"") != std::string::npos);
}
