#include "logfold/community.hpp"

#include "logfold/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <set>

namespace logfold {

Partition Partition::from_assignment(const std::vector<std::size_t>& labels) {
    Partition p;
    std::map<std::size_t, std::size_t> dense;
    p.assignment_.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = dense.emplace(labels[i], p.communities_.size());
        if (inserted)
            p.communities_.emplace_back();
        p.assignment_[i] = it->second;
        p.communities_[it->second].push_back(i);
    }
    return p;
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = i;
    return from_assignment(labels);
}

Partition Partition::from_groups(const SocialNetwork& net, const std::vector<std::vector<std::string>>& groups) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> labels(net.node_count(), unset);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& name : groups[g]) {
            const std::size_t i = net.index_of(name);
            if (labels[i] != unset)
                throw ArgumentError("performer '" + name + "' appears in two groups");
            labels[i] = g;
        }
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == unset)
            throw ArgumentError("performer '" + net.nodes()[i] + "' is not in any group");
    return from_assignment(labels);
}

Partition Partition::moved(std::size_t node, std::size_t target) const {
    if (target >= communities_.size())
        throw ArgumentError("unknown community " + std::to_string(target));
    std::vector<std::size_t> labels = assignment_;
    labels.at(node) = target;
    return from_assignment(labels);
}

namespace {

void require_weight(double m) {
    if (!(m > 0.0))
        throw DegenerateError("network has no edge weight (m = 0)");
}

} // namespace

double modularity(const SocialNetwork& net, const Partition& part) {
    if (part.node_count() != net.node_count())
        throw ArgumentError("partition does not cover the network");
    const double m = net.total_weight();
    require_weight(m);
    const double two_m = 2.0 * m;
    std::vector<double> k(net.node_count());
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = net.degree(i);
    double q = 0.0;
    for (const auto& members : part.communities())
        for (std::size_t i : members)
            for (std::size_t j : members)
                if (i != j)
                    q += net.weight(i, j) - k[i] * k[j] / two_m;
    return q / two_m;
}

double modularity_gain(const SocialNetwork& net, const Partition& part, std::size_t node, std::size_t target) {
    if (part.node_count() != net.node_count())
        throw ArgumentError("partition does not cover the network");
    if (target >= part.size())
        throw ArgumentError("unknown community " + std::to_string(target));
    if (part.community_of(node) == target)
        throw ArgumentError("node '" + net.nodes()[node] + "' is already in the target community");
    const double m = net.total_weight();
    require_weight(m);
    double k_in = 0.0, boundary = 0.0;
    for (std::size_t v : part.communities()[target]) {
        k_in += net.weight(node, v);
        for (const auto& [w, weight] : net.neighbors(v))
            if (part.community_of(w) != target)
                boundary += weight;
    }
    return k_in / (2.0 * m) - boundary * net.degree(node) / (2.0 * m * m);
}

namespace {

/// Collapsed graph used by the later levels.
struct Level {
    std::vector<std::vector<std::size_t>> members; // original nodes per super-node
    std::vector<std::map<std::size_t, double>> adj; // super-node adjacency, no loops
    std::vector<double> loop;                       // internal weight
    std::vector<double> strength;                   // sum of original degrees
};

Partition partition_of(const Level& lvl, const std::vector<std::size_t>& comm, std::size_t n) {
    std::vector<std::size_t> labels(n);
    for (std::size_t u = 0; u < lvl.members.size(); ++u)
        for (std::size_t i : lvl.members[u])
            labels[i] = comm[u];
    return Partition::from_assignment(labels);
}

} // namespace

ResourceCommunityNetwork louvain(const SocialNetwork& net, std::vector<CommunityMove>* moves) {
    const std::size_t n = net.node_count();
    const double m = net.total_weight();
    require_weight(m);

    Level lvl;
    for (std::size_t i = 0; i < n; ++i) {
        lvl.members.push_back({i});
        lvl.adj.push_back(net.neighbors(i));
        lvl.loop.push_back(0.0);
        lvl.strength.push_back(net.degree(i));
    }

    std::vector<std::size_t> final_labels(n);
    for (std::size_t i = 0; i < n; ++i)
        final_labels[i] = i;

    for (int level = 0;; ++level) {
        const std::size_t s = lvl.members.size();
        std::vector<std::size_t> comm(s);
        for (std::size_t u = 0; u < s; ++u)
            comm[u] = u;

        // k_i of the closed form: incident weight in the collapsed graph, loop counted once.
        std::vector<double> k(s);
        for (std::size_t u = 0; u < s; ++u) {
            k[u] = lvl.loop[u];
            for (const auto& [_, w] : lvl.adj[u])
                k[u] += w;
        }

        auto gain_into = [&](std::size_t u, std::size_t y) {
            double k_in = 0.0, boundary = 0.0;
            for (std::size_t v = 0; v < s; ++v) {
                if (v == u || comm[v] != y)
                    continue;
                auto it = lvl.adj[u].find(v);
                if (it != lvl.adj[u].end())
                    k_in += it->second;
                for (const auto& [w, weight] : lvl.adj[v])
                    if (w == u || comm[w] != y)
                        boundary += weight;
            }
            return k_in / (2.0 * m) - boundary * k[u] / (2.0 * m * m);
        };
        // Exact change of Q when super-node u leaves its community for y.
        auto delta_q = [&](std::size_t u, std::size_t y) {
            double w_to_y = 0.0, w_to_own = 0.0, s_y = 0.0, s_own = 0.0;
            for (std::size_t v = 0; v < s; ++v) {
                if (v == u)
                    continue;
                auto it = lvl.adj[u].find(v);
                const double w = it == lvl.adj[u].end() ? 0.0 : it->second;
                if (comm[v] == y) {
                    w_to_y += w;
                    s_y += lvl.strength[v];
                } else if (comm[v] == comm[u]) {
                    w_to_own += w;
                    s_own += lvl.strength[v];
                }
            }
            const double su = lvl.strength[u];
            return ((w_to_y - su * s_y / (2.0 * m)) - (w_to_own - su * s_own / (2.0 * m))) / m;
        };

        bool level_moved = false;
        for (bool sweep_moved = true; sweep_moved;) {
            sweep_moved = false;
            for (std::size_t u = 0; u < s; ++u) {
                std::set<std::size_t> targets;
                for (const auto& [v, _] : lvl.adj[u])
                    if (comm[v] != comm[u])
                        targets.insert(comm[v]);
                if (targets.empty())
                    continue;
                double best = 0.0;
                std::size_t best_y = comm[u];
                for (std::size_t y : targets) {
                    const double g = gain_into(u, y);
                    if (g > best) {
                        best = g;
                        best_y = y;
                    }
                }
                if (best_y == comm[u] || best <= gain_into(u, comm[u]) || delta_q(u, best_y) <= 0.0)
                    continue;

                Partition before;
                if (moves)
                    before = partition_of(lvl, comm, n);
                comm[u] = best_y;
                sweep_moved = level_moved = true;
                if (moves)
                    moves->push_back(CommunityMove{level, lvl.members[u], best, std::move(before),
                                                   partition_of(lvl, comm, n)});
            }
        }
        if (!level_moved)
            break;

        // Collapse communities into super-nodes, ordered by first original member.
        std::map<std::size_t, std::size_t> index_of_comm;
        std::vector<std::size_t> order(s);
        for (std::size_t u = 0; u < s; ++u)
            order[u] = u;
        Level next;
        std::vector<std::size_t> super_of(s);
        for (std::size_t u : order) {
            auto [it, inserted] = index_of_comm.emplace(comm[u], next.members.size());
            if (inserted) {
                next.members.emplace_back();
                next.loop.push_back(0.0);
                next.strength.push_back(0.0);
                next.adj.emplace_back();
            }
            super_of[u] = it->second;
            auto& mem = next.members[it->second];
            mem.insert(mem.end(), lvl.members[u].begin(), lvl.members[u].end());
            next.loop[it->second] += lvl.loop[u];
            next.strength[it->second] += lvl.strength[u];
        }
        for (std::size_t u = 0; u < s; ++u)
            for (const auto& [v, w] : lvl.adj[u]) {
                if (v < u)
                    continue;
                const std::size_t a = super_of[u], b = super_of[v];
                if (a == b) {
                    next.loop[a] += w;
                } else {
                    next.adj[a][b] += w;
                    next.adj[b][a] += w;
                }
            }
        for (auto& mem : next.members)
            std::sort(mem.begin(), mem.end());
        for (std::size_t c = 0; c < next.members.size(); ++c)
            for (std::size_t i : next.members[c])
                final_labels[i] = c;
        lvl = std::move(next);
    }

    return community_network(net, Partition::from_assignment(final_labels));
}

ResourceCommunityNetwork community_network(const SocialNetwork& net, const Partition& part) {
    if (part.node_count() != net.node_count())
        throw ArgumentError("partition does not cover the network");
    ResourceCommunityNetwork rcn;
    rcn.partition = part;
    for (const auto& members : part.communities()) {
        Community c;
        for (std::size_t i : members)
            c.members.push_back(net.nodes()[i]);
        rcn.communities.push_back(std::move(c));
    }
    for (const auto& e : net.edges()) {
        const std::size_t a = part.community_of(e.a), b = part.community_of(e.b);
        if (a == b)
            rcn.communities[a].loop_weight += e.weight;
        else
            rcn.inter_weights[{std::min(a, b), std::max(a, b)}] += e.weight;
    }
    return rcn;
}

std::string community_network_to_json(const ResourceCommunityNetwork& rcn) {
    nlohmann::ordered_json j;
    auto& cs = j["communities"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rcn.communities.size(); ++i)
        cs.push_back({{"id", i}, {"members", rcn.communities[i].members},
                      {"loop_weight", rcn.communities[i].loop_weight}});
    auto& es = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [key, w] : rcn.inter_weights)
        es.push_back({{"a", key.first}, {"b", key.second}, {"weight", w}});
    return j.dump(2) + "\n";
}

} // namespace logfold
