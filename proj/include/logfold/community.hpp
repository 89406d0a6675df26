#pragma once

#include "logfold/social_network.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace logfold {

/// Assignment of every network node to exactly one non-empty community.
/// Community ids are dense and ordered by their lowest node index.
class Partition {
public:
    Partition() = default;
    /// Accepts arbitrary labels and renumbers them densely.
    static Partition from_assignment(const std::vector<std::size_t>& labels);
    static Partition singletons(std::size_t n);
    static Partition from_groups(const SocialNetwork& net, const std::vector<std::vector<std::string>>& groups);

    std::size_t community_of(std::size_t node) const { return assignment_.at(node); }
    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
    const std::vector<std::vector<std::size_t>>& communities() const noexcept { return communities_; }
    std::size_t size() const noexcept { return communities_.size(); }
    std::size_t node_count() const noexcept { return assignment_.size(); }

    /// Copy with `node` moved into `target`; empty communities are dropped.
    Partition moved(std::size_t node, std::size_t target) const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::size_t> assignment_;
    std::vector<std::vector<std::size_t>> communities_;
};

/// Q = 1/(2m) * sum over i != j in the same community of (W_ij - k_i k_j / 2m).
double modularity(const SocialNetwork& net, const Partition& part);

/// Closed-form gain of moving `node` into community `target`:
/// k_i^y / 2m - boundary(target) * k_i / 2m^2, where boundary sums the
/// weights from target members to non-members.
double modularity_gain(const SocialNetwork& net, const Partition& part, std::size_t node, std::size_t target);

struct Community {
    std::vector<std::string> members;
    double loop_weight = 0.0;
};

struct ResourceCommunityNetwork {
    std::vector<Community> communities;
    /// Weight between communities i < j, absent when zero.
    std::map<std::pair<std::size_t, std::size_t>, double> inter_weights;
    Partition partition;
};

/// One accepted node move, recorded for diagnostics and property checks.
/// `members` are the original nodes carried by the moving (super-)node.
struct CommunityMove {
    int level = 0;
    std::vector<std::size_t> members;
    double gain = 0.0;
    Partition before;
    Partition after;
};

/// Modularity-gain community detection over the network's node order.
/// Each node joins the neighbouring community with the largest positive
/// closed-form gain, provided that gain beats staying and the move raises
/// Q. Converged communities are collapsed into super-nodes with loop edges
/// and the procedure repeats until no node moves.
ResourceCommunityNetwork louvain(const SocialNetwork& net, std::vector<CommunityMove>* moves = nullptr);

ResourceCommunityNetwork community_network(const SocialNetwork& net, const Partition& part);

std::string community_network_to_json(const ResourceCommunityNetwork& rcn);

} // namespace logfold
