#pragma once

#include "logfold/event_log.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace logfold {

/// Weighted undirected performer graph. Node order is significant: it is
/// the traversal order used by community detection.
class SocialNetwork {
public:
    struct Edge {
        std::size_t a;
        std::size_t b;
        double weight;
    };

    SocialNetwork() = default;

    /// Adds a node if absent and returns its index.
    std::size_t add_node(const std::string& name);
    /// Adds `weight` to the edge {a, b}; self edges are rejected.
    void add_weight(const std::string& a, const std::string& b, double weight);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t index_of(const std::string& name) const;
    bool has_node(const std::string& name) const { return index_.count(name) != 0; }

    /// Edges in insertion order.
    std::vector<Edge> edges() const;
    double weight(std::size_t a, std::size_t b) const;
    double weight(const std::string& a, const std::string& b) const { return weight(index_of(a), index_of(b)); }
    const std::map<std::size_t, double>& neighbors(std::size_t node) const { return adjacency_.at(node); }

    /// k_i: total weight incident to node i.
    double degree(std::size_t node) const;
    /// m: sum of edge weights, each undirected edge counted once.
    double total_weight() const;

    /// Divides every weight by the current maximum so weights lie in (0,1].
    void normalize();

private:
    std::vector<std::string> nodes_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::map<std::size_t, double>> adjacency_;
    std::vector<std::pair<std::size_t, std::size_t>> edge_order_;
};

/// Handover-of-work network: the weight of {x, y} counts consecutive event
/// pairs inside a trace performed by x then y or y then x. Nodes follow the
/// log's resource order; the UNKNOWN sentinel is ignored.
SocialNetwork build_social_network(const EventLog& log, bool normalize = true);

/// `node_a,node_b,weight` per line. Lines starting with '#' are comments.
SocialNetwork parse_social_network(const std::string& text);
SocialNetwork load_social_network(const std::string& path);
std::string social_network_to_text(const SocialNetwork& net);

} // namespace logfold
