#include "logfold/social_network.hpp"

#include "logfold/error.hpp"
#include "logfold/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace logfold {

std::size_t SocialNetwork::add_node(const std::string& name) {
    auto [it, inserted] = index_.emplace(name, nodes_.size());
    if (inserted) {
        nodes_.push_back(name);
        adjacency_.emplace_back();
    }
    return it->second;
}

void SocialNetwork::add_weight(const std::string& a, const std::string& b, double weight) {
    if (a == b)
        throw ArgumentError("self edge on '" + a + "'");
    const std::size_t i = add_node(a), j = add_node(b);
    auto [it, inserted] = adjacency_[i].emplace(j, 0.0);
    if (inserted)
        edge_order_.emplace_back(i, j);
    it->second += weight;
    adjacency_[j][i] = it->second;
}

std::size_t SocialNetwork::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ArgumentError("unknown performer '" + name + "'");
    return it->second;
}

std::vector<SocialNetwork::Edge> SocialNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_order_.size());
    for (auto [a, b] : edge_order_)
        out.push_back(Edge{a, b, adjacency_[a].at(b)});
    return out;
}

double SocialNetwork::weight(std::size_t a, std::size_t b) const {
    auto it = adjacency_.at(a).find(b);
    return it == adjacency_[a].end() ? 0.0 : it->second;
}

double SocialNetwork::degree(std::size_t node) const {
    double k = 0.0;
    for (const auto& [_, w] : adjacency_.at(node))
        k += w;
    return k;
}

double SocialNetwork::total_weight() const {
    double m = 0.0;
    for (const auto& e : edges())
        m += e.weight;
    return m;
}

void SocialNetwork::normalize() {
    double max_w = 0.0;
    for (const auto& e : edges())
        max_w = std::max(max_w, e.weight);
    if (max_w <= 0.0)
        return;
    for (auto& adj : adjacency_)
        for (auto& [_, w] : adj)
            w /= max_w;
}

SocialNetwork build_social_network(const EventLog& log, bool normalize) {
    if (log.resources().size() < 2)
        throw DegenerateError("social network needs at least two distinct resources");
    SocialNetwork net;
    for (const auto& r : log.resources())
        net.add_node(r);
    for (const Trace& t : log.traces())
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            const auto& x = t.events[i].resource;
            const auto& y = t.events[i + 1].resource;
            if (x == y || x == kUnknownResource || y == kUnknownResource)
                continue;
            net.add_weight(x, y, 1.0);
        }
    if (net.edges().empty())
        throw DegenerateError("no handovers of work between distinct resources");
    if (normalize)
        net.normalize();
    return net;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

SocialNetwork parse_social_network(const std::string& text) {
    SocialNetwork net;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& rec : parse_csv_records(text)) {
        if (!rec.fields.empty() && trim(rec.fields[0]).rfind('#', 0) == 0)
            continue;
        if (rec.fields.size() != 3)
            throw ParseError("expected node_a,node_b,weight", rec.line);
        const std::string a = trim(rec.fields[0]), b = trim(rec.fields[1]);
        if (a.empty() || b.empty())
            throw ParseError("empty node name", rec.line);
        if (a == b)
            throw ParseError("self edge on '" + a + "'", rec.line);
        double w = 0.0;
        try {
            std::size_t used = 0;
            const std::string ws = trim(rec.fields[2]);
            w = std::stod(ws, &used);
            if (used != ws.size())
                throw std::invalid_argument(ws);
        } catch (const std::exception&) {
            throw ParseError("unparseable weight '" + rec.fields[2] + "'", rec.line);
        }
        if (!std::isfinite(w) || w <= 0.0)
            throw ParseError("edge weight must be positive", rec.line);
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        if (!seen.insert(key).second)
            throw ParseError("duplicate edge " + a + " - " + b, rec.line);
        net.add_weight(a, b, w);
    }
    return net;
}

SocialNetwork load_social_network(const std::string& path) {
    return parse_social_network(read_file(path));
}

std::string social_network_to_text(const SocialNetwork& net) {
    std::ostringstream out;
    for (const auto& e : net.edges())
        out << csv_escape(net.nodes()[e.a]) << ',' << csv_escape(net.nodes()[e.b]) << ','
            << format_fixed(e.weight, 6) << '\n';
    return out.str();
}

} // namespace logfold
