#include "logfold/prediction_points.hpp"

#include "logfold/error.hpp"

#include <algorithm>
#include <numeric>

namespace logfold {

std::map<std::string, ActivitySet> activities_by_performer(const EventLog& log) {
    std::map<std::string, ActivitySet> out;
    for (const Trace& t : log.traces())
        for (const Event& e : t.events)
            out[e.resource].insert(e.activity);
    return out;
}

CommunityActivities community_activity_sets(const std::map<std::string, ActivitySet>& profile,
                                            const ResourceCommunityNetwork& rcn) {
    CommunityActivities out;
    for (std::size_t c = 0; c < rcn.communities.size(); ++c) {
        ActivitySet acts;
        for (const auto& member : rcn.communities[c].members) {
            auto it = profile.find(member);
            if (it != profile.end())
                acts.insert(it->second.begin(), it->second.end());
        }
        if (acts.empty())
            out.empty_communities.push_back(c);
        out.sets.push_back(std::move(acts));
    }
    return out;
}

CommunityActivities community_activity_sets(const EventLog& log, const ResourceCommunityNetwork& rcn) {
    const auto profile = activities_by_performer(log);
    for (const auto& c : rcn.communities)
        for (const auto& member : c.members)
            if (!profile.count(member))
                throw ConsistencyError("performer '" + member + "' does not appear in the log");
    return community_activity_sets(profile, rcn);
}

namespace {

struct Matcher {
    // left vertices are community slots, right vertices are activities
    const std::vector<std::vector<std::size_t>>& adj;
    std::vector<long> owner;  // activity -> slot, -1 if free
    std::vector<bool> seen;

    bool augment(std::size_t slot) {
        for (std::size_t a : adj[slot]) {
            if (seen[a])
                continue;
            seen[a] = true;
            if (owner[a] < 0 || augment(static_cast<std::size_t>(owner[a]))) {
                owner[a] = static_cast<long>(slot);
                return true;
            }
        }
        return false;
    }
};

} // namespace

PredictionPointSet select_prediction_points(const std::vector<ActivitySet>& activity_sets, std::size_t per_community) {
    if (per_community == 0)
        throw ArgumentError("per_community must be positive");
    if (std::all_of(activity_sets.begin(), activity_sets.end(), [](const auto& s) { return s.empty(); }))
        throw ArgumentError("cannot select prediction points: every activity set is empty");

    std::vector<std::string> universe;
    for (const auto& s : activity_sets)
        universe.insert(universe.end(), s.begin(), s.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    auto id_of = [&](const std::string& a) {
        return static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), a) - universe.begin());
    };

    std::vector<std::size_t> order(activity_sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return activity_sets[a].size() < activity_sets[b].size();
    });

    std::vector<std::vector<std::size_t>> adj;
    std::vector<std::size_t> slot_community;
    for (std::size_t c : order)
        for (std::size_t r = 0; r < per_community; ++r) {
            std::vector<std::size_t> ids;
            for (const auto& a : activity_sets[c])
                ids.push_back(id_of(a)); // already lexicographic
            adj.push_back(std::move(ids));
            slot_community.push_back(c);
        }

    Matcher mt{adj, std::vector<long>(universe.size(), -1), {}};
    std::vector<std::size_t> unmatched_slots;
    for (std::size_t slot = 0; slot < adj.size(); ++slot) {
        auto free_it = std::find_if(adj[slot].begin(), adj[slot].end(), [&](std::size_t a) { return mt.owner[a] < 0; });
        if (free_it != adj[slot].end()) {
            mt.owner[*free_it] = static_cast<long>(slot);
            continue;
        }
        mt.seen.assign(universe.size(), false);
        if (!mt.augment(slot))
            unmatched_slots.push_back(slot);
    }

    PredictionPointSet out;
    std::vector<std::vector<std::string>> chosen(activity_sets.size());
    for (std::size_t a = 0; a < universe.size(); ++a)
        if (mt.owner[a] >= 0) {
            const std::size_t c = slot_community[static_cast<std::size_t>(mt.owner[a])];
            chosen[c].push_back(universe[a]);
            out.provenance[universe[a]] = c;
        }
    for (std::size_t c = 0; c < chosen.size(); ++c) {
        out.points.insert(out.points.end(), chosen[c].begin(), chosen[c].end());
        if (chosen[c].empty())
            out.uncovered.push_back(c);
    }
    return out;
}

bool is_valid_sdr(const std::vector<ActivitySet>& activity_sets, const std::map<std::string, std::size_t>& provenance,
                  std::size_t per_community) {
    std::vector<std::size_t> count(activity_sets.size(), 0);
    for (const auto& [activity, c] : provenance) {
        if (c >= activity_sets.size() || !activity_sets[c].count(activity))
            return false;
        if (++count[c] > per_community)
            return false;
    }
    return true; // map keys are distinct by construction
}

PredictionPointSet prediction_points_from_list(const std::vector<std::string>& points,
                                               const std::vector<ActivitySet>& activity_sets) {
    PredictionPointSet out;
    for (const auto& p : points) {
        if (std::find(out.points.begin(), out.points.end(), p) != out.points.end())
            continue;
        out.points.push_back(p);
        for (std::size_t c = 0; c < activity_sets.size(); ++c)
            if (activity_sets[c].count(p)) {
                out.provenance[p] = c;
                break;
            }
    }
    for (std::size_t c = 0; c < activity_sets.size(); ++c) {
        const bool covered = std::any_of(out.provenance.begin(), out.provenance.end(),
                                         [&](const auto& kv) { return kv.second == c; });
        if (!covered)
            out.uncovered.push_back(c);
    }
    return out;
}

} // namespace logfold
