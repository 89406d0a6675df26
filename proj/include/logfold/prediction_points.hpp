#pragma once

#include "logfold/community.hpp"
#include "logfold/event_log.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace logfold {

using ActivitySet = std::set<std::string>;

/// Activities each performer executed anywhere in the log.
std::map<std::string, ActivitySet> activities_by_performer(const EventLog& log);

struct CommunityActivities {
    std::vector<ActivitySet> sets; // one per community, community order
    std::vector<std::size_t> empty_communities;
};

/// A_j for every community. Throws ConsistencyError when a community member
/// never appears in the log.
CommunityActivities community_activity_sets(const EventLog& log, const ResourceCommunityNetwork& rcn);

/// Lower-level form used when the performer profile comes from elsewhere;
/// unknown performers contribute nothing and empty sets are flagged.
CommunityActivities community_activity_sets(const std::map<std::string, ActivitySet>& profile,
                                            const ResourceCommunityNetwork& rcn);

struct PredictionPointSet {
    /// Selected activities, ordered by the community they represent.
    std::vector<std::string> points;
    /// activity -> community index it was chosen for
    std::map<std::string, std::size_t> provenance;
    /// Communities left without a representative (no full SDR exists).
    std::vector<std::size_t> uncovered;

    std::set<std::string> as_set() const { return {points.begin(), points.end()}; }
};

/// Distinct representatives by bipartite matching. Communities are visited
/// in ascending set size (ties by index) and take the lexicographically
/// smallest free activity; augmenting paths are used only when none is free,
/// so the matching is maximum. `per_community` > 1 asks for several distinct
/// points from each community.
PredictionPointSet select_prediction_points(const std::vector<ActivitySet>& activity_sets,
                                            std::size_t per_community = 1);

/// Checks the SDR invariants: distinct points, each drawn from the set of
/// the community it is attributed to, at most `per_community` per community.
bool is_valid_sdr(const std::vector<ActivitySet>& activity_sets, const std::map<std::string, std::size_t>& provenance,
                  std::size_t per_community = 1);

/// Builds a point set from a user-supplied list, attributing each point to
/// the first community whose activity set contains it (or none).
PredictionPointSet prediction_points_from_list(const std::vector<std::string>& points,
                                               const std::vector<ActivitySet>& activity_sets);

} // namespace logfold
