#pragma once

#include "logfold/event_log.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace logfold {

struct Transition {
    std::string id;
    /// Activity label for visible transitions; empty for invisible ones.
    std::optional<std::string> label;

    bool visible() const noexcept { return label.has_value(); }
    bool operator==(const Transition&) const = default;
};

struct Arc {
    std::string source;
    std::string target;
    int weight = 1;

    bool operator==(const Arc&) const = default;
};

/// Generalised stochastic Petri net. Timing lives in the event log, so the
/// net only carries structure: places, visible/invisible transitions and
/// weighted arcs.
class Gspn {
public:
    Gspn() = default;
    Gspn(std::vector<std::string> places, std::vector<Transition> transitions, std::vector<Arc> arcs);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    bool is_place(const std::string& id) const { return place_set_.count(id) != 0; }
    bool is_transition(const std::string& id) const { return transition_index_.count(id) != 0; }
    const Transition& transition(const std::string& id) const;
    /// Visible transition carrying `activity`, if any.
    const Transition* find_visible(const std::string& activity) const;
    std::set<std::string> activities() const;

    /// Pre- and post-sets of a place or transition.
    const std::vector<std::string>& preset(const std::string& node) const;
    const std::vector<std::string>& postset(const std::string& node) const;
    int arc_weight(const std::string& source, const std::string& target) const;

    /// Places without input arcs / without output arcs.
    std::vector<std::string> source_places() const;
    std::vector<std::string> sink_places() const;

    bool operator==(const Gspn& o) const {
        return places_ == o.places_ && transitions_ == o.transitions_ && arcs_ == o.arcs_;
    }

private:
    void index();

    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    std::vector<Arc> arcs_;
    std::set<std::string> place_set_;
    std::map<std::string, std::size_t> transition_index_;
    std::map<std::string, std::vector<std::string>> pre_, post_;
    std::map<std::pair<std::string, std::string>, int> weight_;
};

std::string gspn_to_json(const Gspn& net);
Gspn gspn_from_json(const std::string& text);

/// Directly-follows based relations of the classic alpha miner.
class Footprint {
public:
    enum class Relation { Causal, ReverseCausal, Parallel, Choice };

    explicit Footprint(const EventLog& log);

    const std::vector<std::string>& activities() const noexcept { return activities_; }
    bool follows(const std::string& a, const std::string& b) const;
    Relation relation(const std::string& a, const std::string& b) const;
    bool causal(const std::string& a, const std::string& b) const { return relation(a, b) == Relation::Causal; }
    bool choice(const std::string& a, const std::string& b) const { return relation(a, b) == Relation::Choice; }
    /// Activities that directly follow themselves in at least one trace.
    const std::set<std::string>& self_loops() const noexcept { return self_loops_; }
    const std::set<std::string>& starts() const noexcept { return starts_; }
    const std::set<std::string>& ends() const noexcept { return ends_; }

private:
    std::vector<std::string> activities_;
    std::set<std::pair<std::string, std::string>> follows_;
    std::set<std::string> self_loops_, starts_, ends_;
};

/// Classic alpha miner. Self-succession is kept out of the footprint; every
/// activity that repeats directly gets an invisible redo transition from its
/// output places back to its input places.
Gspn alpha_discover(const EventLog& log);

/// Token-game replay of an activity sequence from the source marking to the
/// sink marking. Invisible transitions are fired when needed to enable the
/// next visible one.
bool replay_fits(const Gspn& net, const std::vector<std::string>& activities);

enum class FoldKind { Sequence, Or, SelfLoop };
std::string to_string(FoldKind kind);
FoldKind fold_kind_from_string(const std::string& s);

struct FoldCandidate {
    FoldKind kind = FoldKind::Sequence;
    std::vector<std::string> members;
    std::string entry;
    std::string exit;

    std::size_t activity_count() const noexcept { return kind == FoldKind::SelfLoop ? 1 : members.size(); }
    bool operator==(const FoldCandidate&) const = default;
};

/// Maximal sequence / or / self-loop substructures that avoid `protected_`
/// activities, made mutually disjoint by greedy largest-first selection and
/// returned ordered by entry place.
std::vector<FoldCandidate> detect_substructures(const Gspn& net,
                                                const std::set<std::string>& protected_activities);

} // namespace logfold
