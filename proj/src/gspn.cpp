#include "logfold/gspn.hpp"

#include "logfold/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <tuple>

namespace logfold {

Gspn::Gspn(std::vector<std::string> places, std::vector<Transition> transitions, std::vector<Arc> arcs)
    : places_(std::move(places)), transitions_(std::move(transitions)), arcs_(std::move(arcs)) {
    index();
}

void Gspn::index() {
    for (const auto& p : places_) {
        if (p.empty())
            throw SchemaError("place with empty id");
        if (!place_set_.insert(p).second)
            throw SchemaError("duplicate place '" + p + "'");
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const Transition& t = transitions_[i];
        if (t.id.empty())
            throw SchemaError("transition with empty id");
        if (place_set_.count(t.id) || !transition_index_.emplace(t.id, i).second)
            throw SchemaError("duplicate node id '" + t.id + "'");
        if (t.label && t.label->empty())
            throw SchemaError("visible transition '" + t.id + "' has an empty label");
    }
    for (const Arc& a : arcs_) {
        const bool sp = is_place(a.source), st = is_transition(a.source);
        const bool tp = is_place(a.target), tt = is_transition(a.target);
        if (!(sp || st) || !(tp || tt))
            throw SchemaError("arc " + a.source + " -> " + a.target + " has an unknown endpoint");
        if ((sp && tp) || (st && tt))
            throw SchemaError("arc " + a.source + " -> " + a.target + " joins two nodes of the same kind");
        if (a.weight < 1)
            throw SchemaError("arc " + a.source + " -> " + a.target + " has weight < 1");
        if (!weight_.emplace(std::make_pair(a.source, a.target), a.weight).second)
            throw SchemaError("duplicate arc " + a.source + " -> " + a.target);
        post_[a.source].push_back(a.target);
        pre_[a.target].push_back(a.source);
    }
}

const Transition& Gspn::transition(const std::string& id) const {
    auto it = transition_index_.find(id);
    if (it == transition_index_.end())
        throw ArgumentError("unknown transition '" + id + "'");
    return transitions_[it->second];
}

const Transition* Gspn::find_visible(const std::string& activity) const {
    for (const auto& t : transitions_)
        if (t.label && *t.label == activity)
            return &t;
    return nullptr;
}

std::set<std::string> Gspn::activities() const {
    std::set<std::string> out;
    for (const auto& t : transitions_)
        if (t.label)
            out.insert(*t.label);
    return out;
}

const std::vector<std::string>& Gspn::preset(const std::string& node) const {
    static const std::vector<std::string> none;
    auto it = pre_.find(node);
    return it == pre_.end() ? none : it->second;
}

const std::vector<std::string>& Gspn::postset(const std::string& node) const {
    static const std::vector<std::string> none;
    auto it = post_.find(node);
    return it == post_.end() ? none : it->second;
}

int Gspn::arc_weight(const std::string& source, const std::string& target) const {
    auto it = weight_.find({source, target});
    return it == weight_.end() ? 0 : it->second;
}

std::vector<std::string> Gspn::source_places() const {
    std::vector<std::string> out;
    for (const auto& p : places_)
        if (preset(p).empty())
            out.push_back(p);
    return out;
}

std::vector<std::string> Gspn::sink_places() const {
    std::vector<std::string> out;
    for (const auto& p : places_)
        if (postset(p).empty())
            out.push_back(p);
    return out;
}

std::string gspn_to_json(const Gspn& net) {
    nlohmann::ordered_json j;
    j["places"] = net.places();
    auto& ts = j["transitions"] = nlohmann::ordered_json::array();
    for (const auto& t : net.transitions()) {
        nlohmann::ordered_json jt;
        jt["id"] = t.id;
        jt["visible"] = t.visible();
        jt["label"] = t.label ? nlohmann::ordered_json(*t.label) : nlohmann::ordered_json(nullptr);
        ts.push_back(std::move(jt));
    }
    auto& as = j["arcs"] = nlohmann::ordered_json::array();
    for (const auto& a : net.arcs())
        as.push_back({{"source", a.source}, {"target", a.target}, {"weight", a.weight}});
    return j.dump(2) + "\n";
}

Gspn gspn_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("net file is not valid JSON: ") + e.what());
    }
    try {
        std::vector<std::string> places = j.at("places").get<std::vector<std::string>>();
        std::vector<Transition> transitions;
        for (const auto& jt : j.at("transitions")) {
            Transition t;
            t.id = jt.at("id").get<std::string>();
            const bool visible = jt.value("visible", !jt.value("label", nlohmann::json()).is_null());
            if (visible) {
                const auto& label = jt.at("label");
                t.label = label.is_null() ? t.id : label.get<std::string>();
            }
            transitions.push_back(std::move(t));
        }
        std::vector<Arc> arcs;
        for (const auto& ja : j.at("arcs"))
            arcs.push_back(Arc{ja.at("source").get<std::string>(), ja.at("target").get<std::string>(),
                               ja.value("weight", 1)});
        return Gspn(std::move(places), std::move(transitions), std::move(arcs));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed net file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

Footprint::Footprint(const EventLog& log) {
    std::set<std::string> acts;
    for (const Trace& t : log.traces()) {
        if (t.empty())
            continue;
        starts_.insert(t.events.front().activity);
        ends_.insert(t.events.back().activity);
        for (std::size_t i = 0; i < t.size(); ++i) {
            acts.insert(t.events[i].activity);
            if (i + 1 == t.size())
                continue;
            const auto& a = t.events[i].activity;
            const auto& b = t.events[i + 1].activity;
            if (a == b)
                self_loops_.insert(a);
            else
                follows_.emplace(a, b);
        }
    }
    activities_.assign(acts.begin(), acts.end());
}

bool Footprint::follows(const std::string& a, const std::string& b) const {
    return follows_.count({a, b}) != 0;
}

Footprint::Relation Footprint::relation(const std::string& a, const std::string& b) const {
    const bool ab = follows(a, b), ba = follows(b, a);
    if (ab && ba)
        return Relation::Parallel;
    if (ab)
        return Relation::Causal;
    if (ba)
        return Relation::ReverseCausal;
    return Relation::Choice;
}

namespace {

using ActSet = std::vector<std::string>; // sorted, unique
using PlacePair = std::pair<ActSet, ActSet>;

ActSet set_union(const ActSet& a, const ActSet& b) {
    ActSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool includes(const ActSet& outer, const ActSet& inner) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool valid_pair(const Footprint& fp, const PlacePair& p) {
    for (const auto& a : p.first)
        for (const auto& b : p.second)
            if (!fp.causal(a, b))
                return false;
    for (const ActSet* s : {&p.first, &p.second})
        for (std::size_t i = 0; i < s->size(); ++i)
            for (std::size_t j = i + 1; j < s->size(); ++j)
                if (!fp.choice((*s)[i], (*s)[j]))
                    return false;
    return true;
}

} // namespace

Gspn alpha_discover(const EventLog& log) {
    if (log.empty())
        throw EmptyLogError("cannot discover a net from an empty log");
    const Footprint fp(log);
    const auto& acts = fp.activities();
    if (acts.size() < 2)
        throw DegenerateError("alpha discovery needs at least two distinct activities");

    // Closure of the singleton causal pairs under valid unions gives every
    // (A,B) pair; only the maximal ones become places.
    std::set<PlacePair> all;
    std::deque<PlacePair> work;
    for (const auto& a : acts)
        for (const auto& b : acts)
            if (fp.causal(a, b)) {
                PlacePair p{{a}, {b}};
                if (all.insert(p).second)
                    work.push_back(std::move(p));
            }
    while (!work.empty()) {
        const PlacePair p = work.front();
        work.pop_front();
        std::vector<PlacePair> snapshot(all.begin(), all.end());
        for (const auto& q : snapshot) {
            PlacePair u{set_union(p.first, q.first), set_union(p.second, q.second)};
            if (all.count(u) || !valid_pair(fp, u))
                continue;
            all.insert(u);
            work.push_back(std::move(u));
        }
    }
    std::vector<PlacePair> maximal;
    for (const auto& p : all) {
        const bool dominated = std::any_of(all.begin(), all.end(), [&](const PlacePair& q) {
            return q != p && includes(q.first, p.first) && includes(q.second, p.second);
        });
        if (!dominated)
            maximal.push_back(p);
    }

    std::vector<std::string> places{"p_start"};
    std::vector<Transition> transitions;
    std::vector<Arc> arcs;
    for (const auto& a : acts)
        transitions.push_back(Transition{a, a});
    for (const auto& a : fp.starts())
        arcs.push_back(Arc{"p_start", a, 1});
    for (std::size_t i = 0; i < maximal.size(); ++i) {
        const std::string id = "p_" + std::to_string(i + 1);
        places.push_back(id);
        for (const auto& a : maximal[i].first)
            arcs.push_back(Arc{a, id, 1});
        for (const auto& b : maximal[i].second)
            arcs.push_back(Arc{id, b, 1});
    }
    places.push_back("p_end");
    for (const auto& a : fp.ends())
        arcs.push_back(Arc{a, "p_end", 1});

    // Redo loops for activities that directly repeat.
    std::map<std::string, std::vector<std::string>> in_places, out_places;
    for (const auto& arc : arcs) {
        if (std::find(places.begin(), places.end(), arc.source) != places.end())
            in_places[arc.target].push_back(arc.source);
        else
            out_places[arc.source].push_back(arc.target);
    }
    for (const auto& a : fp.self_loops()) {
        const std::string tau = "tau_loop_" + a;
        transitions.push_back(Transition{tau, std::nullopt});
        for (const auto& p : out_places[a])
            arcs.push_back(Arc{p, tau, 1});
        for (const auto& p : in_places[a])
            arcs.push_back(Arc{tau, p, 1});
    }
    return Gspn(std::move(places), std::move(transitions), std::move(arcs));
}

// ---------------------------------------------------------------------------

namespace {

using Marking = std::map<std::string, int>;

bool enabled(const Gspn& net, const Marking& m, const std::string& t) {
    for (const auto& p : net.preset(t)) {
        auto it = m.find(p);
        if (it == m.end() || it->second < net.arc_weight(p, t))
            return false;
    }
    return true;
}

Marking fire(const Gspn& net, Marking m, const std::string& t) {
    for (const auto& p : net.preset(t))
        if ((m[p] -= net.arc_weight(p, t)) == 0)
            m.erase(p);
    for (const auto& p : net.postset(t))
        m[p] += net.arc_weight(t, p);
    return m;
}

/// Breadth-first search over invisible firings until `goal` holds.
template <class Goal>
std::optional<Marking> silent_closure(const Gspn& net, const Marking& start, Goal goal, int max_depth = 6) {
    if (goal(start))
        return start;
    std::vector<std::string> silent;
    for (const auto& t : net.transitions())
        if (!t.visible())
            silent.push_back(t.id);
    std::set<Marking> seen{start};
    std::vector<Marking> frontier{start};
    for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
        std::vector<Marking> next;
        for (const auto& m : frontier)
            for (const auto& t : silent) {
                if (!enabled(net, m, t))
                    continue;
                Marking m2 = fire(net, m, t);
                if (goal(m2))
                    return m2;
                if (seen.insert(m2).second)
                    next.push_back(std::move(m2));
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

} // namespace

bool replay_fits(const Gspn& net, const std::vector<std::string>& activities) {
    Marking m;
    for (const auto& p : net.source_places())
        m[p] = 1;
    Marking final_marking;
    for (const auto& p : net.sink_places())
        final_marking[p] = 1;
    for (const auto& a : activities) {
        const Transition* t = net.find_visible(a);
        if (!t)
            return false;
        auto ready = silent_closure(net, m, [&](const Marking& mm) { return enabled(net, mm, t->id); });
        if (!ready)
            return false;
        m = fire(net, *ready, t->id);
    }
    return silent_closure(net, m, [&](const Marking& mm) { return mm == final_marking; }).has_value();
}

// ---------------------------------------------------------------------------

std::string to_string(FoldKind kind) {
    switch (kind) {
    case FoldKind::Sequence: return "Sequence";
    case FoldKind::Or: return "Or";
    case FoldKind::SelfLoop: return "SelfLoop";
    }
    return "?";
}

FoldKind fold_kind_from_string(const std::string& s) {
    if (s == "Sequence")
        return FoldKind::Sequence;
    if (s == "Or")
        return FoldKind::Or;
    if (s == "SelfLoop")
        return FoldKind::SelfLoop;
    throw SchemaError("unknown fold kind '" + s + "'");
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::vector<FoldCandidate> detect_substructures(const Gspn& net, const std::set<std::string>& protected_activities) {
    std::map<std::string, std::size_t> place_rank;
    for (std::size_t i = 0; i < net.places().size(); ++i)
        place_rank[net.places()[i]] = i;

    // Unprotected visible transitions with a single input and output place.
    std::vector<const Transition*> simple;
    for (const auto& t : net.transitions())
        if (t.visible() && !protected_activities.count(*t.label) && net.preset(t.id).size() == 1 &&
            net.postset(t.id).size() == 1)
            simple.push_back(&t);

    std::vector<FoldCandidate> found;

    for (const Transition* t : simple) {
        const auto& in = net.preset(t->id).front();
        const auto& out = net.postset(t->id).front();
        if (in == out) {
            found.push_back(FoldCandidate{FoldKind::SelfLoop, {*t->label}, in, out});
            continue;
        }
        for (const auto& tau : net.postset(out)) {
            const Transition& u = net.transition(tau);
            if (!u.visible() && sorted(net.preset(tau)) == std::vector<std::string>{out} &&
                sorted(net.postset(tau)) == std::vector<std::string>{in}) {
                found.push_back(FoldCandidate{FoldKind::SelfLoop, {*t->label}, in, out});
                break;
            }
        }
    }

    // Sequence links t -> p -> t' through a place with one producer and one consumer.
    std::map<std::string, const Transition*> next_of, prev_of;
    std::set<std::string> simple_ids;
    for (const Transition* t : simple)
        simple_ids.insert(t->id);
    for (const Transition* t : simple) {
        const auto& out = net.postset(t->id).front();
        if (net.preset(out).size() != 1 || net.postset(out).size() != 1)
            continue;
        const auto& succ = net.postset(out).front();
        if (succ == t->id || !simple_ids.count(succ))
            continue;
        const Transition* s = &net.transition(succ);
        next_of[t->id] = s;
        prev_of[succ] = t;
    }
    std::set<std::string> chained;
    auto emit_chain = [&](const Transition* head) {
        FoldCandidate c{FoldKind::Sequence, {}, net.preset(head->id).front(), {}};
        const Transition* cur = head;
        while (cur && !chained.count(cur->id)) {
            chained.insert(cur->id);
            c.members.push_back(*cur->label);
            c.exit = net.postset(cur->id).front();
            auto it = next_of.find(cur->id);
            cur = it == next_of.end() ? nullptr : it->second;
        }
        if (c.members.size() >= 2)
            found.push_back(std::move(c));
    };
    for (const Transition* t : simple)
        if (!prev_of.count(t->id) && next_of.count(t->id))
            emit_chain(t);
    // remaining links belong to pure cycles; break them at the first transition
    for (const Transition* t : simple)
        if (next_of.count(t->id) && !chained.count(t->id))
            emit_chain(t);

    // Or blocks: two or more transitions between the same pair of places.
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> by_places;
    for (const Transition* t : simple) {
        const auto& in = net.preset(t->id).front();
        const auto& out = net.postset(t->id).front();
        if (in != out)
            by_places[{in, out}].push_back(*t->label);
    }
    for (auto& [key, labels] : by_places)
        if (labels.size() >= 2)
            found.push_back(FoldCandidate{FoldKind::Or, sorted(labels), key.first, key.second});

    auto entry_rank = [&](const FoldCandidate& c) { return place_rank.at(c.entry); };
    std::stable_sort(found.begin(), found.end(), [&](const FoldCandidate& a, const FoldCandidate& b) {
        return std::make_tuple(-static_cast<long>(a.activity_count()), entry_rank(a), static_cast<int>(a.kind),
                               a.members) < std::make_tuple(-static_cast<long>(b.activity_count()), entry_rank(b),
                                                            static_cast<int>(b.kind), b.members);
    });
    std::set<std::string> used;
    std::vector<FoldCandidate> chosen;
    for (auto& c : found) {
        if (std::any_of(c.members.begin(), c.members.end(), [&](const auto& m) { return used.count(m) != 0; }))
            continue;
        used.insert(c.members.begin(), c.members.end());
        chosen.push_back(std::move(c));
    }
    std::stable_sort(chosen.begin(), chosen.end(), [&](const FoldCandidate& a, const FoldCandidate& b) {
        return std::make_tuple(entry_rank(a), static_cast<int>(a.kind), a.members) <
               std::make_tuple(entry_rank(b), static_cast<int>(b.kind), b.members);
    });
    return chosen;
}

} // namespace logfold
