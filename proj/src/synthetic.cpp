#include "logfold/synthetic.hpp"

#include "logfold/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace logfold {

SyntheticSpec::SyntheticSpec() {
    delays = {
        {"ER Triage", {600.0, 0.3, -0.8}},
        {"ER Sepsis Triage", {300.0, 0.3, -0.8}},
        {"Leucocytes", {1800.0, 0.5}},
        {"Leucocytes repeat", {21600.0, 0.8}},
        {"CRP", {600.0, 0.5}},
        {"CRP repeat", {21600.0, 0.8}},
        {"LacticAcid", {300.0, 0.5}},
        {"LacticAcid repeat", {21600.0, 0.8}},
        {"IV Antibiotics", {1800.0, 0.6}},
        {"Admission NC", {3600.0, 0.2, -0.8}},
        {"Admission IC", {1800.0, 0.2, -0.8}},
    };
    stays = {{"Admission NC", {432000.0, 0.2, 0.6}}, {"Admission IC", {864000.0, 0.2, 0.6}}};
    roles = {
        {"clerk", {"C01", "C02", "C03", "C04"}},
        {"nurse", {"N01", "N02", "N03", "N04", "N05", "N06"}},
        {"lab", {"L01", "L02", "L03", "L04", "L05"}},
        {"doctor", {"D01", "D02", "D03", "D04", "D05"}},
    };
    activity_role = {
        {"ER Registration", "clerk"}, {"ER Triage", "nurse"},     {"ER Sepsis Triage", "nurse"},
        {"Leucocytes", "lab"},        {"CRP", "lab"},             {"LacticAcid", "lab"},
        {"IV Antibiotics", "nurse"},  {"Admission NC", "doctor"}, {"Admission IC", "doctor"},
        {"Release A", "doctor"},      {"Release B", "doctor"},    {"Release C", "doctor"},
        {"Release D", "doctor"},      {"Release E", "doctor"},    {"Vital Signs Check", "nurse"},
    };
}

namespace {

void check_delay(const std::string& what, const LogNormalDelay& d) {
    if (!(d.median > 0.0) || !std::isfinite(d.median) || !(d.sigma >= 0.0) || !std::isfinite(d.sigma) ||
        !std::isfinite(d.severity))
        throw ConfigError("delay for '" + what + "' needs a positive median and non-negative sigma");
}

void check_choice(const std::string& what, const std::vector<WeightedChoice>& choices) {
    if (choices.empty())
        throw ConfigError(what + " choice is empty");
    double total = 0.0;
    for (const auto& c : choices) {
        if (!(c.probability >= 0.0))
            throw ConfigError(what + " probability for '" + c.activity + "' is negative");
        total += c.probability;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError(what + " probabilities sum to " + std::to_string(total) + ", not 1");
}

void check_repeat(const std::string& what, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw ConfigError("repeat probability for '" + what + "' must lie in [0,1)");
}

} // namespace

void SyntheticSpec::validate() const {
    if (cases == 0)
        throw ConfigError("synthetic spec needs at least one case");
    if (!(truncation >= 0.0 && truncation < 1.0))
        throw ConfigError("truncation probability must lie in [0,1)");
    if (!(mean_interarrival > 0.0))
        throw ConfigError("mean inter-arrival time must be positive");
    if (registration.empty())
        throw ConfigError("registration sequence is empty");
    check_choice("admission", admissions);
    check_choice("release", releases);

    std::vector<std::string> needs_delay(registration.begin() + 1, registration.end());
    std::vector<std::string> all(registration.begin(), registration.end());
    for (const auto& l : lab_tests) {
        check_repeat(l.activity, l.repeat);
        needs_delay.push_back(l.activity);
        all.push_back(l.activity);
        if (l.repeat > 0.0)
            needs_delay.push_back(l.activity + " repeat");
    }
    needs_delay.push_back(antibiotics);
    all.push_back(antibiotics);
    for (const auto& a : admissions) {
        needs_delay.push_back(a.activity);
        all.push_back(a.activity);
        auto it = stays.find(a.activity);
        if (it == stays.end())
            throw ConfigError("no stay distribution for '" + a.activity + "'");
        check_delay(a.activity + " stay", it->second);
    }
    for (const auto& r : releases)
        all.push_back(r.activity);
    for (const auto& a : needs_delay) {
        auto it = delays.find(a);
        if (it == delays.end())
            throw ConfigError("no delay distribution for '" + a + "'");
        check_delay(a, it->second);
    }
    if (noise) {
        check_repeat(noise->activity, noise->repeat);
        check_delay(noise->activity, noise->delay);
        all.push_back(noise->activity);
    }
    for (const auto& a : all) {
        auto it = activity_role.find(a);
        if (it == activity_role.end())
            throw ConfigError("no role assigned to '" + a + "'");
        auto r = roles.find(it->second);
        if (r == roles.end() || r->second.empty())
            throw ConfigError("role '" + it->second + "' has no performers");
    }
}

namespace {

/// Distribution transforms written out so the samples do not depend on the
/// standard library's distribution implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    double normal() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    double exponential(double mean) { return -mean * std::log(uniform()); }
    Timestamp lognormal(const LogNormalDelay& d, double severity) {
        return std::max<Timestamp>(1, std::llround(d.median * std::exp(d.severity * severity + d.sigma * normal())));
    }
    const std::string& choose(const std::vector<WeightedChoice>& choices) {
        const double u = uniform();
        double acc = 0.0;
        for (const auto& c : choices) {
            acc += c.probability;
            if (u < acc)
                return c.activity;
        }
        return choices.back().activity;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace

EventLog generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    Sampler s(seed);
    std::vector<Trace> traces;
    traces.reserve(spec.cases);
    double arrival = static_cast<double>(spec.start);
    const int width = static_cast<int>(std::to_string(spec.cases).size());

    for (std::size_t c = 0; c < spec.cases; ++c) {
        arrival += s.exponential(spec.mean_interarrival);
        std::string id = std::to_string(c + 1);
        id = "case_" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0') + id;
        Trace t{id, {}};
        Timestamp now = static_cast<Timestamp>(std::llround(arrival));
        const double severity = s.normal();
        auto emit = [&](const std::string& activity, Timestamp delay) {
            now += delay;
            const auto& pool = spec.roles.at(spec.activity_role.at(activity));
            t.events.push_back(Event{id, activity, pool[s.index(pool.size())], now, {}});
        };

        for (std::size_t i = 0; i < spec.registration.size(); ++i)
            emit(spec.registration[i], i == 0 ? 0 : s.lognormal(spec.delays.at(spec.registration[i]), severity));
        for (const auto& lab : spec.lab_tests) {
            emit(lab.activity, s.lognormal(spec.delays.at(lab.activity), severity));
            while (s.bernoulli(lab.repeat))
                emit(lab.activity, s.lognormal(spec.delays.at(lab.activity + " repeat"), severity));
        }
        if (spec.noise) {
            emit(spec.noise->activity, s.lognormal(spec.noise->delay, severity));
            while (s.bernoulli(spec.noise->repeat))
                emit(spec.noise->activity, s.lognormal(spec.noise->delay, severity));
        }
        emit(spec.antibiotics, s.lognormal(spec.delays.at(spec.antibiotics), severity));
        if (!s.bernoulli(spec.truncation)) {
            const std::string& admission = s.choose(spec.admissions);
            emit(admission, s.lognormal(spec.delays.at(admission), severity));
            emit(s.choose(spec.releases), s.lognormal(spec.stays.at(admission), severity));
        }
        traces.push_back(std::move(t));
    }
    return EventLog::from_traces(std::move(traces));
}

} // namespace logfold
