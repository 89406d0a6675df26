#pragma once

#include "logfold/event_log.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logfold {

/// Log-normal duration in seconds: median * exp(severity * s + sigma * z),
/// where s is the case's standard-normal severity and z fresh noise.
struct LogNormalDelay {
    double median = 60.0;
    double sigma = 0.5;
    double severity = 0.0;
};

struct WeightedChoice {
    std::string activity;
    double probability = 0.0;
};

/// Self-loop activity: one mandatory occurrence, then another with
/// probability `repeat` each time.
struct LoopedActivity {
    std::string activity;
    double repeat = 0.0;
};

struct NoiseSpec {
    std::string activity = "Vital Signs Check";
    double repeat = 0.5;
    LogNormalDelay delay{900.0, 1.0};
};

/// Control flow: registration sequence, looped lab tests, antibiotics,
/// admission choice, release choice. Stay before release depends on the
/// admission taken.
struct SyntheticSpec {
    std::size_t cases = 1000;
    Timestamp start = 1388534400; // 2014-01-01T00:00:00Z
    double mean_interarrival = 40000.0;

    std::vector<std::string> registration{"ER Registration", "ER Triage", "ER Sepsis Triage"};
    std::vector<LoopedActivity> lab_tests{{"Leucocytes", 2.0 / 3.0}, {"CRP", 2.0 / 3.0}, {"LacticAcid", 2.0 / 3.0}};
    std::string antibiotics = "IV Antibiotics";
    std::vector<WeightedChoice> admissions{{"Admission NC", 0.7}, {"Admission IC", 0.3}};
    std::vector<WeightedChoice> releases{
        {"Release A", 0.6}, {"Release B", 0.15}, {"Release C", 0.1}, {"Release D", 0.1}, {"Release E", 0.05}};

    /// Share of cases that stop after the antibiotics, never admitted or released.
    double truncation = 0.05;

    /// Delay before each activity; lab repeats use the `<activity> repeat` key.
    std::map<std::string, LogNormalDelay> delays;
    /// Stay between admission and release, per admission activity.
    std::map<std::string, LogNormalDelay> stays;

    /// role -> performers, and activity -> role
    std::map<std::string, std::vector<std::string>> roles;
    std::map<std::string, std::string> activity_role;

    /// Extra self-loop inserted after the lab tests; its duration carries
    /// no information about the remaining time.
    std::optional<NoiseSpec> noise;

    /// Fills in the sepsis-shaped delay, stay and role tables.
    SyntheticSpec();
    /// Throws ConfigError on invalid probabilities, delays or roles.
    void validate() const;
};

EventLog generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

} // namespace logfold
