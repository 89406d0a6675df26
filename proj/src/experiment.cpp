#include "logfold/experiment.hpp"

#include "logfold/error.hpp"
#include "logfold/io.hpp"
#include "logfold/simplify.hpp"
#include "logfold/social_network.hpp"
#include "logfold/synthetic.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

namespace logfold {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? sep : "") + xs[i];
    return out;
}

template <class T>
T parse_integer(const std::string& key, const std::string& v) {
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "0" || v == "off")
        return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

std::string real_text(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

} // namespace

OrDelayMode parse_or_mode(const std::string& s) {
    if (s == "relabel")
        return OrDelayMode::Relabel;
    if (s == "overwrite")
        return OrDelayMode::OverwriteWithPooled;
    throw ConfigError("unknown or_mode '" + s + "' (expected relabel or overwrite)");
}

std::string to_string(OrDelayMode m) {
    return m == OrDelayMode::Relabel ? "relabel" : "overwrite";
}

void RunConfig::validate() const {
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw ConfigError("split_fraction must lie in (0,1)");
    if (prefix_len == 0)
        throw ConfigError("prefix_len must be at least 1");
    if (k == 0)
        throw ConfigError("k must be at least 1");
    if (!input && cases == 0)
        throw ConfigError("cases must be at least 1");
    if (!(g >= 0.0) || !std::isfinite(g))
        throw ConfigError("g must be a non-negative number");
    if (!(gamma_value >= 0.0) || !std::isfinite(gamma_value))
        throw ConfigError("gamma_value must be a non-negative number");
    if (per_community == 0)
        throw ConfigError("per_community must be at least 1");
    if (!(attribute_fraction >= 0.0 && attribute_fraction <= 1.0))
        throw ConfigError("attribute_fraction must lie in [0,1]");
    if (threads < 0)
        throw ConfigError("threads must be non-negative");
    if (out_dir.empty())
        throw ConfigError("out_dir must not be empty");
}

OptimizerConfig RunConfig::optimizer_config() const {
    OptimizerConfig oc;
    oc.predictor.prefix_len = prefix_len;
    oc.predictor.k = k;
    oc.predictor.seed = seed;
    oc.split_fraction = split_fraction;
    oc.or_mode = or_mode;
    oc.assess_point = assess_point;
    return oc;
}

RunConfig parse_run_config(const std::string& text, RunConfig cfg) {
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"input", [&](auto&, auto& v) { cfg.input = v; }},
        {"model", [&](auto&, auto& v) { cfg.model = v; }},
        {"network", [&](auto&, auto& v) { cfg.network = v; }},
        {"timestamp_format",
         [&](auto&, auto& v) {
             try {
                 cfg.timestamp_format = parse_timestamp_format(v);
             } catch (const ArgumentError& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"case_column", [&](auto&, auto& v) { cfg.columns.case_id = v; }},
        {"activity_column", [&](auto&, auto& v) { cfg.columns.activity = v; }},
        {"resource_column", [&](auto&, auto& v) { cfg.columns.resource = v; }},
        {"timestamp_column", [&](auto&, auto& v) { cfg.columns.timestamp = v; }},
        {"cases", [&](auto& k, auto& v) { cfg.cases = parse_integer<std::size_t>(k, v); }},
        {"noise", [&](auto& k, auto& v) { cfg.noise = parse_bool(k, v); }},
        {"split_fraction", [&](auto& k, auto& v) { cfg.split_fraction = parse_real(k, v); }},
        {"prefix_len", [&](auto& k, auto& v) { cfg.prefix_len = parse_integer<std::size_t>(k, v); }},
        {"k", [&](auto& k, auto& v) { cfg.k = parse_integer<std::size_t>(k, v); }},
        {"seed", [&](auto& k, auto& v) { cfg.seed = parse_integer<std::uint64_t>(k, v); }},
        {"gamma_mode",
         [&](auto&, auto& v) {
             try {
                 cfg.gamma_mode = parse_gamma_mode(v);
             } catch (const Error& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"gamma_value", [&](auto& k, auto& v) { cfg.gamma_value = parse_real(k, v); }},
        {"g", [&](auto& k, auto& v) { cfg.g = parse_real(k, v); }},
        {"points", [&](auto&, auto& v) { cfg.points = split_list(v); }},
        {"per_community", [&](auto& k, auto& v) { cfg.per_community = parse_integer<std::size_t>(k, v); }},
        {"assess_point",
         [&](auto&, auto& v) {
             if (v.empty())
                 cfg.assess_point.reset();
             else
                 cfg.assess_point = v;
         }},
        {"or_mode", [&](auto&, auto& v) { cfg.or_mode = parse_or_mode(v); }},
        {"baselines", [&](auto& k, auto& v) { cfg.baselines = parse_bool(k, v); }},
        {"attribute_activity", [&](auto&, auto& v) { cfg.attribute_activity = v; }},
        {"attribute_fraction", [&](auto& k, auto& v) { cfg.attribute_fraction = parse_real(k, v); }},
        {"endpoint_starts",
         [&](auto&, auto& v) {
             const auto xs = split_list(v);
             cfg.endpoint_starts = {xs.begin(), xs.end()};
         }},
        {"endpoint_ends",
         [&](auto&, auto& v) {
             const auto xs = split_list(v);
             cfg.endpoint_ends = {xs.begin(), xs.end()};
         }},
        {"out_dir", [&](auto&, auto& v) { cfg.out_dir = v; }},
        {"threads", [&](auto& k, auto& v) { cfg.threads = parse_integer<int>(k, v); }},
    };

    std::stringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config line " + std::to_string(no) + ": unknown key '" + key + "'");
        try {
            it->second(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(no) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
    return parse_run_config(read_file(path), std::move(base));
}

std::string run_config_to_text(const RunConfig& c) {
    std::ostringstream o;
    if (c.input)
        o << "input = " << *c.input << "\n";
    if (c.model)
        o << "model = " << *c.model << "\n";
    if (c.network)
        o << "network = " << *c.network << "\n";
    o << "timestamp_format = " << (c.timestamp_format == TimestampFormat::Epoch ? "epoch" : "iso8601") << "\n"
      << "case_column = " << c.columns.case_id << "\n"
      << "activity_column = " << c.columns.activity << "\n"
      << "resource_column = " << c.columns.resource << "\n"
      << "timestamp_column = " << c.columns.timestamp << "\n"
      << "cases = " << c.cases << "\n"
      << "noise = " << (c.noise ? "true" : "false") << "\n"
      << "split_fraction = " << real_text(c.split_fraction) << "\n"
      << "prefix_len = " << c.prefix_len << "\n"
      << "k = " << c.k << "\n"
      << "seed = " << c.seed << "\n"
      << "gamma_mode = " << to_string(c.gamma_mode) << "\n"
      << "gamma_value = " << real_text(c.gamma_value) << "\n"
      << "g = " << real_text(c.g) << "\n"
      << "points = " << join(c.points, ",") << "\n"
      << "per_community = " << c.per_community << "\n"
      << "assess_point = " << c.assess_point.value_or("") << "\n"
      << "or_mode = " << to_string(c.or_mode) << "\n"
      << "baselines = " << (c.baselines ? "true" : "false") << "\n"
      << "attribute_activity = " << c.attribute_activity << "\n"
      << "attribute_fraction = " << real_text(c.attribute_fraction) << "\n"
      << "endpoint_starts = " << join({c.endpoint_starts.begin(), c.endpoint_starts.end()}, ",") << "\n"
      << "endpoint_ends = " << join({c.endpoint_ends.begin(), c.endpoint_ends.end()}, ",") << "\n";
    return o.str();
}

std::string latest_point(const EventLog& log, const std::vector<std::string>& points) {
    std::string best;
    double best_pos = -1.0;
    for (const auto& p : points) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& t : log.traces()) {
            for (std::size_t i = 0; i < t.events.size(); ++i)
                if (t.events[i].activity == p) {
                    sum += static_cast<double>(i);
                    ++n;
                    break;
                }
        }
        if (n == 0)
            continue;
        const double pos = sum / static_cast<double>(n);
        if (pos > best_pos) {
            best_pos = pos;
            best = p;
        }
    }
    if (best.empty())
        throw NotApplicableError("none of the prediction points occurs in the log");
    return best;
}

// ------------------------------------------------------------- baselines

namespace {

const std::optional<double>* method_value(const BaselineRow& r, const std::string& method) {
    if (method == "proposed")
        return &r.proposed;
    if (method == "attribute_filter")
        return &r.attribute_filter;
    if (method == "endpoint_filter")
        return &r.endpoint_filter;
    throw ArgumentError("unknown method '" + method + "'");
}

bool complete(const BaselineRow& r) {
    return r.original && r.proposed && r.attribute_filter && r.endpoint_filter;
}

std::map<std::string, double> filtered_maes(const EventLog& filtered, const std::vector<std::string>& points,
                                            const RunConfig& cfg) {
    if (filtered.empty())
        return {};
    const auto [train, test] = temporal_split(filtered, cfg.split_fraction);
    return point_maes(train, test, points, cfg.optimizer_config().predictor);
}

} // namespace

double BaselineComparison::deviation(const std::string& method) const {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        const auto* v = method_value(r, method);
        if (!complete(r))
            continue;
        s += std::abs(**v - *r.original);
        ++n;
    }
    if (n == 0)
        throw NotApplicableError("no prediction point was evaluated by every method");
    return s / static_cast<double>(n);
}

double BaselineComparison::deviation(const std::string& method, const std::string& point) const {
    for (const auto& r : rows)
        if (r.point == point) {
            const auto* v = method_value(r, method);
            if (!r.original || !*v)
                throw NotApplicableError("point '" + point + "' has no " + method + " MAE");
            return std::abs(**v - *r.original);
        }
    throw ArgumentError("point '" + point + "' is not part of the comparison");
}

BaselineComparison compare_baselines(const EventLog& log, const OptimizationReport& report,
                                     const std::vector<std::string>& points, const RunConfig& cfg) {
    BaselineComparison out;
    auto attr = baseline_attribute_filter(log, cfg.attribute_activity, cfg.attribute_fraction, cfg.seed);
    auto ends = baseline_endpoints_filter(log, cfg.endpoint_starts, cfg.endpoint_ends);
    for (auto& w : attr.warnings)
        out.warnings.push_back("attribute filter: " + w);
    for (auto& w : ends.warnings)
        out.warnings.push_back("endpoint filter: " + w);
    out.events_attribute_filter = attr.log.event_count();
    out.events_endpoint_filter = ends.log.event_count();

    const auto a = filtered_maes(attr.log, points, cfg);
    const auto e = filtered_maes(ends.log, points, cfg);
    for (const auto& p : points) {
        BaselineRow row{p, {}, {}, {}, {}};
        for (const auto& pr : report.points)
            if (pr.point == p) {
                row.original = pr.mae_original;
                row.proposed = pr.mae_simplified;
            }
        if (auto it = a.find(p); it != a.end())
            row.attribute_filter = it->second;
        if (auto it = e.find(p); it != e.end())
            row.endpoint_filter = it->second;
        out.rows.push_back(std::move(row));
    }
    return out;
}

// -------------------------------------------------------------- pipeline

EventLog load_experiment_log(const RunConfig& cfg) {
    return stage("load", [&] {
        if (cfg.input)
            return parse_csv(*cfg.input, cfg.columns, cfg.timestamp_format);
        SyntheticSpec spec;
        spec.cases = cfg.cases;
        if (cfg.noise)
            spec.noise = NoiseSpec{};
        return generate_synthetic(spec, cfg.seed);
    });
}

ExperimentResult run_pipeline(const RunConfig& cfg, const EventLog& log) {
    stage("config", [&] { cfg.validate(); });
    ExperimentResult res;
    res.log = log;
    res.net = stage("discover", [&] { return cfg.model ? gspn_from_json(read_file(*cfg.model)) : alpha_discover(log); });
    const SocialNetwork sn = stage("social-network", [&] {
        return cfg.network ? load_social_network(*cfg.network) : build_social_network(log);
    });
    res.communities = stage("communities", [&] { return louvain(sn); });
    res.points = stage("points", [&] {
        const auto sets = community_activity_sets(log, res.communities);
        for (auto c : sets.empty_communities)
            res.warnings.push_back("community " + std::to_string(c) + " performed no activity");
        auto pts = cfg.points.empty() ? select_prediction_points(sets.sets, cfg.per_community)
                                      : prediction_points_from_list(cfg.points, sets.sets);
        for (const auto& p : pts.points)
            if (!log.has_activity(p))
                throw ArgumentError("prediction point '" + p + "' does not occur in the log");
        if (cfg.points.empty())
            for (auto c : pts.uncovered)
                res.warnings.push_back("community " + std::to_string(c) + " has no distinct prediction point");
        return pts;
    });
    res.candidates = stage("candidates", [&] { return detect_substructures(res.net, res.points.as_set()); });
    res.optimization = stage("optimize", [&] {
        return optimize_log(log, res.net, res.candidates, res.points,
                            BudgetSpec{cfg.gamma_mode, cfg.gamma_value, cfg.g}, cfg.optimizer_config());
    });
    if (cfg.baselines) {
        res.baselines =
            stage("baselines", [&] { return compare_baselines(log, res.optimization.report, res.points.points, cfg); });
        for (const auto& w : res.baselines->warnings)
            res.warnings.push_back(w);
    }
    return res;
}

// --------------------------------------------------------------- reports

namespace {

std::string opt_fixed(const std::optional<double>& v, const char* missing = "") {
    return v ? format_fixed(*v) : std::string(missing);
}

std::string candidate_id(std::size_t i) {
    return "N" + std::to_string(i + 1);
}

std::string members_text(const FoldCandidate& c) {
    return join(c.members, c.kind == FoldKind::Or ? " / " : " > ");
}

std::vector<std::string> assessed_points(const OptimizationReport& r) {
    std::set<std::string> s;
    for (const auto& a : r.assessments)
        for (const auto& [p, _] : a.mae_original)
            s.insert(p);
    return {s.begin(), s.end()};
}

std::optional<double> improvement(const PointResult& p) {
    if (!p.mae_original || !p.mae_simplified || *p.mae_original == 0.0)
        return std::nullopt;
    return (*p.mae_original - *p.mae_simplified) / *p.mae_original * 100.0;
}

} // namespace

std::string deviation_table_csv(const OptimizationReport& r) {
    std::string out = "candidate,kind,k,members,point,mae_original,mae_folded,deviation,mu,selected\n";
    for (std::size_t i = 0; i < r.assessments.size(); ++i) {
        const auto& a = r.assessments[i];
        for (const auto& [p, orig] : a.mae_original) {
            const double folded = a.mae_folded.at(p);
            out += candidate_id(i) + "," + to_string(a.candidate.kind) + "," + std::to_string(a.k) + "," +
                   csv_escape(members_text(a.candidate)) + "," + csv_escape(p) + "," + format_fixed(orig) + "," +
                   format_fixed(folded) + "," + format_fixed(std::abs(folded - orig)) + "," + format_fixed(a.mu) +
                   "," + (a.selected ? "1" : "0") + "\n";
        }
    }
    return out;
}

std::string deviation_table_markdown(const OptimizationReport& r) {
    const auto points = assessed_points(r);
    std::string out = "| candidate | kind | k | members |";
    std::string rule = "|---|---|---:|---|";
    for (const auto& p : points) {
        out += " |dMAE| " + p + " (s) |";
        rule += "---:|";
    }
    out += " mu (s) | selected |\n" + rule + "---:|:---:|\n";
    for (std::size_t i = 0; i < r.assessments.size(); ++i) {
        const auto& a = r.assessments[i];
        out += "| " + candidate_id(i) + " | " + to_string(a.candidate.kind) + " | " + std::to_string(a.k) + " | " +
               members_text(a.candidate) + " |";
        for (const auto& p : points) {
            const auto o = a.mae_original.find(p);
            out += " " +
                   (o == a.mae_original.end() ? std::string("n/a")
                                              : format_fixed(std::abs(a.mae_folded.at(p) - o->second))) +
                   " |";
        }
        out += " " + format_fixed(a.mu) + " | " + (a.selected ? "yes" : "no") + " |\n";
    }
    return out;
}

std::string summary_table_csv(const OptimizationReport& r) {
    std::string out = "point,mae_original,mae_simplified,improvement_percent,events_original,events_simplified,"
                      "reduction_percent\n";
    for (const auto& p : r.points)
        out += csv_escape(p.point) + "," + opt_fixed(p.mae_original) + "," + opt_fixed(p.mae_simplified) + "," +
               opt_fixed(improvement(p)) + "," + std::to_string(r.events_original) + "," +
               std::to_string(r.events_simplified) + "," + format_fixed(r.reduction_percent()) + "\n";
    return out;
}

std::string summary_table_markdown(const OptimizationReport& r) {
    std::string out = "| point | original MAE (s) | simplified MAE (s) | improvement (%) | original events | "
                      "simplified events | reduction (%) |\n|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& p : r.points)
        out += "| " + p.point + " | " + opt_fixed(p.mae_original, "n/a") + " | " +
               opt_fixed(p.mae_simplified, "n/a") + " | " + opt_fixed(improvement(p), "n/a") + " | " +
               std::to_string(r.events_original) + " | " + std::to_string(r.events_simplified) + " | " +
               format_fixed(r.reduction_percent()) + " |\n";
    return out;
}

std::string point_mae_csv(const OptimizationReport& r, const std::optional<BaselineComparison>& b) {
    std::string out = "point,method,mae\n";
    auto line = [&](const std::string& p, const char* m, const std::optional<double>& v) {
        if (v)
            out += csv_escape(p) + "," + m + "," + format_fixed(*v) + "\n";
    };
    for (const auto& p : r.points) {
        line(p.point, "original", p.mae_original);
        line(p.point, "simplified", p.mae_simplified);
        if (b)
            for (const auto& row : b->rows)
                if (row.point == p.point) {
                    line(p.point, "attribute_filter", row.attribute_filter);
                    line(p.point, "endpoint_filter", row.endpoint_filter);
                }
    }
    return out;
}

std::string baselines_csv(const BaselineComparison& b) {
    std::string out = "point,original,proposed,attribute_filter,endpoint_filter,dev_proposed,dev_attribute_filter,"
                      "dev_endpoint_filter\n";
    auto dev = [](const std::optional<double>& v, const std::optional<double>& o) {
        return v && o ? format_fixed(std::abs(*v - *o)) : std::string();
    };
    for (const auto& r : b.rows)
        out += csv_escape(r.point) + "," + opt_fixed(r.original) + "," + opt_fixed(r.proposed) + "," +
               opt_fixed(r.attribute_filter) + "," + opt_fixed(r.endpoint_filter) + "," +
               dev(r.proposed, r.original) + "," + dev(r.attribute_filter, r.original) + "," +
               dev(r.endpoint_filter, r.original) + "\n";
    return out;
}

std::string baselines_markdown(const BaselineComparison& b) {
    std::string out = "| point | original MAE (s) | proposed | attribute filter | endpoint filter |\n"
                      "|---|---:|---:|---:|---:|\n";
    for (const auto& r : b.rows)
        out += "| " + r.point + " | " + opt_fixed(r.original, "n/a") + " | " + opt_fixed(r.proposed, "n/a") + " | " +
               opt_fixed(r.attribute_filter, "n/a") + " | " + opt_fixed(r.endpoint_filter, "n/a") + " |\n";
    try {
        out += "| mean deviation from original | | " + format_fixed(b.deviation("proposed")) + " | " +
               format_fixed(b.deviation("attribute_filter")) + " | " + format_fixed(b.deviation("endpoint_filter")) +
               " |\n";
    } catch (const NotApplicableError&) {
        out += "| mean deviation from original | | n/a | n/a | n/a |\n";
    }
    return out;
}

std::string budget_summary_json(const OptimizationReport& r) {
    nlohmann::ordered_json j;
    j["gamma"] = r.budget.gamma;
    j["g"] = r.budget.g;
    j["limit"] = r.budget.limit();
    j["selected_mu"] = r.selected_mu();
    j["within_budget"] = r.selected_mu() <= r.budget.limit();
    auto& sel = j["selected"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.assessments.size(); ++i)
        if (r.assessments[i].selected)
            sel.push_back(candidate_id(i));
    j["events_original"] = r.events_original;
    j["events_simplified"] = r.events_simplified;
    j["reduction_percent"] = r.reduction_percent();
    return j.dump(2) + "\n";
}

std::vector<std::string> write_reports(const ExperimentResult& res, const RunConfig& cfg) {
    return stage("write", [&] {
        namespace fs = std::filesystem;
        std::vector<std::string> written;
        auto put = [&](const std::string& name, const std::string& content) {
            write_file_atomic((fs::path(cfg.out_dir) / name).string(), content);
            written.push_back(name);
        };
        const auto& rep = res.optimization.report;
        put("config.txt", run_config_to_text(cfg));
        put("original.csv", to_csv(res.log, cfg.timestamp_format));
        put("simplified.csv", to_csv(res.optimization.simplified.log, cfg.timestamp_format));
        put("net.json", gspn_to_json(res.net));
        put("simplified_net.json", gspn_to_json(res.optimization.simplified.net));
        put("communities.json", community_network_to_json(res.communities));
        std::string pts = "point,community\n";
        for (const auto& p : res.points.points) {
            const auto it = res.points.provenance.find(p);
            pts += csv_escape(p) + "," + (it == res.points.provenance.end() ? "" : std::to_string(it->second)) + "\n";
        }
        put("points.csv", pts);
        put("folds.json", fold_manifest_json(rep.folds));
        put("deviations.csv", deviation_table_csv(rep));
        put("deviations.md", deviation_table_markdown(rep));
        put("summary.csv", summary_table_csv(rep));
        put("summary.md", summary_table_markdown(rep));
        put("point_mae.csv", point_mae_csv(rep, res.baselines));
        put("budget.json", budget_summary_json(rep));
        if (res.baselines) {
            put("baselines.csv", baselines_csv(*res.baselines));
            put("baselines.md", baselines_markdown(*res.baselines));
        }
        std::string w;
        for (const auto& x : res.warnings)
            w += x + "\n";
        put("warnings.txt", w);
        return written;
    });
}

ExperimentResult run_experiment(const RunConfig& cfg) {
    stage("config", [&] { cfg.validate(); });
    ExperimentResult res = run_pipeline(cfg, load_experiment_log(cfg));
    write_reports(res, cfg);
    return res;
}

} // namespace logfold
