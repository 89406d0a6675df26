#include "logfold/error.hpp"
#include "logfold/event_log.hpp"
#include "logfold/experiment.hpp"
#include "logfold/gspn.hpp"
#include "logfold/io.hpp"
#include "logfold/parallel.hpp"
#include "logfold/predictor.hpp"
#include "logfold/simplify.hpp"
#include "logfold/social_network.hpp"
#include "logfold/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace logfold;

namespace {

constexpr int kStageFailure = 1;
constexpr int kBadArguments = 2;

struct Flags {
    std::string config;
    std::string input;
    std::string model;
    std::string network;
    std::string timestamp_format;
    std::string out_dir;
    std::string output;
    std::string points;
    std::uint64_t seed = 42;
    double budget_gamma = 0.0;
    double budget_g = 1.0;
    std::size_t cases = 1000;
    std::size_t k = 3;
    std::size_t prefix_len = 8;
    std::size_t per_community = 1;
    int threads = 0;
    bool noise = false;
    bool baselines = false;

    // Every subcommand registers its own copy of the shared options.
    std::multimap<std::string, CLI::Option*> opts;
    bool given(const std::string& name) const {
        const auto [b, e] = opts.equal_range(name);
        return std::any_of(b, e, [](const auto& kv) { return kv.second->count() > 0; });
    }
};

void add_common(CLI::App* cmd, Flags& f) {
    f.opts.emplace("config", cmd->add_option("--config", f.config, "key = value run configuration file"));
    f.opts.emplace("input", cmd->add_option("--input,-i", f.input, "event log CSV (default: synthetic log)"));
    f.opts.emplace("timestamp-format",
        cmd->add_option("--timestamp-format", f.timestamp_format, "iso8601 or epoch"));
    f.opts.emplace("seed", cmd->add_option("--seed", f.seed, "random seed"));
    f.opts.emplace("threads", cmd->add_option("--threads", f.threads, "OpenMP thread count (0 = default)"));
    f.opts.emplace("cases", cmd->add_option("--cases", f.cases, "synthetic case count"));
    f.opts.emplace("noise", cmd->add_flag("--noise", f.noise, "inject the noise self-loop into the synthetic log"));
}

void add_model(CLI::App* cmd, Flags& f) {
    f.opts.emplace("points", cmd->add_option("--points", f.points, "comma-separated prediction points"));
    f.opts.emplace("k", cmd->add_option("--k", f.k, "k-means bucket count"));
    f.opts.emplace("prefix-len", cmd->add_option("--prefix-len", f.prefix_len, "encoded prefix length"));
    f.opts.emplace("model", cmd->add_option("--model", f.model, "net JSON used instead of alpha discovery"));
    f.opts.emplace("network", cmd->add_option("--network", f.network, "social network edge list"));
    f.opts.emplace("per-community", cmd->add_option("--per-community", f.per_community, "points per community"));
}

void add_budget(CLI::App* cmd, Flags& f) {
    f.opts.emplace("budget-gamma",
        cmd->add_option("--budget-gamma", f.budget_gamma, "fixed expected deviation in seconds"));
    f.opts.emplace("budget-g", cmd->add_option("--budget-g", f.budget_g, "budget multiplier g"));
    f.opts.emplace("out-dir", cmd->add_option("--out-dir", f.out_dir, "report directory"));
}

RunConfig make_config(const Flags& f) {
    RunConfig cfg = f.given("config") ? load_run_config(f.config) : RunConfig{};
    if (f.given("input"))
        cfg.input = f.input;
    if (f.given("timestamp-format")) {
        try {
            cfg.timestamp_format = parse_timestamp_format(f.timestamp_format);
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    if (f.given("model"))
        cfg.model = f.model;
    if (f.given("network"))
        cfg.network = f.network;
    if (f.given("seed"))
        cfg.seed = f.seed;
    if (f.given("threads"))
        cfg.threads = f.threads;
    if (f.given("cases"))
        cfg.cases = f.cases;
    if (f.given("noise"))
        cfg.noise = f.noise;
    if (f.given("points"))
        cfg.points = parse_run_config("points = " + f.points).points;
    if (f.given("k"))
        cfg.k = f.k;
    if (f.given("prefix-len"))
        cfg.prefix_len = f.prefix_len;
    if (f.given("per-community"))
        cfg.per_community = f.per_community;
    if (f.given("budget-gamma")) {
        cfg.gamma_mode = GammaMode::Fixed;
        cfg.gamma_value = f.budget_gamma;
    }
    if (f.given("budget-g"))
        cfg.g = f.budget_g;
    if (f.given("out-dir"))
        cfg.out_dir = f.out_dir;
    if (f.given("baselines"))
        cfg.baselines = f.baselines;
    cfg.validate();
    if (cfg.threads > 0)
        omp_set_num_threads(cfg.threads);
    return cfg;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

std::string candidates_json(const std::vector<FoldCandidate>& cands) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& c : cands)
        j.push_back({{"kind", to_string(c.kind)},
                     {"members", c.members},
                     {"entry", c.entry},
                     {"exit", c.exit},
                     {"activity_count", c.activity_count()}});
    return j.dump(2) + "\n";
}

void print_warnings(const std::vector<std::string>& ws) {
    for (const auto& w : ws)
        std::cerr << "warning: " << w << "\n";
}

void print_summary(const ExperimentResult& res, const RunConfig& cfg) {
    const auto& r = res.optimization.report;
    std::cout << summary_table_markdown(r) << "\nbudget: selected mu " << format_fixed(r.selected_mu()) << " s <= limit "
              << format_fixed(r.budget.limit()) << " s\n";
    if (res.baselines)
        std::cout << "\n" << baselines_markdown(*res.baselines);
    std::cout << "reports written to " << cfg.out_dir << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logfold: prediction-aware event log simplification"};
    app.require_subcommand(1);
    Flags f;

    auto* gen = app.add_subcommand("generate", "write a synthetic sepsis-shaped event log");
    add_common(gen, f);
    gen->add_option("--output,-o", f.output, "output CSV (default: stdout)");

    auto* disc = app.add_subcommand("discover", "alpha-discover a net and list fold candidates");
    add_common(disc, f);
    add_model(disc, f);
    disc->add_option("--output,-o", f.output, "net JSON (default: stdout)");
    std::string candidates_out;
    disc->add_option("--candidates", candidates_out, "also write detected candidates as JSON");

    auto* comm = app.add_subcommand("communities", "detect resource communities");
    add_common(comm, f);
    add_model(comm, f);
    comm->add_option("--output,-o", f.output, "communities JSON (default: stdout)");

    auto* pts = app.add_subcommand("points", "select prediction points");
    add_common(pts, f);
    add_model(pts, f);

    auto* simp = app.add_subcommand("simplify", "fold every detected candidate without a budget");
    add_common(simp, f);
    add_model(simp, f);
    simp->add_option("--output,-o", f.output, "simplified CSV (default: stdout)");
    std::string manifest_out;
    simp->add_option("--manifest", manifest_out, "fold manifest JSON");

    auto* opt = app.add_subcommand("optimize", "budgeted simplification with reports");
    add_common(opt, f);
    add_model(opt, f);
    add_budget(opt, f);

    auto* eval = app.add_subcommand("evaluate", "train/test MAE at each prediction point");
    add_common(eval, f);
    add_model(eval, f);

    auto* run = app.add_subcommand("run", "full pipeline, optionally with the baseline comparison");
    add_common(run, f);
    add_model(run, f);
    add_budget(run, f);
    f.opts.emplace("baselines", run->add_flag("--baselines", f.baselines, "compare against the two filter baselines"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kBadArguments;
    }

    RunConfig cfg;
    try {
        cfg = make_config(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadArguments;
    }

    try {
        if (gen->parsed()) {
            emit(f.output, to_csv(load_experiment_log(cfg), cfg.timestamp_format));
        } else if (disc->parsed()) {
            const EventLog log = load_experiment_log(cfg);
            const Gspn net = cfg.model ? gspn_from_json(read_file(*cfg.model)) : alpha_discover(log);
            emit(f.output, gspn_to_json(net));
            if (!candidates_out.empty()) {
                std::set<std::string> protect(cfg.points.begin(), cfg.points.end());
                emit(candidates_out, candidates_json(detect_substructures(net, protect)));
            }
        } else if (comm->parsed()) {
            const SocialNetwork sn = cfg.network ? load_social_network(*cfg.network)
                                                 : build_social_network(load_experiment_log(cfg));
            emit(f.output, community_network_to_json(louvain(sn)));
        } else if (pts->parsed() || simp->parsed() || eval->parsed()) {
            // These share the front of the pipeline; the budget is irrelevant.
            const EventLog log = load_experiment_log(cfg);
            const Gspn net = cfg.model ? gspn_from_json(read_file(*cfg.model)) : alpha_discover(log);
            const SocialNetwork sn =
                cfg.network ? load_social_network(*cfg.network) : build_social_network(log);
            const auto sets = community_activity_sets(log, louvain(sn));
            const PredictionPointSet points = cfg.points.empty()
                                                  ? select_prediction_points(sets.sets, cfg.per_community)
                                                  : prediction_points_from_list(cfg.points, sets.sets);
            if (pts->parsed()) {
                std::cout << "point,community\n";
                for (const auto& p : points.points) {
                    auto it = points.provenance.find(p);
                    std::cout << csv_escape(p) << ","
                              << (it == points.provenance.end() ? "" : std::to_string(it->second)) << "\n";
                }
                for (auto c : points.uncovered)
                    std::cerr << "warning: community " << c << " has no distinct prediction point\n";
            } else if (simp->parsed()) {
                const auto cands = detect_substructures(net, points.as_set());
                const auto s = simplify_log(log, net, cands, SimplifyOptions{cfg.or_mode, Exec::Parallel});
                emit(f.output, to_csv(s.log, cfg.timestamp_format));
                if (!manifest_out.empty())
                    emit(manifest_out, fold_manifest_json(s.folds));
                std::cerr << "events: " << log.event_count() << " -> " << s.log.event_count() << "\n";
            } else {
                const auto [train, test] = temporal_split(log, cfg.split_fraction);
                const auto pc = cfg.optimizer_config().predictor;
                std::cout << "point,train_samples,test_samples,mae\n";
                for (const auto& p : points.points) {
                    try {
                        const auto ev = evaluate_point(train, test, p, pc);
                        std::cout << csv_escape(p) << "," << ev.train_samples << "," << ev.test_samples << ","
                                  << format_fixed(ev.mae) << "\n";
                    } catch (const NotApplicableError& e) {
                        std::cerr << "warning: " << p << ": " << e.what() << "\n";
                    }
                }
            }
        } else {
            RunConfig rc = cfg;
            if (opt->parsed())
                rc.baselines = false;
            const ExperimentResult res = run_experiment(rc);
            print_warnings(res.warnings);
            print_summary(res, rc);
        }
    } catch (const StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return e.stage() == "config" ? kBadArguments : kStageFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStageFailure;
    }
    return 0;
}
