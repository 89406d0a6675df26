#include "logfold/predictor.hpp"

#include "logfold/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace logfold {

ActivityDictionary::ActivityDictionary(const EventLog& training)
    : ActivityDictionary(training.activities()) {}

ActivityDictionary::ActivityDictionary(std::vector<std::string> activities) {
    std::sort(activities.begin(), activities.end());
    activities.erase(std::unique(activities.begin(), activities.end()), activities.end());
    for (std::size_t i = 0; i < activities.size(); ++i)
        ids_.emplace(activities[i], i + 1);
}

ActivityDictionary ActivityDictionary::extended(const EventLog& log) const {
    ActivityDictionary out = *this;
    std::vector<std::string> fresh;
    for (const auto& a : log.activities())
        if (!ids_.count(a))
            fresh.push_back(a);
    std::sort(fresh.begin(), fresh.end());
    for (const auto& a : fresh)
        out.ids_.emplace(a, out.ids_.size() + 1);
    return out;
}

double ActivityDictionary::encode(const std::string& activity) const {
    auto it = ids_.find(activity);
    return static_cast<double>(it == ids_.end() ? ids_.size() + 1 : it->second);
}

std::string to_string(PrefixPadding p) {
    return p == PrefixPadding::Leading ? "leading" : "trailing";
}

PrefixPadding prefix_padding_from_string(const std::string& s) {
    if (s == "leading")
        return PrefixPadding::Leading;
    if (s == "trailing")
        return PrefixPadding::Trailing;
    throw ConfigError("unknown padding '" + s + "' (expected leading or trailing)");
}

std::vector<PrefixSample> extract_prefixes(const EventLog& log, const std::string& point, std::size_t prefix_len,
                                           const ActivityDictionary& dict, PrefixPadding padding) {
    if (prefix_len == 0)
        throw ArgumentError("prefix length must be positive");
    std::vector<PrefixSample> out;
    for (const Trace& t : log.traces()) {
        auto it = std::find_if(t.events.begin(), t.events.end(), [&](const Event& e) { return e.activity == point; });
        if (it == t.events.end())
            continue;
        const auto cut = static_cast<std::size_t>(it - t.events.begin());
        const std::size_t first = cut + 1 > prefix_len ? cut + 1 - prefix_len : 0;
        PrefixSample s;
        s.case_id = t.case_id;
        s.features.assign(2 * prefix_len, 0.0);
        const std::size_t offset = padding == PrefixPadding::Leading ? prefix_len - (cut + 1 - first) : 0;
        for (std::size_t i = first, slot = offset; i <= cut; ++i, ++slot) {
            s.features[2 * slot] = dict.encode(t.events[i].activity);
            s.features[2 * slot + 1] =
                i == 0 ? 0.0 : static_cast<double>(t.events[i].timestamp - t.events[i - 1].timestamp);
        }
        s.target = static_cast<double>(remaining_time(t, cut));
        out.push_back(std::move(s));
    }
    if (out.empty())
        throw NotApplicableError("no trace contains the prediction point '" + point + "'");
    return out;
}

FeatureMatrix FeatureMatrix::from_samples(const std::vector<PrefixSample>& samples) {
    if (samples.empty())
        return {};
    const std::size_t d = samples.front().features.size();
    FeatureMatrix m(samples.size(), d);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != d)
            throw ArgumentError("samples have inconsistent feature lengths");
        std::copy(samples[i].features.begin(), samples[i].features.end(), m.row(i).begin());
    }
    return m;
}

// ---------------------------------------------------------------- k-means

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::size_t nearest_centroid(std::span<const double> x, const FeatureMatrix& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(x, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

double kmeans_assign_serial(const FeatureMatrix& points, const FeatureMatrix& centroids,
                            std::vector<std::size_t>& assignment) {
    assignment.resize(points.rows());
    double wcss = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        assignment[i] = nearest_centroid(points.row(i), centroids);
        wcss += squared_distance(points.row(i), centroids.row(assignment[i]));
    }
    return wcss;
}

double kmeans_assign_parallel(const FeatureMatrix& points, const FeatureMatrix& centroids,
                              std::vector<std::size_t>& assignment) {
    const std::size_t n = points.rows();
    assignment.resize(n);
    std::vector<double> dist(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        const auto r = static_cast<std::size_t>(i);
        assignment[r] = nearest_centroid(points.row(r), centroids);
        dist[r] = squared_distance(points.row(r), centroids.row(assignment[r]));
    }
    // summed in row order so the result matches the serial kernel bit for bit
    double wcss = 0.0;
    for (double d : dist)
        wcss += d;
    return wcss;
}

KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, std::uint64_t seed, int max_iterations, Exec exec) {
    const std::size_t n = points.rows(), d = points.cols();
    if (k == 0 || k > n)
        throw ConfigError("k-means needs 1 <= k <= number of points (k = " + std::to_string(k) +
                          ", points = " + std::to_string(n) + "); choose a smaller k");
    std::mt19937_64 rng(seed);
    KMeansResult res;
    res.centroids = FeatureMatrix(k, d);

    // k-means++ seeding
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t pick = static_cast<std::size_t>(rng() % n);
    for (std::size_t c = 0; c < k; ++c) {
        std::copy(points.row(pick).begin(), points.row(pick).end(), res.centroids.row(c).begin());
        if (c + 1 == k)
            break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points.row(i), res.centroids.row(c)));
            total += d2[i];
        }
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(rng() % n);
            continue;
        }
        const double u = unit_real(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (u < acc && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
    }

    auto assign = exec == Exec::Parallel ? kmeans_assign_parallel : kmeans_assign_serial;
    std::vector<std::size_t> previous;
    for (int it = 0; it < std::max(1, max_iterations); ++it) {
        res.wcss_history.push_back(assign(points, res.centroids, res.assignment));
        res.iterations = it + 1;
        if (res.assignment == previous)
            break;
        previous = res.assignment;
        FeatureMatrix sums(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = sums.row(res.assignment[i]);
            const auto p = points.row(i);
            for (std::size_t j = 0; j < d; ++j)
                row[j] += p[j];
            ++counts[res.assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c)
            if (counts[c] > 0)
                for (std::size_t j = 0; j < d; ++j)
                    res.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
    return res;
}

KMeansResult kmeans_best_of(const FeatureMatrix& points, std::size_t k, std::uint64_t seed, int restarts,
                            int max_iterations, Exec exec) {
    KMeansResult best = kmeans(points, k, seed, max_iterations, exec);
    for (int r = 1; r < restarts; ++r) {
        KMeansResult cand = kmeans(points, k, seed + static_cast<std::uint64_t>(r), max_iterations, exec);
        if (cand.wcss_history.back() < best.wcss_history.back())
            best = std::move(cand);
    }
    return best;
}

// ------------------------------------------------------------- regressors

SortedColumns sort_columns(const FeatureMatrix& x) {
    SortedColumns order(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        auto& o = order[j];
        o.resize(x.rows());
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return x(a, j) < x(b, j); });
    }
    return order;
}

namespace {

Stump best_split_on(const FeatureMatrix& x, const std::vector<std::size_t>& ord, std::size_t feature,
                    std::span<const double> r) {
    Stump best;
    best.gain = -std::numeric_limits<double>::infinity();
    const std::size_t n = ord.size();
    double total = 0.0;
    for (std::size_t i : ord)
        total += r[i];
    const double base = total * total / static_cast<double>(n);
    double left = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        left += r[ord[p]];
        const double xv = x(ord[p], feature), xn = x(ord[p + 1], feature);
        if (!(xv < xn))
            continue;
        const double nl = static_cast<double>(p + 1), nr = static_cast<double>(n - p - 1);
        const double right = total - left;
        const double gain = left * left / nl + right * right / nr - base;
        if (gain > best.gain) {
            best.gain = gain;
            best.feature = static_cast<int>(feature);
            best.threshold = xv + (xn - xv) / 2.0;
            best.left = left / nl;
            best.right = right / nr;
        }
    }
    return best;
}

Stump reduce_stumps(const std::vector<Stump>& per_feature, std::span<const double> r) {
    Stump best;
    best.gain = -std::numeric_limits<double>::infinity();
    for (const Stump& s : per_feature)
        if (s.feature >= 0 && s.gain > best.gain)
            best = s;
    if (best.feature < 0) {
        double total = 0.0;
        for (double v : r)
            total += v;
        best = Stump{};
        best.left = best.right = r.empty() ? 0.0 : total / static_cast<double>(r.size());
        best.gain = 0.0;
    }
    return best;
}

} // namespace

Stump best_stump_serial(const FeatureMatrix& x, const SortedColumns& order, std::span<const double> residuals) {
    std::vector<Stump> per_feature(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        per_feature[j] = best_split_on(x, order[j], j, residuals);
    return reduce_stumps(per_feature, residuals);
}

Stump best_stump_parallel(const FeatureMatrix& x, const SortedColumns& order, std::span<const double> residuals) {
    std::vector<Stump> per_feature(x.cols());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < static_cast<long>(x.cols()); ++j) {
        const auto f = static_cast<std::size_t>(j);
        per_feature[f] = best_split_on(x, order[f], f, residuals);
    }
    return reduce_stumps(per_feature, residuals);
}

void StumpBooster::fit(const FeatureMatrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    if (n == 0 || y.size() != n)
        throw ArgumentError("booster needs one target per non-empty feature row");
    base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    stumps_.clear();
    mse_history_.clear();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = y[i] - base_;
    auto mse = [&] {
        double s = 0.0;
        for (double v : r)
            s += v * v;
        return s / static_cast<double>(n);
    };
    mse_history_.push_back(mse());
    const SortedColumns order = sort_columns(x);
    for (int round = 0; round < cfg_.rounds; ++round) {
        Stump s = cfg_.exec == Exec::Parallel ? best_stump_parallel(x, order, r) : best_stump_serial(x, order, r);
        s.left *= cfg_.learning_rate;
        s.right *= cfg_.learning_rate;
        for (std::size_t i = 0; i < n; ++i)
            r[i] -= s(x.row(i));
        stumps_.push_back(s);
        mse_history_.push_back(mse());
    }
}

double StumpBooster::predict(std::span<const double> x) const {
    double f = base_;
    for (const Stump& s : stumps_)
        f += s(x);
    return f;
}

nlohmann::json StumpBooster::to_json() const {
    nlohmann::json j;
    j["kind"] = kind();
    j["base"] = base_;
    j["learning_rate"] = cfg_.learning_rate;
    auto& arr = j["stumps"] = nlohmann::json::array();
    for (const Stump& s : stumps_)
        arr.push_back({s.feature, s.threshold, s.left, s.right});
    return j;
}

std::unique_ptr<StumpBooster> StumpBooster::from_json(const nlohmann::json& j) {
    BoostingConfig cfg;
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    auto b = std::make_unique<StumpBooster>(cfg);
    b->base_ = j.at("base").get<double>();
    for (const auto& s : j.at("stumps"))
        b->stumps_.push_back(Stump{s.at(0).get<int>(), s.at(1).get<double>(), s.at(2).get<double>(),
                                   s.at(3).get<double>(), 0.0});
    b->cfg_.rounds = static_cast<int>(b->stumps_.size());
    return b;
}

RegressorFactory default_regressor_factory(const BoostingConfig& cfg) {
    return [cfg] { return std::make_unique<StumpBooster>(cfg); };
}

// ------------------------------------------------------------------ model

namespace {

double compress(double v) {
    return std::log1p(std::max(0.0, v));
}

} // namespace

std::vector<double> PredictionModel::standardize(std::span<const double> x) const {
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        z[j] = (compress(x[j]) - mean_[j]) / scale_[j];
    return z;
}

std::size_t PredictionModel::bucket_of(std::span<const double> features) const {
    if (features.size() != feature_length())
        throw ArgumentError("feature length " + std::to_string(features.size()) + " does not match model length " +
                            std::to_string(feature_length()));
    const auto z = standardize(features);
    return nearest_centroid(z, centroids_);
}

PredictionModel train(const std::vector<PrefixSample>& samples, const PredictorConfig& config,
                      const RegressorFactory& factory) {
    if (samples.size() < config.k)
        throw ConfigError("only " + std::to_string(samples.size()) + " training samples for k = " +
                          std::to_string(config.k) + "; choose a smaller k");
    const FeatureMatrix x = FeatureMatrix::from_samples(samples);
    const std::size_t n = x.rows(), d = x.cols();

    PredictionModel model;
    model.config_ = config;
    model.mean_.assign(d, 0.0);
    model.scale_.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += compress(x(i, j));
        const double mu = s / static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            v += (compress(x(i, j)) - mu) * (compress(x(i, j)) - mu);
        const double sd = std::sqrt(v / static_cast<double>(n));
        model.mean_[j] = mu;
        model.scale_[j] = sd > 1e-12 ? sd : 1.0;
    }
    FeatureMatrix z(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto zi = model.standardize(x.row(i));
        std::copy(zi.begin(), zi.end(), z.row(i).begin());
    }

    double total = 0.0;
    for (const auto& s : samples)
        total += s.target;
    model.global_mean_ = total / static_cast<double>(n);

    const KMeansResult km =
        kmeans_best_of(z, config.k, config.seed, config.kmeans_restarts, config.kmeans_max_iterations, config.exec);
    model.centroids_ = km.centroids;
    model.regressors_.assign(config.k, nullptr);
    for (std::size_t b = 0; b < config.k; ++b) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i)
            if (km.assignment[i] == b)
                rows.push_back(i);
        if (rows.size() < config.min_bucket_size)
            continue;
        FeatureMatrix xb(rows.size(), d);
        std::vector<double> yb(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::copy(x.row(rows[r]).begin(), x.row(rows[r]).end(), xb.row(r).begin());
            yb[r] = samples[rows[r]].target;
        }
        auto reg = factory();
        reg->fit(xb, yb);
        model.regressors_[b] = std::move(reg);
    }
    return model;
}

PredictionModel train(const std::vector<PrefixSample>& samples, const PredictorConfig& config) {
    BoostingConfig b = config.boosting;
    b.exec = config.exec;
    return train(samples, config, default_regressor_factory(b));
}

double predict(const PredictionModel& model, const PrefixSample& sample) {
    const std::size_t b = model.bucket_of(sample.features);
    const auto& reg = model.regressors_[b];
    const double v = reg ? reg->predict(sample.features) : model.global_mean_;
    return std::max(0.0, v);
}

std::string PredictionModel::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = {{"prefix_len", config_.prefix_len},
                   {"padding", to_string(config_.padding)},
                   {"k", config_.k},
                   {"seed", config_.seed},
                   {"kmeans_max_iterations", config_.kmeans_max_iterations},
                   {"kmeans_restarts", config_.kmeans_restarts},
                   {"rounds", config_.boosting.rounds},
                   {"learning_rate", config_.boosting.learning_rate},
                   {"min_bucket_size", config_.min_bucket_size}};
    j["global_mean"] = global_mean_;
    j["feature_mean"] = mean_;
    j["feature_scale"] = scale_;
    auto& cs = j["centroids"] = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < centroids_.rows(); ++c)
        cs.push_back(std::vector<double>(centroids_.row(c).begin(), centroids_.row(c).end()));
    auto& bs = j["buckets"] = nlohmann::ordered_json::array();
    for (const auto& r : regressors_)
        bs.push_back(r ? nlohmann::ordered_json(r->to_json()) : nlohmann::ordered_json{{"kind", "fallback"}});
    return j.dump(2) + "\n";
}

PredictionModel PredictionModel::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PredictionModel m;
        const auto& c = j.at("config");
        m.config_.prefix_len = c.at("prefix_len").get<std::size_t>();
        m.config_.padding = prefix_padding_from_string(c.at("padding").get<std::string>());
        m.config_.k = c.at("k").get<std::size_t>();
        m.config_.seed = c.at("seed").get<std::uint64_t>();
        m.config_.kmeans_max_iterations = c.at("kmeans_max_iterations").get<int>();
        m.config_.kmeans_restarts = c.at("kmeans_restarts").get<int>();
        m.config_.boosting.rounds = c.at("rounds").get<int>();
        m.config_.boosting.learning_rate = c.at("learning_rate").get<double>();
        m.config_.min_bucket_size = c.at("min_bucket_size").get<std::size_t>();
        m.global_mean_ = j.at("global_mean").get<double>();
        m.mean_ = j.at("feature_mean").get<std::vector<double>>();
        m.scale_ = j.at("feature_scale").get<std::vector<double>>();
        const auto& cs = j.at("centroids");
        m.centroids_ = FeatureMatrix(cs.size(), m.mean_.size());
        for (std::size_t r = 0; r < cs.size(); ++r) {
            const auto row = cs[r].get<std::vector<double>>();
            if (row.size() != m.mean_.size())
                throw SchemaError("centroid length mismatch");
            std::copy(row.begin(), row.end(), m.centroids_.row(r).begin());
        }
        for (const auto& b : j.at("buckets")) {
            const auto kind = b.at("kind").get<std::string>();
            if (kind == "fallback")
                m.regressors_.push_back(nullptr);
            else if (kind == "stumps")
                m.regressors_.push_back(StumpBooster::from_json(b));
            else
                throw SchemaError("unknown regressor kind '" + kind + "'");
        }
        if (m.regressors_.size() != m.centroids_.rows())
            throw SchemaError("bucket count does not match centroid count");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    }
}

double mae(std::span<const double> predictions, std::span<const double> actuals) {
    if (predictions.size() != actuals.size())
        throw ArgumentError("mae: length mismatch");
    if (predictions.empty())
        throw ArgumentError("mae: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        s += std::abs(actuals[i] - predictions[i]);
    return s / static_cast<double>(predictions.size());
}

PointEvaluation evaluate_point(const EventLog& train_log, const EventLog& test_log, const std::string& point,
                               const PredictorConfig& config, const ActivityDictionary* base) {
    const ActivityDictionary dict = base ? base->extended(train_log) : ActivityDictionary(train_log);
    const auto train_samples = extract_prefixes(train_log, point, config.prefix_len, dict, config.padding);
    const auto test_samples = extract_prefixes(test_log, point, config.prefix_len, dict, config.padding);
    PredictorConfig cfg = config;
    cfg.k = std::min(cfg.k, train_samples.size());
    const PredictionModel model = train(train_samples, cfg);
    std::vector<double> pred, actual;
    for (const auto& s : test_samples) {
        pred.push_back(predict(model, s));
        actual.push_back(s.target);
    }
    return {mae(pred, actual), train_samples.size(), test_samples.size()};
}

} // namespace logfold
