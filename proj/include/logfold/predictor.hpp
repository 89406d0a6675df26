#pragma once

#include "logfold/event_log.hpp"
#include "logfold/parallel.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace logfold {

/// Stable activity -> integer coding built from a training log. Ids start at
/// 1 in lexicographic order, extensions append after them; 0 is the padding
/// value and unseen activities map to size() + 1.
class ActivityDictionary {
public:
    ActivityDictionary() = default;
    explicit ActivityDictionary(const EventLog& training);
    explicit ActivityDictionary(std::vector<std::string> activities);

    /// Copy that keeps every existing id and appends the activities of
    /// `log` it does not know yet, in lexicographic order.
    ActivityDictionary extended(const EventLog& log) const;

    double encode(const std::string& activity) const;
    std::size_t size() const noexcept { return ids_.size(); }
    const std::map<std::string, std::size_t>& ids() const noexcept { return ids_; }

private:
    std::map<std::string, std::size_t> ids_;
};

struct PrefixSample {
    std::vector<double> features;
    double target = 0.0;
    std::string case_id;
};

/// Where zero padding goes when a prefix is shorter than the window.
/// Leading padding keeps the cut event in the last slot.
enum class PrefixPadding { Trailing, Leading };
std::string to_string(PrefixPadding p);
PrefixPadding prefix_padding_from_string(const std::string& s);

/// One sample per trace that contains `point`, cut at its first occurrence.
/// Features interleave (activity id, execution time) for the last
/// `prefix_len` events of the prefix, zero-padded to 2 * prefix_len values.
/// The target is the remaining time at the cut.
std::vector<PrefixSample> extract_prefixes(const EventLog& log, const std::string& point, std::size_t prefix_len,
                                           const ActivityDictionary& dict,
                                           PrefixPadding padding = PrefixPadding::Trailing);

/// Row-major dense matrix of feature rows.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : data_(rows * cols, 0.0), cols_(cols) {}
    static FeatureMatrix from_samples(const std::vector<PrefixSample>& samples);

    std::size_t rows() const noexcept { return cols_ ? data_.size() / cols_ : 0; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

private:
    std::vector<double> data_;
    std::size_t cols_ = 0;
};

// ---------------------------------------------------------------- k-means

struct KMeansResult {
    FeatureMatrix centroids;
    std::vector<std::size_t> assignment;
    /// Within-cluster sum of squares after each assignment step.
    std::vector<double> wcss_history;
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding from a seeded mt19937_64.
/// Empty clusters keep their previous centroid.
KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, std::uint64_t seed, int max_iterations = 100,
                    Exec exec = Exec::Parallel);

/// Nearest-centroid assignment (ties to the lower index); returns the WCSS.
double kmeans_assign_serial(const FeatureMatrix& points, const FeatureMatrix& centroids,
                            std::vector<std::size_t>& assignment);
double kmeans_assign_parallel(const FeatureMatrix& points, const FeatureMatrix& centroids,
                              std::vector<std::size_t>& assignment);

/// Runs kmeans with seeds seed, seed + 1, ... and keeps the lowest final
/// WCSS (earliest run on ties).
KMeansResult kmeans_best_of(const FeatureMatrix& points, std::size_t k, std::uint64_t seed, int restarts,
                            int max_iterations = 100, Exec exec = Exec::Parallel);

std::size_t nearest_centroid(std::span<const double> x, const FeatureMatrix& centroids);

// ------------------------------------------------------------- regressors

/// Pluggable regressor over real feature vectors.
class Regressor {
public:
    virtual ~Regressor() = default;
    virtual void fit(const FeatureMatrix& x, std::span<const double> y) = 0;
    virtual double predict(std::span<const double> x) const = 0;
    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

using RegressorFactory = std::function<std::unique_ptr<Regressor>()>;

/// Depth-1 regression tree: x[feature] <= threshold ? left : right.
/// feature < 0 means a constant stump that always returns `left`.
struct Stump {
    int feature = -1;
    double threshold = 0.0;
    double left = 0.0;
    double right = 0.0;
    /// Reduction of the residual sum of squares achieved by the split.
    double gain = 0.0;

    double operator()(std::span<const double> x) const {
        if (feature < 0)
            return left;
        return x[static_cast<std::size_t>(feature)] <= threshold ? left : right;
    }
};

/// Per-feature ascending row orders, shared across boosting rounds.
using SortedColumns = std::vector<std::vector<std::size_t>>;
SortedColumns sort_columns(const FeatureMatrix& x);

/// Least-squares best stump for `residuals`. The serial version scans
/// features in order; the parallel one scans features concurrently and
/// reduces with the same tie-break (larger gain, then lower feature index).
Stump best_stump_serial(const FeatureMatrix& x, const SortedColumns& order, std::span<const double> residuals);
Stump best_stump_parallel(const FeatureMatrix& x, const SortedColumns& order, std::span<const double> residuals);

struct BoostingConfig {
    int rounds = 100;
    double learning_rate = 0.1;
    Exec exec = Exec::Parallel;
};

/// Gradient boosting of regression stumps under squared loss, starting from
/// the target mean.
class StumpBooster final : public Regressor {
public:
    explicit StumpBooster(BoostingConfig cfg = {}) : cfg_(cfg) {}

    void fit(const FeatureMatrix& x, std::span<const double> y) override;
    double predict(std::span<const double> x) const override;
    std::string kind() const override { return "stumps"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<StumpBooster> from_json(const nlohmann::json& j);

    /// Training mean squared error before the first round and after each one.
    const std::vector<double>& training_mse() const noexcept { return mse_history_; }
    const std::vector<Stump>& stumps() const noexcept { return stumps_; }
    double base() const noexcept { return base_; }

private:
    BoostingConfig cfg_;
    double base_ = 0.0;
    std::vector<Stump> stumps_; // leaf values already scaled by the learning rate
    std::vector<double> mse_history_;
};

// ------------------------------------------------------------------ model

struct PredictorConfig {
    std::size_t prefix_len = 8;
    PrefixPadding padding = PrefixPadding::Leading;
    std::size_t k = 3;
    std::uint64_t seed = 42;
    int kmeans_max_iterations = 100;
    int kmeans_restarts = 10;
    BoostingConfig boosting{};
    /// Buckets with fewer samples predict the global training mean.
    std::size_t min_bucket_size = 5;
    Exec exec = Exec::Parallel;
};

/// Cluster-bucketed remaining-time model. Buckets are k-means clusters of
/// standardized prefix encodings; each bucket has its own regressor.
class PredictionModel {
public:
    std::size_t feature_length() const noexcept { return mean_.size(); }
    std::size_t bucket_count() const noexcept { return centroids_.rows(); }
    std::size_t bucket_of(std::span<const double> features) const;
    bool bucket_has_regressor(std::size_t b) const { return regressors_.at(b) != nullptr; }
    double global_mean() const noexcept { return global_mean_; }
    const PredictorConfig& config() const noexcept { return config_; }

    std::string to_json() const;
    static PredictionModel from_json(const std::string& text);

private:
    friend PredictionModel train(const std::vector<PrefixSample>&, const PredictorConfig&, const RegressorFactory&);
    friend double predict(const PredictionModel&, const PrefixSample&);

    std::vector<double> standardize(std::span<const double> x) const;

    PredictorConfig config_;
    std::vector<double> mean_, scale_;
    FeatureMatrix centroids_;
    std::vector<std::shared_ptr<const Regressor>> regressors_;
    double global_mean_ = 0.0;
};

RegressorFactory default_regressor_factory(const BoostingConfig& cfg = {});

PredictionModel train(const std::vector<PrefixSample>& samples, const PredictorConfig& config,
                      const RegressorFactory& factory);
PredictionModel train(const std::vector<PrefixSample>& samples, const PredictorConfig& config = {});

/// Remaining-time estimate in seconds, never negative.
double predict(const PredictionModel& model, const PrefixSample& sample);

double mae(std::span<const double> predictions, std::span<const double> actuals);

/// Trains on `train` at `point` and returns the test MAE. With `base`, the
/// activity coding extends that dictionary instead of starting afresh, so a
/// folded log keeps the ids of the activities it shares with the original.
struct PointEvaluation {
    double mae = 0.0;
    std::size_t train_samples = 0;
    std::size_t test_samples = 0;
};
PointEvaluation evaluate_point(const EventLog& train_log, const EventLog& test_log, const std::string& point,
                               const PredictorConfig& config, const ActivityDictionary* base = nullptr);

} // namespace logfold
