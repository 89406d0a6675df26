#include "logfold/error.hpp"
#include "logfold/predictor.hpp"
#include "logfold/synthetic.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace logfold;

namespace {

std::vector<PrefixSample> two_clusters(std::size_t per_cluster, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<PrefixSample> out;
    for (std::size_t i = 0; i < 2 * per_cluster; ++i) {
        const bool far = i % 2 == 1;
        const double c = far ? 100.0 : 0.0;
        out.push_back({{c + noise(rng), c + noise(rng)}, far ? 10000.0 : 100.0, "c" + std::to_string(i)});
    }
    return out;
}

class ConstantRegressor final : public Regressor {
public:
    explicit ConstantRegressor(double v) : v_(v) {}
    void fit(const FeatureMatrix&, std::span<const double>) override {}
    double predict(std::span<const double>) const override { return v_; }
    std::string kind() const override { return "constant"; }
    nlohmann::json to_json() const override { return {{"value", v_}}; }

private:
    double v_;
};

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    FeatureMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = u(rng);
    return m;
}

} // namespace

TEST_CASE("prefix encoding of a short trace") {
    const EventLog log = make_log({{{"A", 0}, {"B", 60}, {"D", 100}}});
    const ActivityDictionary dict(log);
    CHECK(dict.encode("A") == 1.0);
    CHECK(dict.encode("B") == 2.0);
    CHECK(dict.encode("D") == 3.0);
    CHECK(dict.encode("unseen") == 4.0);

    const auto trailing = extract_prefixes(log, "B", 4, dict, PrefixPadding::Trailing);
    REQUIRE(trailing.size() == 1);
    CHECK(trailing[0].features == std::vector<double>{1, 0, 2, 60, 0, 0, 0, 0});
    CHECK(trailing[0].target == 40.0);
    CHECK(trailing[0].case_id == "c1");

    const auto leading = extract_prefixes(log, "B", 4, dict, PrefixPadding::Leading);
    CHECK(leading[0].features == std::vector<double>{0, 0, 0, 0, 1, 0, 2, 60});

    CHECK(extract_prefixes(log, "D", 4, dict)[0].target == 0.0);
    CHECK(extract_prefixes(log, "A", 1, dict)[0].features == std::vector<double>{1, 0});
    // window keeps the last events of a long prefix
    CHECK(extract_prefixes(log, "D", 1, dict)[0].features == std::vector<double>{3, 40});
    CHECK_THROWS_AS(extract_prefixes(log, "Z", 4, dict), NotApplicableError);
    CHECK_THROWS_AS(extract_prefixes(log, "B", 0, dict), ArgumentError);
    CHECK(prefix_padding_from_string(to_string(PrefixPadding::Leading)) == PrefixPadding::Leading);
    CHECK_THROWS_AS(prefix_padding_from_string("middle"), ConfigError);
}

TEST_CASE("dictionary extension keeps existing ids") {
    const ActivityDictionary base(std::vector<std::string>{"b", "d"});
    const ActivityDictionary ext = base.extended(make_log({{{"a", 0}, {"d", 1}, {"c", 2}}}));
    CHECK(ext.encode("b") == 1.0);
    CHECK(ext.encode("d") == 2.0);
    CHECK(ext.encode("a") == 3.0);
    CHECK(ext.encode("c") == 4.0);
}

TEST_CASE("one sample per trace containing the point") {
    SyntheticSpec spec;
    spec.cases = 100;
    const EventLog log = generate_synthetic(spec, 7);
    const std::string point = "IV Antibiotics";
    std::size_t containing = 0;
    for (const auto& t : log.traces())
        containing += std::any_of(t.events.begin(), t.events.end(), [&](const Event& e) { return e.activity == point; });
    const auto samples = extract_prefixes(log, point, 8, ActivityDictionary(log));
    CHECK(samples.size() == containing);
    for (const auto& s : samples) {
        CHECK(s.features.size() == 16);
        CHECK(s.target >= 0.0);
    }
}

TEST_CASE("mean absolute error") {
    CHECK(mae(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 0}) == 2.0);
    CHECK(mae(std::vector<double>{-10}, std::vector<double>{10}) == 20.0);
    CHECK(mae(std::vector<double>{5, 6}, std::vector<double>{5, 6}) == 0.0);
    CHECK_THROWS_AS(mae(std::vector<double>{1}, std::vector<double>{1, 2}), ArgumentError);
    CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}), ArgumentError);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int round = 0; round < 100; ++round) {
        std::vector<double> a(1 + rng() % 20), b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        CHECK(mae(a, b) == doctest::Approx(oracle::mae(a, b)));
        CHECK(mae(a, b) == mae(b, a));
        CHECK(mae(a, b) > 0.0);
    }
}

TEST_CASE("constant targets give a constant model") {
    std::vector<PrefixSample> s;
    for (int i = 0; i < 30; ++i)
        s.push_back({{double(i % 7), double(i)}, 3600.0, "c"});
    const PredictionModel m = train(s);
    for (const auto& x : s)
        CHECK(predict(m, x) == doctest::Approx(3600.0));
    CHECK(predict(m, PrefixSample{{1000.0, -5.0}, 0.0, "new"}) == doctest::Approx(3600.0));
    CHECK_THROWS_AS(predict(m, PrefixSample{{1.0}, 0.0, "short"}), ArgumentError);
}

TEST_CASE("two separated clusters are bucketed apart") {
    const auto s = two_clusters(50, 1);
    PredictorConfig cfg;
    cfg.k = 2;
    const PredictionModel m = train(s, cfg);
    std::vector<double> pred, actual, mean_pred;
    double mean = 0.0;
    for (const auto& x : s)
        mean += x.target / static_cast<double>(s.size());
    for (const auto& x : s) {
        pred.push_back(predict(m, x));
        actual.push_back(x.target);
        mean_pred.push_back(mean);
    }
    CHECK(m.bucket_of(s[0].features) != m.bucket_of(s[1].features));
    CHECK(mae(pred, actual) < 0.01 * mae(mean_pred, actual));
    CHECK_THROWS_AS(train(two_clusters(1, 1), PredictorConfig{.k = 3}), ConfigError);
}

TEST_CASE("k = 1 is one global regressor") {
    const auto s = two_clusters(40, 2);
    PredictorConfig cfg;
    cfg.k = 1;
    const PredictionModel m = train(s, cfg);
    CHECK(m.bucket_count() == 1);
    StumpBooster direct(cfg.boosting);
    const FeatureMatrix x = FeatureMatrix::from_samples(s);
    std::vector<double> y;
    for (const auto& v : s)
        y.push_back(v.target);
    direct.fit(x, y);
    for (const auto& v : s)
        CHECK(predict(m, v) == doctest::Approx(direct.predict(v.features)).epsilon(1e-9));
}

TEST_CASE("predictions are clamped at zero") {
    auto s = two_clusters(20, 3);
    PredictorConfig cfg;
    cfg.k = 1;
    const PredictionModel m = train(s, cfg, [] { return std::make_unique<ConstantRegressor>(-50.0); });
    CHECK(predict(m, s[0]) == 0.0);
}

TEST_CASE("k-means objective never increases") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        const FeatureMatrix pts = random_matrix(rng, 30 + rng() % 100, 1 + rng() % 5);
        const auto r = kmeans(pts, 1 + rng() % 5, rng());
        REQUIRE(!r.wcss_history.empty());
        for (std::size_t i = 1; i < r.wcss_history.size(); ++i)
            CHECK(r.wcss_history[i] <= r.wcss_history[i - 1] + 1e-9);
        const auto best = kmeans_best_of(pts, 3, 5, 4);
        for (int s = 0; s < 4; ++s)
            CHECK(best.wcss_history.back() <= kmeans(pts, 3, 5 + s).wcss_history.back());
    }
}

TEST_CASE("boosting training loss never increases") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 10; ++round) {
        const FeatureMatrix x = random_matrix(rng, 50 + rng() % 100, 1 + rng() % 6);
        std::vector<double> y(x.rows());
        std::uniform_real_distribution<double> u(0, 1000);
        for (auto& v : y)
            v = u(rng);
        StumpBooster b(BoostingConfig{40, 0.2, Exec::Serial});
        b.fit(x, y);
        const auto& h = b.training_mse();
        REQUIRE(h.size() == 41);
        for (std::size_t i = 1; i < h.size(); ++i)
            CHECK(h[i] <= h[i - 1] + 1e-9);
    }
}

TEST_CASE("serial and parallel kernels agree") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 10; ++round) {
        const FeatureMatrix pts = random_matrix(rng, 200 + rng() % 300, 2 + rng() % 8);
        const FeatureMatrix cents = random_matrix(rng, 4, pts.cols());
        std::vector<std::size_t> a, b;
        CHECK(kmeans_assign_serial(pts, cents, a) == doctest::Approx(kmeans_assign_parallel(pts, cents, b)));
        CHECK(a == b);

        std::vector<double> res(pts.rows());
        for (std::size_t i = 0; i < res.size(); ++i)
            res[i] = pts(i, 0) * 3 + static_cast<double>(rng() % 10);
        const auto order = sort_columns(pts);
        const Stump s = best_stump_serial(pts, order, res);
        const Stump p = best_stump_parallel(pts, order, res);
        CHECK(s.feature == p.feature);
        CHECK(s.threshold == p.threshold);
        CHECK(s.left == p.left);
        CHECK(s.right == p.right);

        const auto ks = kmeans(pts, 3, 9, 100, Exec::Serial);
        const auto kp = kmeans(pts, 3, 9, 100, Exec::Parallel);
        CHECK(ks.assignment == kp.assignment);
    }
}

TEST_CASE("training is deterministic and survives a JSON round trip") {
    SyntheticSpec spec;
    spec.cases = 150;
    const EventLog log = generate_synthetic(spec, 9);
    const auto samples = extract_prefixes(log, "CRP", 8, ActivityDictionary(log), PrefixPadding::Leading);
    const PredictionModel a = train(samples);
    const PredictionModel b = train(samples);
    CHECK(a.to_json() == b.to_json());
    const PredictionModel c = PredictionModel::from_json(a.to_json());
    CHECK(c.to_json() == a.to_json());
    CHECK(c.config().kmeans_restarts == a.config().kmeans_restarts);
    CHECK(c.config().padding == PrefixPadding::Leading);
    for (const auto& s : samples) {
        CHECK(predict(a, s) == predict(b, s));
        CHECK(predict(a, s) == predict(c, s));
    }
    CHECK_THROWS_AS(PredictionModel::from_json("{\"nonsense\": 1}"), SchemaError);
}

TEST_CASE("evaluate_point reports sample counts") {
    SyntheticSpec spec;
    spec.cases = 200;
    const EventLog log = generate_synthetic(spec, 10);
    const auto [tr, te] = temporal_split(log, 0.8);
    const auto ev = evaluate_point(tr, te, "CRP", PredictorConfig{});
    CHECK(ev.train_samples > 0);
    CHECK(ev.test_samples > 0);
    CHECK(ev.mae > 0.0);
}
