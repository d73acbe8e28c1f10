#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spamlab/models.hpp"
#include "spamlab/tree_ensembles.hpp"

using namespace spamlab;

namespace {

std::vector<Label> labels_from(const std::vector<int>& y) {
    std::vector<Label> out;
    for (int v : y) out.push_back(v == 1 ? Label::Spam : Label::Ham);
    return out;
}

// mean logistic loss of boosted margins on the training points
double boost_loss(const GbtModel& m, const std::vector<std::vector<double>>& X,
                  const std::vector<int>& y) {
    double loss = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        const double margin = m.margin(X[i]);
        loss += std::log1p(std::exp(-(y[i] == 1 ? 1.0 : -1.0) * margin));
    }
    return loss / X.size();
}

// separable word-count matrix: first half leans on feature 0, second on 1
FeatureMatrix separable_matrix(size_t rows = 40) {
    FeatureMatrix X;
    Rng rng(2468);
    for (size_t i = 0; i < rows; ++i) {
        const bool spam = i >= rows / 2;
        const uint32_t hot = 3 + static_cast<uint32_t>(rng.next_below(4));
        X.counts.push_back({spam ? 0 : hot, spam ? hot : 0,
                            static_cast<uint32_t>(rng.next_below(3))});
        X.labels.push_back(spam ? Label::Spam : Label::Ham);
        X.row_ids.push_back("doc" + std::to_string(i));
    }
    X.dict_fingerprint = 0x1234;
    return X;
}

double fscore_on(const std::vector<Label>& truth, const std::vector<Label>& pred) {
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (pred[i] == Label::Spam && truth[i] == Label::Spam) ++tp;
        if (pred[i] == Label::Spam && truth[i] == Label::Ham) ++fp;
        if (pred[i] == Label::Ham && truth[i] == Label::Spam) ++fn;
    }
    return 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace

TEST_CASE("gini impurity matches hand values") {
    CHECK(gini_impurity(10, 0) == doctest::Approx(0.0));
    CHECK(gini_impurity(0, 7) == doctest::Approx(0.0));
    CHECK(gini_impurity(5, 5) == doctest::Approx(0.5));
    CHECK(gini_impurity(3, 1) == doctest::Approx(0.375));
    CHECK(gini_impurity(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("a single unbootstrapped tree fits separable data perfectly") {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        const bool spam = i >= 15;
        X.push_back({rng.next_in(spam ? 2.0 : -4.0, spam ? 4.0 : 0.0), rng.next_in(-1.0, 1.0)});
        y.push_back(spam ? 1 : 0);
    }
    RfHyper cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    const ForestModel forest = rf_fit(X, labels_from(y), cfg, 5);
    REQUIRE(forest.trees.size() == 1);
    for (size_t i = 0; i < X.size(); ++i) {
        CHECK(forest.trees[0].evaluate(X[i]) == doctest::Approx(y[i]));
    }
}

TEST_CASE("the root split minimizes gini over all thresholds") {
    // one feature, so the random feature subset is always that feature
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<double>> X;
        std::vector<int> y;
        for (int i = 0; i < 16; ++i) {
            X.push_back({rng.next_in(-5.0, 5.0)});
            y.push_back(static_cast<int>(rng.next_below(2)));
        }
        if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) {
            continue;
        }
        RfHyper cfg;
        cfg.n_trees = 1;
        cfg.bootstrap = false;
        const ForestModel forest = rf_fit(X, labels_from(y), cfg, rng.next());
        const auto& root = forest.trees[0].nodes[0];
        if (root.feature < 0) continue;  // pure or unsplittable sample

        // exhaustive enumeration of weighted impurity over every threshold
        auto weighted = [&](double thr) {
            size_t lh = 0, ls = 0, rh = 0, rs = 0;
            for (size_t i = 0; i < X.size(); ++i) {
                if (X[i][0] <= thr) {
                    y[i] == 1 ? ++ls : ++lh;
                } else {
                    y[i] == 1 ? ++rs : ++rh;
                }
            }
            const double nl = lh + ls, nr = rh + rs;
            return (nl * gini_impurity(lh, ls) + nr * gini_impurity(rh, rs)) / X.size();
        };
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : X) {
            for (double eps : {-1e-9, 1e-9}) best = std::min(best, weighted(row[0] + eps));
        }
        CHECK(weighted(root.threshold) == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("forest vote fractions are multiples of one over the tree count") {
    const FeatureMatrix M = separable_matrix();
    std::vector<std::vector<double>> X;
    for (const auto& row : M.counts) X.push_back(std::vector<double>(row.begin(), row.end()));
    RfHyper cfg;  // default 50 trees
    const ForestModel forest = rf_fit(X, M.labels, cfg, 77);
    REQUIRE(forest.trees.size() == 50);
    for (const auto& x : X) {
        const double f = forest.spam_vote_fraction(x) * 50.0;
        CHECK(f == doctest::Approx(std::round(f)).epsilon(1e-12));
    }
}

TEST_CASE("an evenly split forest reports a half vote") {
    DecisionTree spam_leaf, ham_leaf;
    spam_leaf.nodes.push_back({-1, 0.0, -1, -1, 1.0});
    ham_leaf.nodes.push_back({-1, 0.0, -1, -1, 0.0});
    ForestModel forest;
    forest.trees = {spam_leaf, ham_leaf};
    CHECK(forest.spam_vote_fraction({0.0}) == doctest::Approx(0.5));
}

TEST_CASE("a boosted stump matches the hand-derived leaf values") {
    const std::vector<std::vector<double>> X = {{1.0}, {2.0}, {3.0}, {4.0}};
    const std::vector<int> y = {0, 0, 1, 1};
    GbtHyper cfg;
    cfg.rounds = 1;
    cfg.max_depth = 1;
    cfg.lambda = 1.0;
    cfg.gamma = 0.0;
    cfg.eta = 0.3;
    const GbtModel m = gbt_fit(X, labels_from(y), cfg);
    CHECK(m.base_score == doctest::Approx(0.0));
    REQUIRE(m.trees.size() == 1);

    // balanced start: p = 1/2, grad = +-1/2, hess = 1/4 per point
    // left leaf -G/(H + lambda) = 1/(0.5 + 1) = -2/3, right leaf +2/3
    CHECK(m.margin({1.0}) == doctest::Approx(0.3 * -2.0 / 3.0));
    CHECK(m.margin({4.0}) == doctest::Approx(0.3 * 2.0 / 3.0));
    const auto& root = m.trees[0].nodes[0];
    CHECK(root.feature == 0);
    CHECK(root.threshold == doctest::Approx(2.5));
}

TEST_CASE("huge leaf regularization collapses boosting to the base score") {
    const std::vector<std::vector<double>> X = {{1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {6.0}};
    const std::vector<int> y = {0, 0, 0, 1, 1, 1};
    GbtHyper cfg;
    cfg.rounds = 5;
    cfg.lambda = 1e12;
    const GbtModel m = gbt_fit(X, labels_from(y), cfg);
    for (const auto& x : X) CHECK(m.margin(x) == doctest::Approx(m.base_score).epsilon(1e-6));
}

TEST_CASE("training loss is non-increasing in the number of rounds") {
    Rng rng(404);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        const double a = rng.next_in(-2.0, 2.0), b = rng.next_in(-2.0, 2.0);
        X.push_back({a, b});
        y.push_back(a + 0.5 * b + rng.next_in(-0.4, 0.4) > 0 ? 1 : 0);
    }
    double prev = std::numeric_limits<double>::infinity();
    for (int rounds = 1; rounds <= 10; ++rounds) {
        GbtHyper cfg;
        cfg.rounds = rounds;
        cfg.max_depth = 3;
        const double loss = boost_loss(gbt_fit(X, labels_from(y), cfg), X, y);
        CHECK(loss <= prev + 1e-9);
        prev = loss;
    }
}

TEST_CASE("every classifier kind fits the separable matrix well") {
    const FeatureMatrix X = separable_matrix();
    for (ModelKind kind : all_model_kinds()) {
        const std::string kind_name = model_kind_name(kind);
        CAPTURE(kind_name);
        ClassifierSpec spec = ClassifierSpec::defaults(kind, 31);
        const auto model = fit(spec, X);
        const auto pred = model->predict(X);
        CHECK(fscore_on(X.labels, pred) >= 0.9);

        // predictions are exactly the thresholded decision scores
        const auto scores = model->decision_scores(X);
        for (size_t i = 0; i < pred.size(); ++i) {
            CHECK(pred[i] == (scores[i] > model->threshold() ? Label::Spam : Label::Ham));
        }
    }
}

TEST_CASE("refitting with the same seed serializes identically") {
    const FeatureMatrix X = separable_matrix();
    for (ModelKind kind : all_model_kinds()) {
        const std::string kind_name = model_kind_name(kind);
        CAPTURE(kind_name);
        const ClassifierSpec spec = ClassifierSpec::defaults(kind, 7);
        CHECK(fit(spec, X)->to_json() == fit(spec, X)->to_json());
    }
}

TEST_CASE("prediction rejects a mismatched dictionary fingerprint") {
    const FeatureMatrix X = separable_matrix();
    const auto model = fit(ClassifierSpec::defaults(ModelKind::MultinomialNb), X);
    FeatureMatrix other = separable_matrix();
    other.dict_fingerprint = 0x9999;
    CHECK_THROWS_AS(model->predict(other), InvalidArgument);
    CHECK_THROWS_AS(model->decision_scores(other), InvalidArgument);
}

TEST_CASE("fitting rejects empty or single-class training data") {
    FeatureMatrix empty;
    empty.dict_fingerprint = 1;
    FeatureMatrix one_class = separable_matrix();
    for (auto& lbl : one_class.labels) lbl = Label::Ham;
    for (ModelKind kind : {ModelKind::MultinomialNb, ModelKind::SvmLinear, ModelKind::Knn,
                           ModelKind::LogReg, ModelKind::RandomForest, ModelKind::Xgboost}) {
        const std::string kind_name = model_kind_name(kind);
        CAPTURE(kind_name);
        const ClassifierSpec spec = ClassifierSpec::defaults(kind);
        CHECK_THROWS_AS(fit(spec, empty), TrainingError);
        CHECK_THROWS_AS(fit(spec, one_class), TrainingError);
    }
}
