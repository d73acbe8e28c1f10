#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spamlab/gradient_models.hpp"

using namespace spamlab;

namespace {

struct Dataset {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
};

Dataset random_dataset(Rng& rng, size_t n, size_t dim) {
    Dataset d;
    d.X.assign(n, std::vector<double>(dim));
    for (size_t i = 0; i < n; ++i) {
        for (auto& v : d.X[i]) v = rng.next_in(-2.0, 2.0);
        d.y.push_back(static_cast<int>(rng.next_below(2)));
    }
    return d;
}

double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i] + b[i] * b[i];
    }
    return std::sqrt(num) / std::max(1e-12, std::sqrt(den));
}

// brute-force optimum of the two-parameter logistic objective
std::vector<double> grid_logreg_1d(const std::vector<std::vector<double>>& X,
                                   const std::vector<int>& y, double l2) {
    double b0 = 0.0, w0 = 0.0, radius = 8.0;
    std::vector<double> grad;
    for (int round = 0; round < 12; ++round) {
        double best = std::numeric_limits<double>::infinity(), bb = b0, bw = w0;
        const int steps = 40;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                const double b = b0 - radius + 2.0 * radius * i / steps;
                const double w = w0 - radius + 2.0 * radius * j / steps;
                const double v = logreg_objective({b, w}, X, y, l2, grad);
                if (v < best) {
                    best = v;
                    bb = b;
                    bw = w;
                }
            }
        }
        b0 = bb;
        w0 = bw;
        radius *= 0.2;
    }
    return {b0, w0};
}

}  // namespace

TEST_CASE("logistic objective gradient matches finite differences") {
    Rng rng(1234);
    const Dataset d = random_dataset(rng, 12, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> theta(4);
        for (auto& v : theta) v = rng.next_in(-1.5, 1.5);
        std::vector<double> analytic;
        logreg_objective(theta, d.X, d.y, 0.7, analytic);
        const auto numeric = finite_diff_gradient(
            [&](const std::vector<double>& t) {
                std::vector<double> g;
                return logreg_objective(t, d.X, d.y, 0.7, g);
            },
            theta, 1e-6);
        CHECK(rel_error(analytic, numeric) < 1e-5);
    }
}

TEST_CASE("logistic objective does not penalize the intercept") {
    const Dataset d = {{{1.0}, {-1.0}}, {1, 0}};
    std::vector<double> g0, g1;
    const double v0 = logreg_objective({3.0, 0.0}, d.X, d.y, 0.0, g0);
    const double v1 = logreg_objective({3.0, 0.0}, d.X, d.y, 100.0, g1);
    CHECK(v0 == doctest::Approx(v1));  // zero weights, so the penalty adds nothing
    CHECK(g0[0] == doctest::Approx(g1[0]));

    std::vector<double> g2, g3;
    const double w0 = logreg_objective({0.0, 2.0}, d.X, d.y, 0.0, g2);
    const double w1 = logreg_objective({0.0, 2.0}, d.X, d.y, 1.0, g3);
    CHECK(w1 == doctest::Approx(w0 + 0.5 * 4.0));
    CHECK(g3[1] == doctest::Approx(g2[1] + 2.0));
}

TEST_CASE("logistic fit matches a grid oracle on one feature") {
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        Dataset d;
        for (int i = 0; i < 16; ++i) {
            const double x = rng.next_in(-2.0, 2.0);
            d.X.push_back({x});
            // noisy threshold rule keeps the optimum finite even without a penalty
            d.y.push_back(rng.next_double() < 1.0 / (1.0 + std::exp(-3.0 * x)) ? 1 : 0);
        }
        const double l2 = 0.5;
        const LogRegModel m = logreg_fit(d.X, d.y, l2, 200);
        const auto oracle = grid_logreg_1d(d.X, d.y, l2);
        CHECK(m.intercept == doctest::Approx(oracle[0]).epsilon(1e-3));
        CHECK(m.weights[0] == doctest::Approx(oracle[1]).epsilon(1e-3));
    }
}

TEST_CASE("logistic fit on symmetric data has a zero intercept") {
    // labels flip with the sign of x; the data is invariant under (x, y) -> (-x, 1-y)
    const Dataset d = {{{1.0}, {-1.0}, {2.0}, {-2.0}}, {1, 0, 1, 0}};
    const LogRegModel m = logreg_fit(d.X, d.y, 1.0, 100);
    CHECK(m.intercept == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.weights[0] > 0.0);
}

TEST_CASE("logistic probabilities match closed forms") {
    LogRegModel m;
    m.intercept = 0.0;
    m.weights = {1.0};
    CHECK(logreg_proba(m, {0.0}) == doctest::Approx(0.5));
    CHECK(logreg_proba(m, {std::log(3.0)}) == doctest::Approx(0.75));
    CHECK(logreg_proba(m, {40.0}) == doctest::Approx(1.0));
    CHECK(logreg_proba(m, {-40.0}) == doctest::Approx(0.0));
}

TEST_CASE("regularized logistic weights stay finite on separable data") {
    Dataset d;
    for (int i = 0; i < 10; ++i) {
        d.X.push_back({i < 5 ? -1.0 - i : 1.0 + i});
        d.y.push_back(i < 5 ? 0 : 1);
    }
    const LogRegModel m = logreg_fit(d.X, d.y, 1.0, 500);
    CHECK(std::isfinite(m.intercept));
    CHECK(std::isfinite(m.weights[0]));
    CHECK(std::abs(m.weights[0]) < 50.0);
    for (size_t i = 0; i < d.X.size(); ++i) {
        CHECK(((logreg_proba(m, d.X[i]) > 0.5) == (d.y[i] == 1)));
    }
}

TEST_CASE("mlp loss gradient matches finite differences") {
    Rng rng(777);
    const Dataset d = random_dataset(rng, 8, 3);
    MlpNetwork net;
    net.layer_sizes = {3, 4, 1};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> params(net.param_count());
        for (auto& v : params) v = rng.next_in(-0.8, 0.8);
        std::vector<double> analytic;
        net.loss_and_grad(params, d.X, d.y, 0.3, analytic);
        const auto numeric = finite_diff_gradient(
            [&](const std::vector<double>& p) {
                std::vector<double> g;
                return net.loss_and_grad(p, d.X, d.y, 0.3, g);
            },
            params, 1e-6);
        CHECK(rel_error(analytic, numeric) < 1e-5);
    }
}

TEST_CASE("mlp gradient check holds with two hidden layers") {
    Rng rng(778);
    const Dataset d = random_dataset(rng, 6, 2);
    MlpNetwork net;
    net.layer_sizes = {2, 3, 3, 1};
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> params(net.param_count());
        for (auto& v : params) v = rng.next_in(-0.8, 0.8);
        std::vector<double> analytic;
        net.loss_and_grad(params, d.X, d.y, 0.0, analytic);
        const auto numeric = finite_diff_gradient(
            [&](const std::vector<double>& p) {
                std::vector<double> g;
                return net.loss_and_grad(p, d.X, d.y, 0.0, g);
            },
            params, 1e-6);
        CHECK(rel_error(analytic, numeric) < 1e-5);
    }
}

TEST_CASE("mlp with zeroed parameters outputs one half") {
    MlpNetwork net;
    net.layer_sizes = {3, 4, 1};
    const std::vector<double> zeros(net.param_count(), 0.0);
    CHECK(net.forward(zeros, {1.0, -2.0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("mlp output is monotone in the output bias") {
    Rng rng(5);
    MlpNetwork net;
    net.layer_sizes = {2, 3, 1};
    std::vector<double> params = net.init_params(rng);
    const std::vector<double> x = {0.7, -0.4};
    const double base = net.forward(params, x);
    params.back() += 1.0;  // final entry is the output bias
    CHECK(net.forward(params, x) > base);
}

TEST_CASE("mlp learns xor") {
    const Dataset d = {{{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1}};
    bool solved = false;
    for (uint64_t seed = 0; seed < 10 && !solved; ++seed) {
        const MlpModel m = mlp_fit(d.X, d.y, {4}, 2000, 1e-5, seed);
        bool all = true;
        for (size_t i = 0; i < d.X.size(); ++i) {
            all = all && ((mlp_proba(m, d.X[i]) > 0.5) == (d.y[i] == 1));
        }
        solved = all;
    }
    CHECK(solved);
}

TEST_CASE("mlp with no hidden layers decides like logistic regression") {
    Rng rng(909);
    Dataset d;
    for (int i = 0; i < 40; ++i) {
        const double x0 = rng.next_in(-2.0, 2.0), x1 = rng.next_in(-2.0, 2.0);
        d.X.push_back({x0, x1});
        d.y.push_back(x0 + x1 > 0.0 ? 1 : 0);
    }
    const MlpModel mlp = mlp_fit(d.X, d.y, {}, 500, 1e-4, 3);
    const LogRegModel lr = logreg_fit(d.X, d.y, 1e-4, 500);
    for (int probe = 0; probe < 50; ++probe) {
        const std::vector<double> q = {rng.next_in(-2.0, 2.0), rng.next_in(-2.0, 2.0)};
        if (std::abs(q[0] + q[1]) < 0.2) continue;  // skip the decision boundary
        CHECK(((mlp_proba(mlp, q) > 0.5) == (logreg_proba(lr, q) > 0.5)));
    }
}

TEST_CASE("trained wrappers threshold probabilities at one half") {
    FeatureMatrix X;
    for (int i = 0; i < 20; ++i) {
        X.counts.push_back({static_cast<uint32_t>(i < 10 ? 5 + i % 3 : 0),
                            static_cast<uint32_t>(i < 10 ? 0 : 5 + i % 3)});
        X.labels.push_back(i < 10 ? Label::Ham : Label::Spam);
        X.row_ids.push_back("d" + std::to_string(i));
    }
    for (auto kind : {ModelKind::LogReg, ModelKind::Mlp}) {
        const ClassifierSpec spec = ClassifierSpec::defaults(kind, 9);
        const auto model = kind == ModelKind::LogReg ? fit_logreg(spec, X) : fit_mlp(spec, X);
        CHECK(model->threshold() == 0.5);
        const auto preds = model->predict(X);
        CHECK(preds == X.labels);
        for (double s : model->decision_scores(X)) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}
