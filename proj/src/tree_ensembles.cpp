#include "spamlab/tree_ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using nlohmann::json;

namespace spamlab {

double gini_impurity(size_t n_ham, size_t n_spam) {
    const size_t n = n_ham + n_spam;
    if (n == 0) return 0.0;
    const double p_ham = static_cast<double>(n_ham) / n;
    const double p_spam = static_cast<double>(n_spam) / n;
    return 1.0 - p_ham * p_ham - p_spam * p_spam;
}

double DecisionTree::evaluate(const std::vector<double>& x) const {
    int id = 0;
    while (nodes[id].feature >= 0) {
        const Node& node = nodes[id];
        id = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[id].value;
}

double ForestModel::spam_vote_fraction(const std::vector<double>& x) const {
    int spam = 0;
    for (const auto& tree : trees) {
        if (tree.evaluate(x) > 0.5) ++spam;
    }
    return static_cast<double>(spam) / static_cast<double>(trees.size());
}

namespace {

struct GiniSplit {
    int feature = -1;
    double threshold = 0.0;
    double decrease = 0.0;
};

// best midpoint threshold over the given candidate features by Gini decrease
GiniSplit best_gini_split(const std::vector<std::vector<double>>& X, const std::vector<Label>& y,
                          const std::vector<size_t>& rows, const std::vector<int>& features) {
    size_t total_spam = 0;
    for (size_t r : rows) total_spam += y[r] == Label::Spam ? 1 : 0;
    const size_t n = rows.size();
    const double parent = gini_impurity(n - total_spam, total_spam);

    GiniSplit best;
    std::vector<std::pair<double, int>> column;  // (value, is_spam)
    column.reserve(n);
    for (int f : features) {
        column.clear();
        for (size_t r : rows) column.push_back({X[r][f], y[r] == Label::Spam ? 1 : 0});
        std::sort(column.begin(), column.end());

        size_t left_n = 0, left_spam = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
            ++left_n;
            left_spam += column[i].second;
            if (column[i].first == column[i + 1].first) continue;

            const size_t right_n = n - left_n;
            const size_t right_spam = total_spam - left_spam;
            const double child =
                (left_n * gini_impurity(left_n - left_spam, left_spam) +
                 right_n * gini_impurity(right_n - right_spam, right_spam)) /
                static_cast<double>(n);
            const double decrease = parent - child;
            if (decrease > best.decrease + 1e-15) {
                best.feature = f;
                best.threshold = 0.5 * (column[i].first + column[i + 1].first);
                best.decrease = decrease;
            }
        }
    }
    return best;
}

struct RfBuilder {
    const std::vector<std::vector<double>>& X;
    const std::vector<Label>& y;
    const RfHyper& cfg;
    Rng& rng;
    int n_candidate_features;
    DecisionTree tree;

    int build(std::vector<size_t> rows) {
        size_t n_spam = 0;
        for (size_t r : rows) n_spam += y[r] == Label::Spam ? 1 : 0;
        const size_t n = rows.size();

        auto leaf = [&](double value) {
            const int id = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({-1, 0.0, -1, -1, value});
            return id;
        };
        // majority vote at the leaf, tie towards ham
        const double vote = n_spam * 2 > n ? 1.0 : 0.0;

        if (n < static_cast<size_t>(cfg.min_split) || n_spam == 0 || n_spam == n) return leaf(vote);

        // sample candidate features without replacement
        const int m = static_cast<int>(X[0].size());
        std::vector<int> all(m);
        std::iota(all.begin(), all.end(), 0);
        rng.shuffle(all);
        all.resize(std::min<size_t>(all.size(), n_candidate_features));
        std::sort(all.begin(), all.end());

        GiniSplit split = best_gini_split(X, y, rows, all);
        if (split.feature < 0) {
            // candidate features were constant here; retry with all features
            std::vector<int> every(m);
            std::iota(every.begin(), every.end(), 0);
            split = best_gini_split(X, y, rows, every);
        }
        if (split.feature < 0) return leaf(vote);

        std::vector<size_t> left_rows, right_rows;
        for (size_t r : rows) {
            (X[r][split.feature] <= split.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({split.feature, split.threshold, -1, -1, 0.0});
        const int left = build(std::move(left_rows));
        const int right = build(std::move(right_rows));
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }
};

}  // namespace

ForestModel rf_fit(const std::vector<std::vector<double>>& X, const std::vector<Label>& y,
                   const RfHyper& cfg, uint64_t seed) {
    if (X.empty() || X.size() != y.size()) throw InvalidArgument("rf_fit: bad training data");
    if (cfg.n_trees < 1) throw InvalidArgument("rf_fit: n_trees must be >= 1");

    const size_t n = X.size();
    const int n_candidates =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(X[0].size()))));

    ForestModel forest;
    forest.trees.reserve(cfg.n_trees);
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng rng = Rng(seed).derive("rf-tree-" + std::to_string(t));
        std::vector<size_t> rows(n);
        if (cfg.bootstrap) {
            for (auto& r : rows) r = rng.next_below(n);
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        RfBuilder builder{X, y, cfg, rng, n_candidates, {}};
        builder.build(std::move(rows));
        forest.trees.push_back(std::move(builder.tree));
    }
    return forest;
}

double GbtModel::margin(const std::vector<double>& x) const {
    double m = base_score;
    for (const auto& tree : trees) m += eta * tree.evaluate(x);
    return m;
}

namespace {

struct GbtBuilder {
    const std::vector<std::vector<double>>& X;
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    const GbtHyper& cfg;
    DecisionTree tree;

    int build(std::vector<size_t> rows, int depth) {
        double g_sum = 0.0, h_sum = 0.0;
        for (size_t r : rows) {
            g_sum += grad[r];
            h_sum += hess[r];
        }

        auto leaf = [&] {
            const int id = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({-1, 0.0, -1, -1, -g_sum / (h_sum + cfg.lambda)});
            return id;
        };
        if (depth >= cfg.max_depth || rows.size() < 2) return leaf();

        const double parent_score = g_sum * g_sum / (h_sum + cfg.lambda);
        int best_feature = -1;
        double best_threshold = 0.0, best_gain = 0.0;

        std::vector<std::pair<double, size_t>> column;
        column.reserve(rows.size());
        const size_t m = X[0].size();
        for (size_t f = 0; f < m; ++f) {
            column.clear();
            for (size_t r : rows) column.push_back({X[r][f], r});
            std::sort(column.begin(), column.end());

            double g_left = 0.0, h_left = 0.0;
            for (size_t i = 0; i + 1 < column.size(); ++i) {
                g_left += grad[column[i].second];
                h_left += hess[column[i].second];
                if (column[i].first == column[i + 1].first) continue;

                const double g_right = g_sum - g_left, h_right = h_sum - h_left;
                const double gain = 0.5 * (g_left * g_left / (h_left + cfg.lambda) +
                                           g_right * g_right / (h_right + cfg.lambda) -
                                           parent_score) -
                                    cfg.gamma;
                if (gain > best_gain + 1e-15) {
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (column[i].first + column[i + 1].first);
                    best_gain = gain;
                }
            }
        }
        if (best_feature < 0) return leaf();

        std::vector<size_t> left_rows, right_rows;
        for (size_t r : rows) {
            (X[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({best_feature, best_threshold, -1, -1, 0.0});
        const int left = build(std::move(left_rows), depth + 1);
        const int right = build(std::move(right_rows), depth + 1);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }
};

}  // namespace

GbtModel gbt_fit(const std::vector<std::vector<double>>& X, const std::vector<Label>& y,
                 const GbtHyper& cfg) {
    if (X.empty() || X.size() != y.size()) throw InvalidArgument("gbt_fit: bad training data");
    const size_t n = X.size();

    GbtModel model;
    model.eta = cfg.eta;
    model.base_score = 0.0;

    std::vector<double> margins(n, model.base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    for (int round = 0; round < cfg.rounds; ++round) {
        for (size_t i = 0; i < n; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-margins[i]));
            grad[i] = p - (y[i] == Label::Spam ? 1.0 : 0.0);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        GbtBuilder builder{X, grad, hess, cfg, {}};
        builder.build(all_rows, 0);
        for (size_t i = 0; i < n; ++i) margins[i] += cfg.eta * builder.tree.evaluate(X[i]);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

namespace {

std::vector<double> to_double(const std::vector<uint32_t>& row) {
    return std::vector<double>(row.begin(), row.end());
}

json tree_to_json(const DecisionTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"value", n.value}});
    }
    return nodes;
}

class RfTrainedModel : public TrainedModel {
public:
    RfTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        const auto& h = std::get<RfHyper>(this->spec().hyper);
        std::vector<std::vector<double>> rows;
        rows.reserve(X.rows());
        for (const auto& row : X.counts) rows.push_back(to_double(row));
        model_ = rf_fit(rows, X.labels, h, this->spec().seed);
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return model_.spam_vote_fraction(to_double(row));
    }

    void serialize_params(json& out) const override {
        json trees = json::array();
        for (const auto& tree : model_.trees) trees.push_back(tree_to_json(tree));
        out["trees"] = std::move(trees);
    }

private:
    ForestModel model_;
};

class GbtTrainedModel : public TrainedModel {
public:
    GbtTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        const auto& h = std::get<GbtHyper>(this->spec().hyper);
        std::vector<std::vector<double>> rows;
        rows.reserve(X.rows());
        for (const auto& row : X.counts) rows.push_back(to_double(row));
        model_ = gbt_fit(rows, X.labels, h);
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return model_.margin(to_double(row));
    }

    void serialize_params(json& out) const override {
        out["base_score"] = model_.base_score;
        out["eta"] = model_.eta;
        json trees = json::array();
        for (const auto& tree : model_.trees) trees.push_back(tree_to_json(tree));
        out["trees"] = std::move(trees);
    }

private:
    GbtModel model_;
};

}  // namespace

std::unique_ptr<TrainedModel> fit_random_forest(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<RfTrainedModel>(spec, X);
}

std::unique_ptr<TrainedModel> fit_gbt(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<GbtTrainedModel>(spec, X);
}

}  // namespace spamlab
