#pragma once

#include "spamlab/models.hpp"

namespace spamlab {

/// Gini impurity of a two-class node given per-class counts.
double gini_impurity(size_t n_ham, size_t n_spam);

/// Axis-aligned binary tree stored as a flat node array. Internal nodes
/// test `value <= threshold`; leaves carry a double payload (class vote
/// fraction for forests, additive output for boosted trees).
struct DecisionTree {
    struct Node {
        int feature = -1;  // -1 = leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        double value = 0.0;
    };

    std::vector<Node> nodes;

    double evaluate(const std::vector<double>& x) const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;

    /// Fraction of trees voting spam.
    double spam_vote_fraction(const std::vector<double>& x) const;
};

/// Random forest of fully grown Gini trees. Each tree draws a bootstrap
/// sample (optional) and considers ceil(sqrt(n_features)) random features
/// per split.
ForestModel rf_fit(const std::vector<std::vector<double>>& X, const std::vector<Label>& y,
                   const RfHyper& cfg, uint64_t seed);

struct GbtModel {
    double base_score = 0.0;  // initial log-odds
    double eta = 0.3;
    std::vector<DecisionTree> trees;

    /// Additive margin (log-odds); positive = spam.
    double margin(const std::vector<double>& x) const;
};

/// Gradient-boosted trees under the logistic loss with second-order split
/// gains, L2 leaf regularization lambda, and split penalty gamma.
GbtModel gbt_fit(const std::vector<std::vector<double>>& X, const std::vector<Label>& y,
                 const GbtHyper& cfg);

std::unique_ptr<TrainedModel> fit_random_forest(const ClassifierSpec& spec, const FeatureMatrix& X);
std::unique_ptr<TrainedModel> fit_gbt(const ClassifierSpec& spec, const FeatureMatrix& X);

}  // namespace spamlab
