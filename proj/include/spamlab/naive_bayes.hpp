#pragma once

#include <array>

#include "spamlab/models.hpp"

namespace spamlab {

// Class index convention: 0 = ham, 1 = spam.

/// Multinomial NB with add-one smoothing on word counts.
struct MnbModel {
    std::array<double, 2> log_priors{};
    std::array<std::vector<double>, 2> word_log_probs;  // per class, length N
};

/// Gaussian NB; variances carry an epsilon floor of 1e-9 * max feature variance.
struct GnbModel {
    std::array<double, 2> log_priors{};
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> variance;
};

/// Bernoulli NB over presence indicators, add-one smoothed.
struct BnbModel {
    std::array<double, 2> log_priors{};
    std::array<std::vector<double>, 2> presence_prob;  // in (0,1)
};

MnbModel mnb_fit(const FeatureMatrix& X);
GnbModel gnb_fit(const FeatureMatrix& X);
BnbModel bnb_fit(const FeatureMatrix& X);

/// Per-class log posteriors up to the shared additive constant; [ham, spam].
std::array<double, 2> mnb_score(const MnbModel& m, const std::vector<uint32_t>& x);
std::array<double, 2> gnb_score(const GnbModel& m, const std::vector<uint32_t>& x);
std::array<double, 2> bnb_score(const BnbModel& m, const std::vector<uint32_t>& x);

std::unique_ptr<TrainedModel> fit_naive_bayes(const ClassifierSpec& spec, const FeatureMatrix& X);

}  // namespace spamlab
