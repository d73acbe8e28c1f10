#pragma once

#include "spamlab/models.hpp"
#include "spamlab/numopt.hpp"

namespace spamlab {

struct LogRegModel {
    double intercept = 0.0;
    std::vector<double> weights;
    double l2 = 1.0;
};

/// Penalized negative log-likelihood; theta = [intercept, weights...],
/// y in {0,1}. Writes the analytic gradient and returns the value.
double logreg_objective(const std::vector<double>& theta, const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y, double l2, std::vector<double>& grad);

LogRegModel logreg_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       double l2, int max_iter);

double logreg_proba(const LogRegModel& model, const std::vector<double>& x);

/// Feed-forward net with rectifier hidden layers and a logistic output.
/// Parameters live in one flat vector ordered layer by layer
/// (weights row-major, then biases).
struct MlpNetwork {
    std::vector<int> layer_sizes;  // input, hidden..., 1

    size_t param_count() const;
    std::vector<double> init_params(Rng& rng) const;

    double forward(const std::vector<double>& params, const std::vector<double>& x) const;

    /// Cross-entropy plus (l2/2)*||W||^2 (weights only); analytic backprop
    /// gradient written into `grad`.
    double loss_and_grad(const std::vector<double>& params, const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, double l2, std::vector<double>& grad) const;
};

struct MlpModel {
    MlpNetwork net;
    std::vector<double> params;
};

MlpModel mlp_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                 const std::vector<int>& hidden, int max_iter, double l2, uint64_t seed);

double mlp_proba(const MlpModel& model, const std::vector<double>& x);

std::unique_ptr<TrainedModel> fit_logreg(const ClassifierSpec& spec, const FeatureMatrix& X);
std::unique_ptr<TrainedModel> fit_mlp(const ClassifierSpec& spec, const FeatureMatrix& X);

}  // namespace spamlab
