#pragma once

#include "spamlab/models.hpp"

namespace spamlab {

/// Kernel value for two equal-length vectors.
///   Linear: u.v   Poly: (u.v + 1)^d   Sigmoid: tanh(u.v + r)
///   Rbf: exp(-gamma ||u-v||^2), gamma = 1/(2 sigma^2)
double kernel_eval(const KernelSpec& spec, const std::vector<double>& u, const std::vector<double>& v);

/// Dual solution of the soft-margin SVM. Only points with alpha > 0 are kept.
struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alpha;    // dual weights, 0 < alpha_i <= c
    std::vector<int> labels;      // +1 spam / -1 ham per support vector
    double bias = 0.0;
    KernelSpec kernel;
    double c = 1.0;

    /// Dual objective value sum(alpha) - 1/2 sum alpha_i alpha_j y_i y_j K_ij.
    double dual_objective() const;
};

/// SMO over the soft-margin dual. One epoch = one full pass over the
/// training points; stops when the largest KKT violation drops below
/// kkt_tol or after epoch_cap epochs.
SvmModel smo_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                 const KernelSpec& kernel, double c, int epoch_cap, double kkt_tol);

double svm_decision(const SvmModel& model, const std::vector<double>& x);

std::unique_ptr<TrainedModel> fit_svm(const ClassifierSpec& spec, const FeatureMatrix& X);

}  // namespace spamlab
