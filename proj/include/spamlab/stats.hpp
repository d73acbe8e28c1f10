#pragma once

#include <string>
#include <vector>

#include "spamlab/common.hpp"

namespace spamlab {

struct PairedSamples {
    std::string model_a, model_b;
    std::vector<double> scores_a, scores_b;  // paired by repeat index
};

struct TTestResult {
    std::string model_a, model_b;
    double t_statistic = 0.0;  // +/- infinity when the differences have zero variance
    int degrees_of_freedom = 0;
    double p_two_sided = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;  // p_adjusted < 0.05
};

/// Regularized incomplete beta I_x(a, b) by continued fraction; absolute
/// error below 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

/// Paired t-test on the per-repeat differences. Zero-variance nonzero-mean
/// differences give infinite t and p = 0; all-zero differences give t = 0
/// and p = 1. Bonferroni factor applied as p_adjusted = min(1, p * m).
TTestResult paired_ttest(const PairedSamples& samples, int bonferroni_m = 1);

struct SignificanceMatrix {
    std::vector<std::string> models;
    std::vector<TTestResult> pairs;  // all C(M,2) pairs, a-index < b-index
    int bonferroni_m = 0;
};

/// All pairwise tests over per-model per-repeat score lists, Bonferroni
/// m = C(M,2).
SignificanceMatrix compare_all(const std::vector<std::string>& models,
                               const std::vector<std::vector<double>>& scores);

/// CSV rows: model_a,model_b,t,df,p_raw,p_adjusted,significant.
std::string significance_to_csv(const SignificanceMatrix& matrix);

}  // namespace spamlab
