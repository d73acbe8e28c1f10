#pragma once

#include <functional>
#include <vector>

#include "spamlab/common.hpp"

namespace spamlab {

/// Differentiable objective. `value_and_grad` writes the gradient into its
/// second argument (pre-sized to `dimension`) and returns the value.
struct SmoothProblem {
    int dimension = 0;
    std::function<double(const std::vector<double>&, std::vector<double>&)> value_and_grad;
};

enum class OptStatus { Converged, IterCap, LineSearchFail };

struct OptResult {
    std::vector<double> minimizer;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    OptStatus status = OptStatus::IterCap;
};

struct LbfgsOptions {
    int memory = 10;
    int max_iter = 100;
    double grad_tol = 1e-5;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int max_line_search = 50;
};

OptResult lbfgs_minimize(const SmoothProblem& problem, std::vector<double> x0,
                         const LbfgsOptions& opts = {});

/// Central differences, (f(x+h e_i) - f(x-h e_i)) / (2h).
std::vector<double> finite_diff_gradient(const std::function<double(const std::vector<double>&)>& f,
                                         const std::vector<double>& x, double h);

}  // namespace spamlab
