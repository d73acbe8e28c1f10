#include "spamlab/numopt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace spamlab {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

bool finite(double v) { return std::isfinite(v); }

bool finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Eval {
    double value;
    std::vector<double> grad;
    bool ok;
};

}  // namespace

OptResult lbfgs_minimize(const SmoothProblem& problem, std::vector<double> x0,
                         const LbfgsOptions& opts) {
    const int n = problem.dimension;
    if (static_cast<int>(x0.size()) != n) throw InvalidArgument("lbfgs: x0 dimension mismatch");
    if (opts.memory < 1) throw InvalidArgument("lbfgs: memory must be >= 1");

    auto evaluate = [&](const std::vector<double>& x) -> Eval {
        Eval e;
        e.grad.assign(n, 0.0);
        e.value = problem.value_and_grad(x, e.grad);
        e.ok = finite(e.value) && finite(e.grad);
        return e;
    };

    std::vector<double> x = std::move(x0);
    Eval cur = evaluate(x);
    if (!cur.ok) throw NumericError("lbfgs: non-finite objective or gradient at the starting point");

    OptResult result;
    result.minimizer = x;
    result.value = cur.value;
    result.gradient_norm = norm2(cur.grad);
    result.status = OptStatus::IterCap;

    if (result.gradient_norm <= opts.grad_tol) {
        result.status = OptStatus::Converged;
        return result;
    }

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        // two-loop recursion
        std::vector<double> d = cur.grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], d);
            for (int j = 0; j < n; ++j) d[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            double gamma = dot(s, y) / dot(y, y);
            for (auto& v : d) v *= gamma;
        }
        for (size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * dot(y_hist[i], d);
            for (int j = 0; j < n; ++j) d[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (auto& v : d) v = -v;

        double dphi0 = dot(cur.grad, d);
        if (dphi0 >= 0) {
            // fall back to steepest descent when the model direction fails
            d = cur.grad;
            for (auto& v : d) v = -v;
            dphi0 = dot(cur.grad, d);
        }

        // strong Wolfe line search (bracket + zoom)
        const double phi0 = cur.value;
        auto eval_at = [&](double a, std::vector<double>& xt) -> Eval {
            xt = x;
            for (int j = 0; j < n; ++j) xt[j] += a * d[j];
            return evaluate(xt);
        };

        double a_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
        double a = 1.0;
        double lo = -1.0, hi = -1.0, phi_lo = 0.0, dphi_lo = 0.0;
        bool bracketed = false, accepted = false;
        std::vector<double> xt;
        Eval et;
        int ls = 0;
        for (; ls < opts.max_line_search; ++ls) {
            et = eval_at(a, xt);
            const bool bad = !et.ok;
            if (bad || et.value > phi0 + opts.wolfe_c1 * a * dphi0 || (ls > 0 && et.value >= phi_prev)) {
                lo = a_prev;
                phi_lo = phi_prev;
                dphi_lo = dphi_prev;
                hi = a;
                bracketed = true;
                break;
            }
            double dphi = dot(et.grad, d);
            if (std::fabs(dphi) <= -opts.wolfe_c2 * dphi0) {
                accepted = true;
                break;
            }
            if (dphi >= 0) {
                lo = a;
                phi_lo = et.value;
                dphi_lo = dphi;
                hi = a_prev;
                bracketed = true;
                break;
            }
            a_prev = a;
            phi_prev = et.value;
            dphi_prev = dphi;
            a *= 2.0;
        }
        if (bracketed && !accepted) {
            for (int z = 0; z < opts.max_line_search && ls < 10 * opts.max_line_search; ++z, ++ls) {
                a = 0.5 * (lo + hi);
                et = eval_at(a, xt);
                if (!et.ok || et.value > phi0 + opts.wolfe_c1 * a * dphi0 || et.value >= phi_lo) {
                    hi = a;
                } else {
                    double dphi = dot(et.grad, d);
                    if (std::fabs(dphi) <= -opts.wolfe_c2 * dphi0) {
                        accepted = true;
                        break;
                    }
                    if (dphi * (hi - lo) >= 0) hi = lo;
                    lo = a;
                    phi_lo = et.value;
                    dphi_lo = dphi;
                }
                if (std::fabs(hi - lo) < 1e-16) break;
            }
            // settle for the best sufficient-decrease point found
            if (!accepted && lo > 0.0) {
                a = lo;
                et = eval_at(a, xt);
                accepted = et.ok && et.value < phi0;
            }
        }

        if (!accepted) {
            result.status = OptStatus::LineSearchFail;
            result.iterations = iter;
            return result;
        }

        std::vector<double> s(n), y(n);
        for (int j = 0; j < n; ++j) {
            s[j] = xt[j] - x[j];
            y[j] = et.grad[j] - cur.grad[j];
        }
        double sy = dot(s, y);
        if (sy > 1e-12) {
            if (static_cast<int>(s_hist.size()) == opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
        }

        x = std::move(xt);
        cur = std::move(et);
        result.minimizer = x;
        result.value = cur.value;
        result.gradient_norm = norm2(cur.grad);
        result.iterations = iter + 1;
        if (result.gradient_norm <= opts.grad_tol) {
            result.status = OptStatus::Converged;
            return result;
        }
    }
    return result;
}

std::vector<double> finite_diff_gradient(const std::function<double(const std::vector<double>&)>& f,
                                         const std::vector<double>& x, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite_diff_gradient: h must be positive");
    std::vector<double> grad(x.size());
    std::vector<double> xt = x;
    for (size_t i = 0; i < x.size(); ++i) {
        xt[i] = x[i] + h;
        double fp = f(xt);
        xt[i] = x[i] - h;
        double fm = f(xt);
        xt[i] = x[i];
        if (!finite(fp) || !finite(fm)) {
            throw NumericError("finite_diff_gradient: non-finite objective evaluation");
        }
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace spamlab
