#include "spamlab/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spamlab {

namespace {

// continued fraction for the incomplete beta (modified Lentz)
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-14;
    const int max_iter = 500;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw InvalidArgument("incomplete beta: a, b must be positive");
    if (x < 0.0 || x > 1.0) throw InvalidArgument("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    // use the faster-converging side of the symmetry relation
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int df) {
    if (df < 1) throw InvalidArgument("student_t_two_sided_p: df must be >= 1");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

TTestResult paired_ttest(const PairedSamples& samples, int bonferroni_m) {
    const size_t n = samples.scores_a.size();
    if (n != samples.scores_b.size()) throw InvalidArgument("paired_ttest: length mismatch");
    if (n < 2) throw InvalidArgument("paired_ttest: at least two pairs required");
    if (bonferroni_m < 1) throw InvalidArgument("paired_ttest: bonferroni factor must be >= 1");

    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += samples.scores_a[i] - samples.scores_b[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = samples.scores_a[i] - samples.scores_b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);

    TTestResult result;
    result.model_a = samples.model_a;
    result.model_b = samples.model_b;
    result.degrees_of_freedom = static_cast<int>(n) - 1;

    if (var == 0.0) {
        if (mean == 0.0) {
            result.t_statistic = 0.0;
            result.p_two_sided = 1.0;
        } else {
            result.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            result.p_two_sided = 0.0;
        }
    } else {
        result.t_statistic = mean / std::sqrt(var / static_cast<double>(n));
        result.p_two_sided = student_t_two_sided_p(result.t_statistic, result.degrees_of_freedom);
    }
    result.p_adjusted = std::min(1.0, result.p_two_sided * bonferroni_m);
    result.significant = result.p_adjusted < 0.05;
    return result;
}

SignificanceMatrix compare_all(const std::vector<std::string>& models,
                               const std::vector<std::vector<double>>& scores) {
    if (models.size() != scores.size()) throw InvalidArgument("compare_all: length mismatch");
    if (models.size() < 2) throw InvalidArgument("compare_all: at least two models required");

    SignificanceMatrix matrix;
    matrix.models = models;
    const int m = static_cast<int>(models.size() * (models.size() - 1) / 2);
    matrix.bonferroni_m = m;
    for (size_t a = 0; a < models.size(); ++a) {
        for (size_t b = a + 1; b < models.size(); ++b) {
            PairedSamples pair{models[a], models[b], scores[a], scores[b]};
            matrix.pairs.push_back(paired_ttest(pair, m));
        }
    }
    return matrix;
}

std::string significance_to_csv(const SignificanceMatrix& matrix) {
    std::ostringstream out;
    out << "model_a,model_b,t,df,p_raw,p_adjusted,significant\n";
    for (const auto& pair : matrix.pairs) {
        out << pair.model_a << ',' << pair.model_b << ',' << format_double(pair.t_statistic) << ','
            << pair.degrees_of_freedom << ',' << format_double(pair.p_two_sided) << ','
            << format_double(pair.p_adjusted) << ',' << (pair.significant ? "yes" : "no") << '\n';
    }
    return out.str();
}

}  // namespace spamlab
