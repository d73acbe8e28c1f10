#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "spamlab/stats.hpp"

using namespace spamlab;

namespace {

double t_density(double u, int df) {
    const double v = df;
    const double log_norm =
        std::lgamma((v + 1.0) / 2.0) - std::lgamma(v / 2.0) - 0.5 * std::log(v * M_PI);
    return std::exp(log_norm - (v + 1.0) / 2.0 * std::log1p(u * u / v));
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double sum = f(a) + f(b);
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// numeric oracle: two-sided p as one minus the central probability mass
double quadrature_p(double t, int df) {
    const double a = std::abs(t);
    if (a == 0.0) return 1.0;
    const double central = simpson([df](double u) { return t_density(u, df); }, -a, a, 20000);
    return 1.0 - central;
}

}  // namespace

TEST_CASE("incomplete beta hits closed-form special cases") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == doctest::Approx(0.0));
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == doctest::Approx(1.0));
    // I_x(1, 1) = x and I_x(1, b) = 1 - (1-x)^b
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(regularized_incomplete_beta(1.0, 4.0, 0.25) ==
          doctest::Approx(1.0 - std::pow(0.75, 4.0)).epsilon(1e-10));
    // symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
    CHECK(regularized_incomplete_beta(2.5, 4.5, 0.4) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(4.5, 2.5, 0.6)).epsilon(1e-10));
}

TEST_CASE("two-sided p matches numerical integration of the density") {
    for (int df : {1, 2, 5, 10, 20, 30}) {
        for (double t : {0.1, 0.5, 1.0, 1.7, 2.086, 3.2, 5.0}) {
            CHECK(std::abs(student_t_two_sided_p(t, df) - quadrature_p(t, df)) < 1e-6);
            CHECK(student_t_two_sided_p(-t, df) ==
                  doctest::Approx(student_t_two_sided_p(t, df)).epsilon(1e-12));
        }
    }
}

TEST_CASE("the classic critical value lands on five percent") {
    CHECK(std::abs(student_t_two_sided_p(2.086, 20) - 0.050) < 0.001);
    CHECK(student_t_two_sided_p(0.0, 10) == doctest::Approx(1.0));
    CHECK(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 5) ==
          doctest::Approx(0.0));
}

TEST_CASE("paired t statistic matches the textbook formula") {
    PairedSamples s;
    s.model_a = "a";
    s.model_b = "b";
    s.scores_a = {0.91, 0.88, 0.93, 0.90, 0.87, 0.92};
    s.scores_b = {0.89, 0.85, 0.91, 0.91, 0.84, 0.90};
    const TTestResult r = paired_ttest(s);

    std::vector<double> d;
    for (size_t i = 0; i < s.scores_a.size(); ++i) d.push_back(s.scores_a[i] - s.scores_b[i]);
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= d.size();
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    var /= d.size() - 1;
    const double want = mean / std::sqrt(var / d.size());

    CHECK(r.t_statistic == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.degrees_of_freedom == 5);
    CHECK(r.p_two_sided == doctest::Approx(quadrature_p(want, 5)).epsilon(1e-6));
}

TEST_CASE("swapping the sample order flips the sign only") {
    PairedSamples ab{"a", "b", {1.0, 2.0, 3.5, 2.2}, {0.5, 2.5, 3.0, 1.8}};
    PairedSamples ba{"b", "a", ab.scores_b, ab.scores_a};
    const TTestResult f = paired_ttest(ab);
    const TTestResult g = paired_ttest(ba);
    CHECK(f.t_statistic == doctest::Approx(-g.t_statistic).epsilon(1e-12));
    CHECK(f.p_two_sided == doctest::Approx(g.p_two_sided).epsilon(1e-12));
}

TEST_CASE("degenerate difference vectors hit the documented edge cases") {
    PairedSamples shifted{"a", "b", {1.0, 2.0, 3.0}, {0.5, 1.5, 2.5}};
    const TTestResult s = paired_ttest(shifted);
    CHECK(std::isinf(s.t_statistic));
    CHECK(s.t_statistic > 0.0);
    CHECK(s.p_two_sided == doctest::Approx(0.0));
    CHECK(s.significant);

    PairedSamples equal{"a", "b", {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}};
    const TTestResult e = paired_ttest(equal);
    CHECK(e.t_statistic == doctest::Approx(0.0));
    CHECK(e.p_two_sided == doctest::Approx(1.0));
    CHECK(!e.significant);

    CHECK_THROWS_AS(paired_ttest(PairedSamples{"a", "b", {1.0}, {1.0, 2.0}}), InvalidArgument);
    CHECK_THROWS_AS(paired_ttest(PairedSamples{"a", "b", {1.0}, {1.0}}), InvalidArgument);
}

TEST_CASE("the bonferroni factor scales and clamps the adjusted p") {
    PairedSamples s{"a", "b", {0.9, 0.7, 0.95, 0.8}, {0.6, 0.65, 0.7, 0.75}};
    const TTestResult r1 = paired_ttest(s, 1);
    const TTestResult r10 = paired_ttest(s, 10);
    CHECK(r1.p_adjusted == doctest::Approx(r1.p_two_sided));
    CHECK(r10.p_adjusted == doctest::Approx(std::min(1.0, r1.p_two_sided * 10.0)));
    CHECK(r10.p_adjusted >= r10.p_two_sided);

    const TTestResult clamped = paired_ttest(s, 1000000);
    CHECK(clamped.p_adjusted == doctest::Approx(1.0));
}

TEST_CASE("twelve models produce sixty-six corrected pairs") {
    Rng rng(11);
    std::vector<std::string> models;
    std::vector<std::vector<double>> scores;
    for (int m = 0; m < 12; ++m) {
        models.push_back("model_" + std::to_string(m));
        std::vector<double> s;
        for (int r = 0; r < 20; ++r) s.push_back(rng.next_double());
        scores.push_back(s);
    }
    const SignificanceMatrix matrix = compare_all(models, scores);
    CHECK(matrix.pairs.size() == 66);
    CHECK(matrix.bonferroni_m == 66);
    auto index_of = [&](const std::string& name) {
        return std::find(models.begin(), models.end(), name) - models.begin();
    };
    for (const auto& pair : matrix.pairs) {
        CHECK(index_of(pair.model_a) < index_of(pair.model_b));
        CHECK(pair.p_adjusted >= pair.p_two_sided);
        CHECK(pair.p_adjusted <= 1.0);
        CHECK(pair.degrees_of_freedom == 19);
    }

    const SignificanceMatrix two = compare_all({models[0], models[1]}, {scores[0], scores[1]});
    CHECK(two.pairs.size() == 1);
    CHECK(two.bonferroni_m == 1);
    CHECK(two.pairs[0].p_adjusted == doctest::Approx(two.pairs[0].p_two_sided));
}

TEST_CASE("significance csv lists the header and one row per pair") {
    const SignificanceMatrix matrix =
        compare_all({"alpha", "beta", "gamma"},
                    {{0.9, 0.8, 0.85}, {0.6, 0.62, 0.58}, {0.7, 0.72, 0.69}});
    const std::string csv = significance_to_csv(matrix);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "model_a,model_b,t,df,p_raw,p_adjusted,significant");
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);
    CHECK(csv.find("alpha,beta,") != std::string::npos);
}
