#include "spamlab/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace spamlab {

Background sample_background(const FeatureMatrix& train, size_t size, uint64_t seed) {
    if (train.rows() == 0) throw InvalidArgument("sample_background: empty training matrix");
    if (size == 0) throw InvalidArgument("sample_background: size must be positive");

    Background bg;
    if (train.rows() <= size) {
        bg.rows = train.counts;
        return bg;
    }
    std::vector<size_t> order(train.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::derived(seed, "shap-background");
    rng.shuffle(order);
    order.resize(size);
    std::sort(order.begin(), order.end());
    bg.rows.reserve(size);
    for (size_t i : order) bg.rows.push_back(train.counts[i]);
    return bg;
}

double value_function(const TrainedModel& model, const std::vector<uint32_t>& x,
                      const std::vector<bool>& subset, const Background& background) {
    if (subset.size() != x.size()) throw InvalidArgument("value_function: subset size mismatch");
    double total = 0.0;
    std::vector<uint32_t> hybrid(x.size());
    for (const auto& row : background.rows) {
        for (size_t j = 0; j < x.size(); ++j) hybrid[j] = subset[j] ? x[j] : row[j];
        total += model.decision_score(hybrid);
    }
    return total / static_cast<double>(background.rows.size());
}

AttributionSet shapley_exact(const TrainedModel& model, const std::vector<uint32_t>& x,
                             const Background& background) {
    const size_t n = x.size();
    if (n > 12) {
        throw InvalidArgument("shapley_exact: more than 12 features; use shapley_sample");
    }
    if (background.rows.empty()) throw InvalidArgument("shapley_exact: empty background");

    // value of every coalition, indexed by feature bitmask
    const size_t n_subsets = size_t{1} << n;
    std::vector<double> values(n_subsets);
    std::vector<bool> subset(n);
    for (size_t mask = 0; mask < n_subsets; ++mask) {
        for (size_t j = 0; j < n; ++j) subset[j] = (mask >> j) & 1;
        values[mask] = value_function(model, x, subset, background);
    }

    // weight |S|!(n-|S|-1)!/n! by subset size
    std::vector<double> weight(n);
    double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    for (size_t s = 0; s < n; ++s) {
        weight[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) +
                             std::lgamma(static_cast<double>(n - s)) - log_n_fact);
    }

    AttributionSet out;
    out.shapley.assign(n, 0.0);
    out.base_value = values[0];
    out.model_score = values[n_subsets - 1];
    for (size_t j = 0; j < n; ++j) {
        const size_t bit = size_t{1} << j;
        for (size_t mask = 0; mask < n_subsets; ++mask) {
            if (mask & bit) continue;
            const size_t s = static_cast<size_t>(std::popcount(mask));
            out.shapley[j] += weight[s] * (values[mask | bit] - values[mask]);
        }
    }
    return out;
}

AttributionSet shapley_sample(const TrainedModel& model, const std::vector<uint32_t>& x,
                              const Background& background, int n_permutations, uint64_t seed) {
    if (n_permutations < 1) throw InvalidArgument("shapley_sample: need at least one permutation");
    if (background.rows.empty()) throw InvalidArgument("shapley_sample: empty background");
    const size_t n = x.size();

    AttributionSet out;
    out.shapley.assign(n, 0.0);
    out.base_value = value_function(model, x, std::vector<bool>(n, false), background);
    out.model_score = value_function(model, x, std::vector<bool>(n, true), background);

    Rng rng = Rng::derived(seed, "shap-permutations");
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> subset(n);

    for (int p = 0; p < n_permutations; ++p) {
        rng.shuffle(perm);
        std::fill(subset.begin(), subset.end(), false);
        double prev = out.base_value;
        for (size_t j : perm) {
            subset[j] = true;
            const double cur = value_function(model, x, subset, background);
            out.shapley[j] += cur - prev;
            prev = cur;
        }
    }
    for (auto& v : out.shapley) v /= static_cast<double>(n_permutations);

    // enforce efficiency: spread the Monte Carlo residual proportionally to
    // attribution magnitude
    double sum = std::accumulate(out.shapley.begin(), out.shapley.end(), 0.0);
    const double residual = (out.model_score - out.base_value) - sum;
    double abs_total = 0.0;
    for (double v : out.shapley) abs_total += std::fabs(v);
    if (abs_total > 0.0) {
        for (auto& v : out.shapley) v += residual * std::fabs(v) / abs_total;
    } else if (n > 0) {
        for (auto& v : out.shapley) v += residual / static_cast<double>(n);
    }
    return out;
}

FeatureRanking summary_ranking(const std::vector<AttributionSet>& attributions,
                               const std::vector<std::vector<uint32_t>>& instances, size_t top_k) {
    if (attributions.empty()) throw InvalidArgument("summary_ranking: no attribution sets");
    if (attributions.size() != instances.size()) {
        throw InvalidArgument("summary_ranking: attribution/instance length mismatch");
    }
    const size_t n = attributions[0].shapley.size();

    std::vector<double> mean_abs(n, 0.0);
    for (const auto& a : attributions) {
        if (a.shapley.size() != n) throw InvalidArgument("summary_ranking: ragged attribution sets");
        for (size_t j = 0; j < n; ++j) mean_abs[j] += std::fabs(a.shapley[j]);
    }
    for (auto& v : mean_abs) v /= static_cast<double>(attributions.size());

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return mean_abs[a] > mean_abs[b]; });
    order.resize(std::min(top_k, n));

    FeatureRanking ranking;
    for (size_t j : order) ranking.ranked.push_back({j, mean_abs[j]});
    for (size_t i = 0; i < attributions.size(); ++i) {
        for (size_t j : order) {
            ranking.scatter.push_back({i, j, attributions[i].shapley[j], instances[i][j]});
        }
    }
    return ranking;
}

}  // namespace spamlab
