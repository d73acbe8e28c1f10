#pragma once

#include "spamlab/models.hpp"

namespace spamlab {

/// Reference sample of training rows used to mask features outside the
/// coalition.
struct Background {
    std::vector<std::vector<uint32_t>> rows;
};

/// Seeded sample of up to `size` training rows.
Background sample_background(const FeatureMatrix& train, size_t size, uint64_t seed);

struct AttributionSet {
    std::string instance_id;
    std::vector<double> shapley;  // one value per feature
    double base_value = 0.0;      // mean model score over the background
    double model_score = 0.0;     // score at the instance
};

/// Mean decision score over hybrid inputs taking the features in `subset`
/// from x and everything else from each background row.
double value_function(const TrainedModel& model, const std::vector<uint32_t>& x,
                      const std::vector<bool>& subset, const Background& background);

/// Exact Shapley values by full subset enumeration. Feasible up to 12
/// features; larger inputs are rejected in favour of shapley_sample.
AttributionSet shapley_exact(const TrainedModel& model, const std::vector<uint32_t>& x,
                             const Background& background);

/// Monte Carlo estimate over random feature permutations. The efficiency
/// residual is distributed across features proportionally to the absolute
/// attribution, so the values always sum to score - base.
AttributionSet shapley_sample(const TrainedModel& model, const std::vector<uint32_t>& x,
                              const Background& background, int n_permutations, uint64_t seed);

struct FeatureRanking {
    struct Entry {
        size_t feature;
        double mean_abs_attribution;
    };
    struct ScatterPoint {
        size_t instance;   // index into the attribution list
        size_t feature;
        double attribution;
        uint32_t feature_count;  // raw count of the feature at that instance
    };
    std::vector<Entry> ranked;           // descending mean |attribution|, top_k entries
    std::vector<ScatterPoint> scatter;   // per-instance data for the ranked features
};

FeatureRanking summary_ranking(const std::vector<AttributionSet>& attributions,
                               const std::vector<std::vector<uint32_t>>& instances, size_t top_k = 10);

}  // namespace spamlab
