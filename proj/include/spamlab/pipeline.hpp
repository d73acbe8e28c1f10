#pragma once

#include <filesystem>

#include "spamlab/eval.hpp"
#include "spamlab/explain.hpp"
#include "spamlab/stats.hpp"

namespace spamlab {

struct RunConfig {
    std::filesystem::path corpus_root;
    std::filesystem::path output_dir = "out";
    uint64_t seed = 0;
    size_t dict_size = 200;
    double train_fraction = 0.7;
    int folds = 5;
    int repeats = 20;  // stats mode
    int threads = 1;

    bool strip_html = true;
    bool remove_stopwords = true;
    bool remove_noise_words = true;
    bool lemmatize = true;
    std::filesystem::path stopword_file;   // empty = empty stop list
    std::filesystem::path lemma_file;      // empty = suffix rules only

    std::vector<ClassifierSpec> models;    // empty = all twelve with defaults

    // attribution settings for the run/explain stages
    size_t shap_instances = 10;
    int shap_permutations = 30;
    size_t shap_background = 100;

    void validate() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    std::vector<ClassifierSpec> resolved_models() const;
    PrepConfig prep_config() const;
};

struct ModelReport {
    std::string model;
    FoldReport folds;
    MeanRoc roc;
};

struct ReportBundle {
    RunConfig config;
    std::vector<ModelReport> models;
    SignificanceMatrix significance;
    std::vector<std::filesystem::path> artifacts;
    double wall_seconds = 0.0;
};

/// Full pipeline: load, balance, split, preprocess, vectorize, evaluate
/// every configured model, test significance, attribute features, write
/// metrics.csv, significance.csv, roc/<model>.csv, shap/<model>.csv,
/// report.json, roc.svg and summary.svg into output_dir. On a stage error a
/// FAILED marker naming the stage is left next to any partial outputs.
ReportBundle run_pipeline(const RunConfig& cfg);

struct FeatureAblationRow {
    size_t dict_size;
    std::string model;  // "all" aggregates across models
    double fscore_mean;
    double predict_seconds_mean;
};

/// Rerun the evaluation per dictionary size; writes ablation_features.csv.
std::vector<FeatureAblationRow> ablate_features(const RunConfig& cfg, std::vector<size_t> sizes = {
                                                    10, 25, 50, 75, 100, 125, 150, 200});

struct PrepAblationRow {
    std::string model;
    double fscore_on;
    double fscore_off;
    double ratio;  // on / off; infinity when off is 0
};

/// Two runs differing only in the preprocessing flags; writes
/// ablation_prep.csv.
std::vector<PrepAblationRow> ablate_preprocessing(const RunConfig& cfg);

/// Repeated hold-out evaluation, one fresh seeded split per repeat shared
/// by all models, then all-pairs t-tests. Writes repeat_scores.csv and
/// significance.csv.
SignificanceMatrix compare_models(const RunConfig& cfg);

/// Shapley attributions only: fit each model on the train split and explain
/// a seeded sample of test instances. Writes shap/<model>.csv and
/// shap/<model>_ranking.csv.
void explain_models(const RunConfig& cfg);

/// Rebuild roc.svg and summary.svg from the CSV artifacts in output_dir.
void plot_outputs(const RunConfig& cfg);

// SVG emitters (800x600, unit axes, chance diagonal, legend sorted by
// descending mean AUC).
std::string roc_svg(const std::vector<ModelReport>& models);
std::string summary_svg(const std::vector<ModelReport>& models);

}  // namespace spamlab
