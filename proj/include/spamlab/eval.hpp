#pragma once

#include "spamlab/corpus.hpp"
#include "spamlab/models.hpp"

namespace spamlab {

struct Confusion {
    size_t tp = 0, fp = 0, tn = 0, fn = 0;

    size_t total() const { return tp + fp + tn + fn; }
};

/// Cell counts with spam as the positive class.
Confusion confusion(const std::vector<Label>& y_true, const std::vector<Label>& y_pred);

/// Undefined metrics (zero denominator) are reported as absent, never as 0.
std::optional<double> precision(const Confusion& c);
std::optional<double> recall(const Confusion& c);
/// 2TP / (2TP + FP + FN).
std::optional<double> fscore(const Confusion& c);

struct RocCurve {
    std::vector<double> fpr;         // nondecreasing, from 0 to 1
    std::vector<double> tpr;
    std::vector<double> thresholds;  // descending; endpoints use +/- infinity
    double auc = 0.0;
};

/// Threshold sweep over unique scores descending; equal scores flip
/// together. AUC by the trapezoid rule.
RocCurve roc_curve(const std::vector<double>& scores, const std::vector<Label>& labels);

/// Fold curves resampled onto a fixed 101-point false-positive-rate grid,
/// with the mean line and a +/- 1 standard deviation band.
struct MeanRoc {
    std::vector<double> fpr_grid;
    std::vector<double> mean_tpr;
    std::vector<double> std_tpr;
    double mean_auc = 0.0;
    double std_auc = 0.0;
};

MeanRoc mean_roc(const std::vector<RocCurve>& curves);

/// Linear interpolation of a ROC curve's TPR at the given FPR.
double roc_interpolate(const RocCurve& curve, double fpr);

struct FoldMetrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> fscore;
    double auc = 0.0;
    double predict_seconds = 0.0;
};

struct MetricSummary {
    std::optional<double> mean;
    std::optional<double> stddev;  // sample (n-1); absent for < 2 values
};

struct FoldReport {
    std::string model;
    std::vector<FoldMetrics> folds;
    std::vector<RocCurve> curves;  // one per fold

    MetricSummary precision_summary() const;
    MetricSummary recall_summary() const;
    MetricSummary fscore_summary() const;
    MetricSummary auc_summary() const;
    MetricSummary time_summary() const;
};

/// Mean and sample standard deviation of a value list.
MetricSummary summarize(const std::vector<double>& values);

/// Wall-clock median of 5 repetitions of predicting the full matrix, after
/// one discarded warm-up run.
double time_prediction(const TrainedModel& model, const FeatureMatrix& X);

/// Stratified k-fold evaluation over the plan's folds. Each fold trains on
/// the other k-1 folds with a dictionary rebuilt from that training portion
/// only, then scores the held-out fold. Model fitting and scoring run in
/// parallel across folds (up to `threads`); timing runs afterwards on a
/// single thread.
FoldReport cross_validate(const ClassifierSpec& spec, const SplitPlan& plan,
                          const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                          size_t dict_size, int threads = 1, bool time_predictions = true);

}  // namespace spamlab
