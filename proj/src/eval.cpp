#include "spamlab/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace spamlab {

Confusion confusion(const std::vector<Label>& y_true, const std::vector<Label>& y_pred) {
    if (y_true.size() != y_pred.size()) throw InvalidArgument("confusion: length mismatch");
    Confusion c;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == Label::Spam) {
            (y_pred[i] == Label::Spam ? c.tp : c.fn) += 1;
        } else {
            (y_pred[i] == Label::Spam ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

std::optional<double> precision(const Confusion& c) {
    if (c.tp + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const Confusion& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> fscore(const Confusion& c) {
    if (2 * c.tp + c.fp + c.fn == 0) return std::nullopt;
    return static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) throw InvalidArgument("roc_curve: length mismatch");
    size_t n_pos = 0;
    for (Label l : labels) n_pos += l == Label::Spam ? 1 : 0;
    const size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw InvalidArgument("roc_curve: both classes required");
    for (double s : scores) {
        if (!std::isfinite(s)) throw InvalidArgument("roc_curve: scores must be finite");
    }

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());

    size_t tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // all instances sharing this score flip together
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == Label::Spam ? tp : fp) += 1;
            ++i;
        }
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
        curve.thresholds.push_back(s);
    }
    curve.fpr.back() = 1.0;
    curve.tpr.back() = 1.0;

    double auc = 0.0;
    for (size_t k = 1; k < curve.fpr.size(); ++k) {
        auc += (curve.fpr[k] - curve.fpr[k - 1]) * 0.5 * (curve.tpr[k] + curve.tpr[k - 1]);
    }
    curve.auc = auc;
    return curve;
}

double roc_interpolate(const RocCurve& curve, double fpr) {
    if (fpr <= curve.fpr.front()) return curve.tpr.front();
    if (fpr >= curve.fpr.back()) return curve.tpr.back();
    // first point at or beyond fpr
    const auto it = std::lower_bound(curve.fpr.begin(), curve.fpr.end(), fpr);
    const size_t hi = static_cast<size_t>(it - curve.fpr.begin());
    const size_t lo = hi - 1;
    const double span = curve.fpr[hi] - curve.fpr[lo];
    if (span <= 0.0) return curve.tpr[hi];
    const double w = (fpr - curve.fpr[lo]) / span;
    return curve.tpr[lo] + w * (curve.tpr[hi] - curve.tpr[lo]);
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    s.mean = mean;
    if (values.size() >= 2) {
        double sq = 0.0;
        for (double v : values) sq += (v - mean) * (v - mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

MeanRoc mean_roc(const std::vector<RocCurve>& curves) {
    if (curves.empty()) throw InvalidArgument("mean_roc: at least one curve required");
    MeanRoc out;
    out.fpr_grid.resize(101);
    out.mean_tpr.resize(101);
    out.std_tpr.resize(101);
    std::vector<double> column(curves.size());
    for (size_t g = 0; g < 101; ++g) {
        const double fpr = static_cast<double>(g) / 100.0;
        out.fpr_grid[g] = fpr;
        for (size_t c = 0; c < curves.size(); ++c) column[c] = roc_interpolate(curves[c], fpr);
        const MetricSummary s = summarize(column);
        out.mean_tpr[g] = *s.mean;
        out.std_tpr[g] = s.stddev.value_or(0.0);
    }
    std::vector<double> aucs;
    aucs.reserve(curves.size());
    for (const auto& c : curves) aucs.push_back(c.auc);
    const MetricSummary s = summarize(aucs);
    out.mean_auc = *s.mean;
    out.std_auc = s.stddev.value_or(0.0);
    return out;
}

namespace {

MetricSummary summarize_optional(const std::vector<FoldMetrics>& folds,
                                 std::optional<double> FoldMetrics::*field) {
    std::vector<double> present;
    for (const auto& f : folds) {
        if (f.*field) present.push_back(*(f.*field));
    }
    return summarize(present);
}

}  // namespace

MetricSummary FoldReport::precision_summary() const {
    return summarize_optional(folds, &FoldMetrics::precision);
}
MetricSummary FoldReport::recall_summary() const {
    return summarize_optional(folds, &FoldMetrics::recall);
}
MetricSummary FoldReport::fscore_summary() const {
    return summarize_optional(folds, &FoldMetrics::fscore);
}
MetricSummary FoldReport::auc_summary() const {
    std::vector<double> values;
    for (const auto& f : folds) values.push_back(f.auc);
    return summarize(values);
}
MetricSummary FoldReport::time_summary() const {
    std::vector<double> values;
    for (const auto& f : folds) values.push_back(f.predict_seconds);
    return summarize(values);
}

double time_prediction(const TrainedModel& model, const FeatureMatrix& X) {
    using clock = std::chrono::steady_clock;
    volatile double sink = 0.0;

    auto run_once = [&] {
        const auto start = clock::now();
        const auto scores = model.decision_scores(X);
        const auto end = clock::now();
        sink = sink + scores.back();
        return std::chrono::duration<double>(end - start).count();
    };

    run_once();  // warm-up, discarded
    std::vector<double> samples(5);
    for (auto& s : samples) s = run_once();
    std::sort(samples.begin(), samples.end());
    return samples[2];
}

FoldReport cross_validate(const ClassifierSpec& spec, const SplitPlan& plan,
                          const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                          size_t dict_size, int threads, bool time_predictions) {
    if (streams.size() != labels.size()) throw InvalidArgument("cross_validate: length mismatch");
    if (plan.folds.empty()) throw InvalidArgument("cross_validate: plan has no folds");

    std::unordered_map<std::string, size_t> by_id;
    by_id.reserve(streams.size());
    for (size_t i = 0; i < streams.size(); ++i) by_id[streams[i].doc_id] = i;

    const size_t k = plan.folds.size();
    auto fold_indices = [&](size_t fold) {
        std::vector<size_t> out;
        out.reserve(plan.folds[fold].size());
        for (const auto& id : plan.folds[fold]) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw InvalidArgument("cross_validate: unknown document id " + id);
            out.push_back(it->second);
        }
        return out;
    };

    struct FoldOutput {
        FoldMetrics metrics;
        RocCurve curve;
        std::unique_ptr<TrainedModel> model;
        FeatureMatrix test_matrix;
    };

    auto run_fold = [&](size_t fold) {
        std::vector<TokenStream> train_streams, test_streams;
        std::vector<Label> train_labels, test_labels;
        for (size_t f = 0; f < k; ++f) {
            for (size_t idx : fold_indices(f)) {
                if (f == fold) {
                    test_streams.push_back(streams[idx]);
                    test_labels.push_back(labels[idx]);
                } else {
                    train_streams.push_back(streams[idx]);
                    train_labels.push_back(labels[idx]);
                }
            }
        }

        // dictionary from the training portion only
        const Dictionary dict = build_dictionary(train_streams, dict_size);
        const FeatureMatrix train = build_matrix(train_streams, train_labels, dict);
        FeatureMatrix test = build_matrix(test_streams, test_labels, dict);

        ClassifierSpec fold_spec = spec;
        fold_spec.seed = Rng::derived(spec.seed, "cv-fold-" + std::to_string(fold)).next();

        FoldOutput out;
        out.model = fit(fold_spec, train);
        const auto scores = out.model->decision_scores(test);
        const auto preds = out.model->predict(test);
        const Confusion c = confusion(test_labels, preds);
        out.metrics.precision = precision(c);
        out.metrics.recall = recall(c);
        out.metrics.fscore = fscore(c);
        out.curve = roc_curve(scores, test_labels);
        out.metrics.auc = out.curve.auc;
        out.test_matrix = std::move(test);
        return out;
    };

    std::vector<FoldOutput> outputs(k);
    if (threads > 1) {
        std::vector<std::future<FoldOutput>> futures;
        futures.reserve(k);
        for (size_t fold = 0; fold < k; ++fold) {
            futures.push_back(std::async(std::launch::async, run_fold, fold));
        }
        for (size_t fold = 0; fold < k; ++fold) outputs[fold] = futures[fold].get();
    } else {
        for (size_t fold = 0; fold < k; ++fold) outputs[fold] = run_fold(fold);
    }

    FoldReport report;
    report.model = model_kind_name(spec.kind);
    for (size_t fold = 0; fold < k; ++fold) {
        if (time_predictions) {
            // serialized so parallel folds do not skew the clock
            outputs[fold].metrics.predict_seconds =
                time_prediction(*outputs[fold].model, outputs[fold].test_matrix);
        }
        report.folds.push_back(outputs[fold].metrics);
        report.curves.push_back(std::move(outputs[fold].curve));
    }
    return report;
}

}  // namespace spamlab
