#include "spamlab/naive_bayes.hpp"

#include <cmath>

using nlohmann::json;

namespace spamlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

size_t class_of(Label l) { return l == Label::Spam ? 1 : 0; }

std::array<double, 2> class_log_priors(const FeatureMatrix& X) {
    std::array<size_t, 2> n{};
    for (Label l : X.labels) ++n[class_of(l)];
    return {std::log(static_cast<double>(n[0]) / static_cast<double>(X.rows())),
            std::log(static_cast<double>(n[1]) / static_cast<double>(X.rows()))};
}

}  // namespace

MnbModel mnb_fit(const FeatureMatrix& X) {
    check_fit_preconditions(X);
    const size_t n_features = X.cols();
    MnbModel m;
    m.log_priors = class_log_priors(X);
    for (size_t c = 0; c < 2; ++c) m.word_log_probs[c].assign(n_features, 0.0);

    std::array<std::vector<double>, 2> counts;
    std::array<double, 2> totals{};
    for (size_t c = 0; c < 2; ++c) counts[c].assign(n_features, 0.0);
    for (size_t i = 0; i < X.rows(); ++i) {
        const size_t c = class_of(X.labels[i]);
        for (size_t j = 0; j < n_features; ++j) {
            counts[c][j] += X.counts[i][j];
            totals[c] += X.counts[i][j];
        }
    }
    for (size_t c = 0; c < 2; ++c) {
        const double denom = totals[c] + static_cast<double>(n_features);
        for (size_t j = 0; j < n_features; ++j) {
            m.word_log_probs[c][j] = std::log((counts[c][j] + 1.0) / denom);
        }
    }
    return m;
}

std::array<double, 2> mnb_score(const MnbModel& m, const std::vector<uint32_t>& x) {
    std::array<double, 2> s = m.log_priors;
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < x.size(); ++j) {
            if (x[j]) s[c] += static_cast<double>(x[j]) * m.word_log_probs[c][j];
        }
    }
    return s;
}

GnbModel gnb_fit(const FeatureMatrix& X) {
    check_fit_preconditions(X);
    const size_t n_features = X.cols();
    GnbModel m;
    m.log_priors = class_log_priors(X);

    std::array<size_t, 2> n{};
    for (Label l : X.labels) ++n[class_of(l)];
    for (size_t c = 0; c < 2; ++c) {
        m.mean[c].assign(n_features, 0.0);
        m.variance[c].assign(n_features, 0.0);
    }
    for (size_t i = 0; i < X.rows(); ++i) {
        const size_t c = class_of(X.labels[i]);
        for (size_t j = 0; j < n_features; ++j) m.mean[c][j] += X.counts[i][j];
    }
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < n_features; ++j) m.mean[c][j] /= static_cast<double>(n[c]);
    }
    for (size_t i = 0; i < X.rows(); ++i) {
        const size_t c = class_of(X.labels[i]);
        for (size_t j = 0; j < n_features; ++j) {
            const double d = X.counts[i][j] - m.mean[c][j];
            m.variance[c][j] += d * d;
        }
    }
    // ML variance plus an epsilon floor tied to the largest feature variance
    double max_var = 0.0;
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < n_features; ++j) {
            m.variance[c][j] /= static_cast<double>(n[c]);
            max_var = std::max(max_var, m.variance[c][j]);
        }
    }
    const double eps = 1e-9 * std::max(max_var, 1.0);
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < n_features; ++j) m.variance[c][j] += eps;
    }
    return m;
}

std::array<double, 2> gnb_score(const GnbModel& m, const std::vector<uint32_t>& x) {
    std::array<double, 2> s = m.log_priors;
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - m.mean[c][j];
            s[c] += -0.5 * std::log(2.0 * kPi * m.variance[c][j]) - d * d / (2.0 * m.variance[c][j]);
        }
    }
    return s;
}

BnbModel bnb_fit(const FeatureMatrix& X) {
    check_fit_preconditions(X);
    const size_t n_features = X.cols();
    BnbModel m;
    m.log_priors = class_log_priors(X);

    std::array<size_t, 2> n{};
    for (Label l : X.labels) ++n[class_of(l)];
    for (size_t c = 0; c < 2; ++c) m.presence_prob[c].assign(n_features, 0.0);
    for (size_t i = 0; i < X.rows(); ++i) {
        const size_t c = class_of(X.labels[i]);
        for (size_t j = 0; j < n_features; ++j) {
            if (X.counts[i][j] > 0) m.presence_prob[c][j] += 1.0;
        }
    }
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < n_features; ++j) {
            m.presence_prob[c][j] = (m.presence_prob[c][j] + 1.0) / (static_cast<double>(n[c]) + 2.0);
        }
    }
    return m;
}

std::array<double, 2> bnb_score(const BnbModel& m, const std::vector<uint32_t>& x) {
    std::array<double, 2> s = m.log_priors;
    for (size_t c = 0; c < 2; ++c) {
        for (size_t j = 0; j < x.size(); ++j) {
            const double p = m.presence_prob[c][j];
            s[c] += x[j] > 0 ? std::log(p) : std::log1p(-p);
        }
    }
    return s;
}

namespace {

class NbTrainedModel : public TrainedModel {
public:
    NbTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        switch (this->spec().kind) {
            case ModelKind::MultinomialNb:
                mnb_ = mnb_fit(X);
                break;
            case ModelKind::GaussianNb:
                gnb_ = gnb_fit(X);
                break;
            default:
                bnb_ = bnb_fit(X);
                break;
        }
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        std::array<double, 2> s{};
        switch (spec().kind) {
            case ModelKind::MultinomialNb:
                s = mnb_score(mnb_, row);
                break;
            case ModelKind::GaussianNb:
                s = gnb_score(gnb_, row);
                break;
            default:
                s = bnb_score(bnb_, row);
                break;
        }
        return s[1] - s[0];  // log-posterior(spam) - log-posterior(ham)
    }

    void serialize_params(json& out) const override {
        switch (spec().kind) {
            case ModelKind::MultinomialNb:
                out["log_priors"] = mnb_.log_priors;
                out["word_log_probs"] = {mnb_.word_log_probs[0], mnb_.word_log_probs[1]};
                break;
            case ModelKind::GaussianNb:
                out["log_priors"] = gnb_.log_priors;
                out["mean"] = {gnb_.mean[0], gnb_.mean[1]};
                out["variance"] = {gnb_.variance[0], gnb_.variance[1]};
                break;
            default:
                out["log_priors"] = bnb_.log_priors;
                out["presence_prob"] = {bnb_.presence_prob[0], bnb_.presence_prob[1]};
                break;
        }
    }

private:
    MnbModel mnb_;
    GnbModel gnb_;
    BnbModel bnb_;
};

}  // namespace

std::unique_ptr<TrainedModel> fit_naive_bayes(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<NbTrainedModel>(spec, X);
}

}  // namespace spamlab
