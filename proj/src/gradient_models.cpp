#include "spamlab/gradient_models.hpp"

#include <cmath>

using nlohmann::json;

namespace spamlab {

namespace {

// log(1 + e^z) without overflow
double log1pexp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic(double z) {
    if (z >= 0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double logreg_objective(const std::vector<double>& theta, const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y, double l2, std::vector<double>& grad) {
    const size_t n = X.size();
    const size_t m = theta.size() - 1;
    grad.assign(theta.size(), 0.0);
    double value = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double z = theta[0];
        for (size_t j = 0; j < m; ++j) z += theta[j + 1] * X[i][j];
        value += log1pexp(z) - y[i] * z;
        const double resid = logistic(z) - y[i];
        grad[0] += resid;
        for (size_t j = 0; j < m; ++j) grad[j + 1] += resid * X[i][j];
    }
    // L2 on the weights only; the intercept stays unpenalized
    for (size_t j = 0; j < m; ++j) {
        value += 0.5 * l2 * theta[j + 1] * theta[j + 1];
        grad[j + 1] += l2 * theta[j + 1];
    }
    return value;
}

LogRegModel logreg_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       double l2, int max_iter) {
    if (X.empty() || X.size() != y.size()) throw InvalidArgument("logreg_fit: bad training data");
    const size_t m = X[0].size();

    SmoothProblem problem;
    problem.dimension = static_cast<int>(m + 1);
    problem.value_and_grad = [&](const std::vector<double>& theta, std::vector<double>& grad) {
        return logreg_objective(theta, X, y, l2, grad);
    };
    LbfgsOptions opts;
    opts.max_iter = max_iter;
    OptResult result = lbfgs_minimize(problem, std::vector<double>(m + 1, 0.0), opts);

    LogRegModel model;
    model.intercept = result.minimizer[0];
    model.weights.assign(result.minimizer.begin() + 1, result.minimizer.end());
    model.l2 = l2;
    return model;
}

double logreg_proba(const LogRegModel& model, const std::vector<double>& x) {
    double z = model.intercept;
    for (size_t j = 0; j < model.weights.size(); ++j) z += model.weights[j] * x[j];
    return logistic(z);
}

size_t MlpNetwork::param_count() const {
    size_t count = 0;
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        count += static_cast<size_t>(layer_sizes[l]) * layer_sizes[l + 1] + layer_sizes[l + 1];
    }
    return count;
}

std::vector<double> MlpNetwork::init_params(Rng& rng) const {
    std::vector<double> params;
    params.reserve(param_count());
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes[l]));
        const size_t n_weights = static_cast<size_t>(layer_sizes[l]) * layer_sizes[l + 1];
        for (size_t i = 0; i < n_weights; ++i) params.push_back(rng.next_in(-bound, bound));
        for (int i = 0; i < layer_sizes[l + 1]; ++i) params.push_back(0.0);
    }
    return params;
}

double MlpNetwork::forward(const std::vector<double>& params, const std::vector<double>& x) const {
    std::vector<double> activation = x;
    size_t offset = 0;
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int in = layer_sizes[l], out = layer_sizes[l + 1];
        std::vector<double> next(out);
        for (int o = 0; o < out; ++o) {
            double z = params[offset + static_cast<size_t>(in) * out + o];  // bias
            for (int i = 0; i < in; ++i) z += params[offset + static_cast<size_t>(o) * in + i] * activation[i];
            next[o] = z;
        }
        offset += static_cast<size_t>(in) * out + out;
        const bool last = l + 2 == layer_sizes.size();
        for (auto& v : next) v = last ? logistic(v) : std::max(0.0, v);
        activation = std::move(next);
    }
    return activation[0];
}

double MlpNetwork::loss_and_grad(const std::vector<double>& params,
                                 const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                                 double l2, std::vector<double>& grad) const {
    grad.assign(params.size(), 0.0);
    const size_t n_layers = layer_sizes.size();
    double loss = 0.0;

    // per-layer parameter offsets
    std::vector<size_t> offsets(n_layers - 1);
    size_t off = 0;
    for (size_t l = 0; l + 1 < n_layers; ++l) {
        offsets[l] = off;
        off += static_cast<size_t>(layer_sizes[l]) * layer_sizes[l + 1] + layer_sizes[l + 1];
    }

    for (size_t row = 0; row < X.size(); ++row) {
        // forward, keeping activations and pre-activations
        std::vector<std::vector<double>> acts(n_layers);
        std::vector<std::vector<double>> pre(n_layers);
        acts[0] = X[row];
        for (size_t l = 0; l + 1 < n_layers; ++l) {
            const int in = layer_sizes[l], out = layer_sizes[l + 1];
            pre[l + 1].assign(out, 0.0);
            acts[l + 1].assign(out, 0.0);
            for (int o = 0; o < out; ++o) {
                double z = params[offsets[l] + static_cast<size_t>(in) * out + o];
                for (int i = 0; i < in; ++i) {
                    z += params[offsets[l] + static_cast<size_t>(o) * in + i] * acts[l][i];
                }
                pre[l + 1][o] = z;
            }
            const bool last = l + 2 == n_layers;
            for (int o = 0; o < out; ++o) {
                acts[l + 1][o] = last ? logistic(pre[l + 1][o]) : std::max(0.0, pre[l + 1][o]);
            }
        }

        const double z_out = pre[n_layers - 1][0];
        loss += log1pexp(z_out) - y[row] * z_out;

        // backward: delta at the output logit is p - y
        std::vector<double> delta = {acts[n_layers - 1][0] - y[row]};
        for (int l = static_cast<int>(n_layers) - 2; l >= 0; --l) {
            const int in = layer_sizes[l], out = layer_sizes[l + 1];
            for (int o = 0; o < out; ++o) {
                grad[offsets[l] + static_cast<size_t>(in) * out + o] += delta[o];
                for (int i = 0; i < in; ++i) {
                    grad[offsets[l] + static_cast<size_t>(o) * in + i] += delta[o] * acts[l][i];
                }
            }
            if (l > 0) {
                std::vector<double> prev_delta(in, 0.0);
                for (int i = 0; i < in; ++i) {
                    double s = 0.0;
                    for (int o = 0; o < out; ++o) {
                        s += delta[o] * params[offsets[l] + static_cast<size_t>(o) * in + i];
                    }
                    prev_delta[i] = pre[l][i] > 0.0 ? s : 0.0;  // rectifier derivative
                }
                delta = std::move(prev_delta);
            }
        }
    }

    // L2 on weight matrices only
    for (size_t l = 0; l + 1 < n_layers; ++l) {
        const size_t n_weights = static_cast<size_t>(layer_sizes[l]) * layer_sizes[l + 1];
        for (size_t i = 0; i < n_weights; ++i) {
            loss += 0.5 * l2 * params[offsets[l] + i] * params[offsets[l] + i];
            grad[offsets[l] + i] += l2 * params[offsets[l] + i];
        }
    }
    return loss;
}

MlpModel mlp_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                 const std::vector<int>& hidden, int max_iter, double l2, uint64_t seed) {
    if (X.empty() || X.size() != y.size()) throw InvalidArgument("mlp_fit: bad training data");

    MlpModel model;
    model.net.layer_sizes.push_back(static_cast<int>(X[0].size()));
    for (int h : hidden) model.net.layer_sizes.push_back(h);
    model.net.layer_sizes.push_back(1);

    Rng rng = Rng(seed).derive("mlp-init");
    std::vector<double> params = model.net.init_params(rng);

    SmoothProblem problem;
    problem.dimension = static_cast<int>(params.size());
    problem.value_and_grad = [&](const std::vector<double>& p, std::vector<double>& grad) {
        return model.net.loss_and_grad(p, X, y, l2, grad);
    };
    LbfgsOptions opts;
    opts.max_iter = max_iter;
    OptResult result = lbfgs_minimize(problem, std::move(params), opts);
    model.params = std::move(result.minimizer);
    return model;
}

double mlp_proba(const MlpModel& model, const std::vector<double>& x) {
    return model.net.forward(model.params, x);
}

namespace {

// train-set standardization shared by the two wrappers
struct Standardizer {
    std::vector<double> mean, stddev;

    void fit(const FeatureMatrix& X) {
        const size_t m = X.cols();
        mean.assign(m, 0.0);
        stddev.assign(m, 0.0);
        for (const auto& row : X.counts) {
            for (size_t j = 0; j < m; ++j) mean[j] += row[j];
        }
        for (auto& v : mean) v /= static_cast<double>(X.rows());
        for (const auto& row : X.counts) {
            for (size_t j = 0; j < m; ++j) {
                const double d = row[j] - mean[j];
                stddev[j] += d * d;
            }
        }
        for (auto& v : stddev) {
            v = std::sqrt(v / static_cast<double>(X.rows()));
            if (v == 0.0) v = 1.0;
        }
    }

    std::vector<double> apply(const std::vector<uint32_t>& row) const {
        std::vector<double> out(row.size());
        for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
        return out;
    }
};

std::vector<int> spam_indicator(const FeatureMatrix& X) {
    std::vector<int> y(X.rows());
    for (size_t i = 0; i < X.rows(); ++i) y[i] = X.labels[i] == Label::Spam ? 1 : 0;
    return y;
}

class LogRegTrainedModel : public TrainedModel {
public:
    LogRegTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        const auto& h = std::get<LogRegHyper>(this->spec().hyper);
        scaler_.fit(X);
        std::vector<std::vector<double>> rows;
        rows.reserve(X.rows());
        for (const auto& row : X.counts) rows.push_back(scaler_.apply(row));
        model_ = logreg_fit(rows, spam_indicator(X), h.l2, h.max_iter);
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return logreg_proba(model_, scaler_.apply(row));
    }

    void serialize_params(json& out) const override {
        out["intercept"] = model_.intercept;
        out["weights"] = model_.weights;
        out["feature_mean"] = scaler_.mean;
        out["feature_stddev"] = scaler_.stddev;
    }

private:
    Standardizer scaler_;
    LogRegModel model_;
};

class MlpTrainedModel : public TrainedModel {
public:
    MlpTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        const auto& h = std::get<MlpHyper>(this->spec().hyper);
        scaler_.fit(X);
        std::vector<std::vector<double>> rows;
        rows.reserve(X.rows());
        for (const auto& row : X.counts) rows.push_back(scaler_.apply(row));
        model_ = mlp_fit(rows, spam_indicator(X), h.hidden, h.max_iter, h.l2, this->spec().seed);
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return mlp_proba(model_, scaler_.apply(row));
    }

    void serialize_params(json& out) const override {
        out["layer_sizes"] = model_.net.layer_sizes;
        out["params"] = model_.params;
        out["feature_mean"] = scaler_.mean;
        out["feature_stddev"] = scaler_.stddev;
    }

private:
    Standardizer scaler_;
    MlpModel model_;
};

}  // namespace

std::unique_ptr<TrainedModel> fit_logreg(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<LogRegTrainedModel>(spec, X);
}

std::unique_ptr<TrainedModel> fit_mlp(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<MlpTrainedModel>(spec, X);
}

}  // namespace spamlab
