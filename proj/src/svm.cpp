#include "spamlab/svm.hpp"

#include <cmath>

using nlohmann::json;

namespace spamlab {

double kernel_eval(const KernelSpec& spec, const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw InvalidArgument("kernel_eval: dimension mismatch");
    switch (spec.kind) {
        case KernelKind::Linear: {
            double s = 0.0;
            for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
            return s;
        }
        case KernelKind::Poly: {
            double s = 0.0;
            for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
            return std::pow(s + 1.0, spec.degree);
        }
        case KernelKind::Sigmoid: {
            double s = 0.0;
            for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
            return std::tanh(s + spec.r);
        }
        case KernelKind::Rbf: {
            double d2 = 0.0;
            for (size_t i = 0; i < u.size(); ++i) {
                const double d = u[i] - v[i];
                d2 += d * d;
            }
            return std::exp(-spec.gamma * d2);
        }
    }
    throw InvalidArgument("kernel_eval: unknown kernel");
}

double SvmModel::dual_objective() const {
    double obj = 0.0;
    for (double a : alpha) obj += a;
    for (size_t i = 0; i < alpha.size(); ++i) {
        for (size_t j = 0; j < alpha.size(); ++j) {
            obj -= 0.5 * alpha[i] * alpha[j] * labels[i] * labels[j] *
                   kernel_eval(kernel, support_vectors[i], support_vectors[j]);
        }
    }
    return obj;
}

SvmModel smo_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                 const KernelSpec& kernel, double c, int epoch_cap, double kkt_tol) {
    const size_t n = X.size();
    if (n == 0 || y.size() != n) throw InvalidArgument("smo_fit: bad training data");
    bool pos = false, neg = false;
    for (int l : y) (l > 0 ? pos : neg) = true;
    if (!pos || !neg) throw TrainingError("smo_fit: both classes required");

    std::vector<double> alpha(n, 0.0);
    double b = 0.0;

    auto kernel_row = [&](size_t i, std::vector<double>& row) {
        for (size_t k = 0; k < n; ++k) row[k] = kernel_eval(kernel, X[i], X[k]);
    };
    std::vector<double> diag(n);
    for (size_t i = 0; i < n; ++i) diag[i] = kernel_eval(kernel, X[i], X[i]);

    // error cache: E_k = f(x_k) - y_k, maintained incrementally
    std::vector<double> errors(n);
    for (size_t k = 0; k < n; ++k) errors[k] = -static_cast<double>(y[k]);

    std::vector<double> row_i(n), row_j(n);

    auto try_pair = [&](size_t i, size_t j) {
        if (i == j) return false;
        const double ai_old = alpha[i], aj_old = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(c, c + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - c);
            hi = std::min(c, ai_old + aj_old);
        }
        if (hi - lo < 1e-12) return false;

        kernel_row(i, row_i);
        const double kij = row_i[j];
        const double eta = diag[i] + diag[j] - 2.0 * kij;
        if (eta <= 1e-12) return false;  // non-PSD or degenerate pair

        double aj = aj_old + y[j] * (errors[i] - errors[j]) / eta;
        aj = std::min(hi, std::max(lo, aj));
        if (std::fabs(aj - aj_old) < 1e-12) return false;
        const double ai = ai_old + y[i] * y[j] * (aj_old - aj);

        kernel_row(j, row_j);
        const double di = y[i] * (ai - ai_old);
        const double dj = y[j] * (aj - aj_old);

        // bias from the KKT-satisfying update (Platt's b1/b2 rule)
        const double b1 = b - errors[i] - di * diag[i] - dj * kij;
        const double b2 = b - errors[j] - di * kij - dj * diag[j];
        double b_new;
        if (ai > 0 && ai < c) b_new = b1;
        else if (aj > 0 && aj < c) b_new = b2;
        else b_new = 0.5 * (b1 + b2);

        const double db = b_new - b;
        alpha[i] = ai;
        alpha[j] = aj;
        b = b_new;
        for (size_t k = 0; k < n; ++k) errors[k] += di * row_i[k] + dj * row_j[k] + db;
        return true;
    };

    for (int epoch = 0; epoch < epoch_cap; ++epoch) {
        double max_violation = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double r = errors[i] * y[i];
            const bool violates = (r < -kkt_tol && alpha[i] < c) || (r > kkt_tol && alpha[i] > 0);
            if (!violates) continue;
            max_violation = std::max(max_violation, std::fabs(r));

            // second choice: maximize |E_i - E_j|
            size_t j = i;
            double best = -1.0;
            for (size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                const double gap = std::fabs(errors[i] - errors[k]);
                if (gap > best) {
                    best = gap;
                    j = k;
                }
            }
            if (try_pair(i, j)) continue;
            // the preferred partner stalled; fall back to any usable one
            for (size_t k = 0; k < n; ++k) {
                if (try_pair(i, k)) break;
            }
        }
        if (max_violation < kkt_tol) break;
    }

    SvmModel model;
    model.kernel = kernel;
    model.c = c;
    model.bias = b;
    for (size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.support_vectors.push_back(X[i]);
            model.alpha.push_back(alpha[i]);
            model.labels.push_back(y[i]);
        }
    }
    return model;
}

double svm_decision(const SvmModel& model, const std::vector<double>& x) {
    double s = model.bias;
    for (size_t i = 0; i < model.alpha.size(); ++i) {
        s += model.alpha[i] * model.labels[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    }
    return s;
}

namespace {

class SvmTrainedModel : public TrainedModel {
public:
    SvmTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint) {
        const auto& h = std::get<SvmHyper>(this->spec().hyper);
        const size_t n_features = X.cols();

        // counts scaled to [0,1] per feature by the train-set max; raw counts
        // saturate tanh/exp kernels
        scale_.assign(n_features, 1.0);
        for (const auto& row : X.counts) {
            for (size_t j = 0; j < n_features; ++j) {
                scale_[j] = std::max(scale_[j], static_cast<double>(row[j]));
            }
        }

        std::vector<std::vector<double>> scaled(X.rows());
        std::vector<int> y(X.rows());
        for (size_t i = 0; i < X.rows(); ++i) {
            scaled[i] = scale_row(X.counts[i]);
            y[i] = X.labels[i] == Label::Spam ? 1 : -1;
        }

        KernelSpec kernel = h.kernel;
        if (kernel.kind == KernelKind::Rbf && kernel.gamma == 0.0) {
            // auto gamma = 1/(N * feature variance) of the scaled data
            double mean = 0.0, sq = 0.0;
            const double total = static_cast<double>(scaled.size() * n_features);
            for (const auto& row : scaled) {
                for (double v : row) {
                    mean += v;
                    sq += v * v;
                }
            }
            mean /= total;
            const double var = sq / total - mean * mean;
            kernel.gamma = 1.0 / (static_cast<double>(n_features) * std::max(var, 1e-12));
        }

        model_ = smo_fit(scaled, y, kernel, h.c, h.epoch_cap, h.kkt_tol);
    }

    const SvmModel& svm() const { return model_; }
    std::vector<double> scale_row(const std::vector<uint32_t>& row) const {
        std::vector<double> out(row.size());
        for (size_t j = 0; j < row.size(); ++j) out[j] = row[j] / scale_[j];
        return out;
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return svm_decision(model_, scale_row(row));
    }

    void serialize_params(json& out) const override {
        out["bias"] = model_.bias;
        out["alpha"] = model_.alpha;
        out["labels"] = model_.labels;
        out["support_vectors"] = model_.support_vectors;
        out["feature_scale"] = scale_;
        out["gamma"] = model_.kernel.gamma;
    }

private:
    std::vector<double> scale_;
    SvmModel model_;
};

}  // namespace

std::unique_ptr<TrainedModel> fit_svm(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<SvmTrainedModel>(spec, X);
}

}  // namespace spamlab
