#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spamlab/vectorize.hpp"

namespace spamlab {

enum class ModelKind {
    MultinomialNb,
    GaussianNb,
    BernoulliNb,
    SvmLinear,
    SvmPoly,
    SvmSigmoid,
    SvmRbf,
    Knn,
    Mlp,
    LogReg,
    RandomForest,
    Xgboost,
};

const char* model_kind_name(ModelKind kind);
std::optional<ModelKind> model_kind_from_name(const std::string& name);
std::vector<ModelKind> all_model_kinds();

enum class KernelKind { Linear, Poly, Sigmoid, Rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    int degree = 3;        // Poly
    double r = 0.0;        // Sigmoid
    double gamma = 0.0;    // Rbf; 0 = auto 1/(N * mean feature variance)
};

struct NbHyper {};

struct SvmHyper {
    KernelSpec kernel;
    double c = 1.0;
    int epoch_cap = 5;      // benchmark default; raise for full convergence
    double kkt_tol = 1e-3;
};

enum class KnnAlgorithm { Brute, BallTree, KdTree };

struct KnnHyper {
    int k = 5;
    KnnAlgorithm algorithm = KnnAlgorithm::Brute;
    int leaf_size = 10;
    double p = 1.0;  // Minkowski exponent
};

struct MlpHyper {
    std::vector<int> hidden = {50};
    int max_iter = 10000;
    double l2 = 1e-4;
};

struct LogRegHyper {
    double l2 = 1.0;
    int max_iter = 25;
};

struct RfHyper {
    int n_trees = 50;
    int min_split = 2;
    bool bootstrap = true;  // off = each tree sees the full sample (test mode)
};

struct GbtHyper {
    int rounds = 100;
    double eta = 0.3;
    double lambda = 1.0;
    double gamma = 0.0;
    int max_depth = 6;
};

using Hyper = std::variant<NbHyper, SvmHyper, KnnHyper, MlpHyper, LogRegHyper, RfHyper, GbtHyper>;

struct ClassifierSpec {
    ModelKind kind = ModelKind::MultinomialNb;
    uint64_t seed = 0;
    Hyper hyper;

    static ClassifierSpec defaults(ModelKind kind, uint64_t seed = 0);
    void validate() const;

    nlohmann::json hyper_to_json() const;
    /// Apply `{"key": value}` overrides onto the kind's hyperparameters.
    void apply_overrides(const nlohmann::json& overrides);
};

/// Uniform classifier contract. Higher decision score = more spam-like;
/// predict thresholds the score (0 for margin models, 0.5 for
/// probability/vote models), ties resolved towards ham.
class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    const ClassifierSpec& spec() const { return spec_; }
    uint64_t dict_fingerprint() const { return dict_fingerprint_; }
    double threshold() const;

    std::vector<double> decision_scores(const FeatureMatrix& X) const;
    double decision_score(const std::vector<uint32_t>& row) const { return score_row(row); }
    virtual std::vector<Label> predict(const FeatureMatrix& X) const;

    /// Versioned JSON document with kind, hyperparameters, learned
    /// parameters, and the dictionary fingerprint.
    std::string to_json() const;

protected:
    TrainedModel(ClassifierSpec spec, uint64_t dict_fingerprint)
        : spec_(std::move(spec)), dict_fingerprint_(dict_fingerprint) {}

    virtual double score_row(const std::vector<uint32_t>& row) const = 0;
    virtual void serialize_params(nlohmann::json& out) const = 0;

    void check_compatible(const FeatureMatrix& X) const;

private:
    ClassifierSpec spec_;
    uint64_t dict_fingerprint_;
};

/// Dispatch on spec.kind. Throws TrainingError for empty or single-class
/// training data.
std::unique_ptr<TrainedModel> fit(const ClassifierSpec& spec, const FeatureMatrix& X);

/// Shared fit precondition checks, usable by the per-family fit functions.
void check_fit_preconditions(const FeatureMatrix& X);

}  // namespace spamlab
