#include "spamlab/models.hpp"

#include <algorithm>

#include "spamlab/gradient_models.hpp"
#include "spamlab/naive_bayes.hpp"
#include "spamlab/neighbors.hpp"
#include "spamlab/svm.hpp"
#include "spamlab/tree_ensembles.hpp"

using nlohmann::json;

namespace spamlab {

namespace {

struct KindName {
    ModelKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {ModelKind::MultinomialNb, "multinomial_nb"},
    {ModelKind::GaussianNb, "gaussian_nb"},
    {ModelKind::BernoulliNb, "bernoulli_nb"},
    {ModelKind::SvmLinear, "svm_linear"},
    {ModelKind::SvmPoly, "svm_poly"},
    {ModelKind::SvmSigmoid, "svm_sigmoid"},
    {ModelKind::SvmRbf, "svm_rbf"},
    {ModelKind::Knn, "knn"},
    {ModelKind::Mlp, "mpnn"},
    {ModelKind::LogReg, "logreg"},
    {ModelKind::RandomForest, "random_forest"},
    {ModelKind::Xgboost, "xgboost"},
};

}  // namespace

const char* model_kind_name(ModelKind kind) {
    for (const auto& kn : kKindNames) {
        if (kn.kind == kind) return kn.name;
    }
    return "?";
}

std::optional<ModelKind> model_kind_from_name(const std::string& name) {
    for (const auto& kn : kKindNames) {
        if (name == kn.name) return kn.kind;
    }
    return std::nullopt;
}

std::vector<ModelKind> all_model_kinds() {
    std::vector<ModelKind> kinds;
    for (const auto& kn : kKindNames) kinds.push_back(kn.kind);
    return kinds;
}

ClassifierSpec ClassifierSpec::defaults(ModelKind kind, uint64_t seed) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    switch (kind) {
        case ModelKind::MultinomialNb:
        case ModelKind::GaussianNb:
        case ModelKind::BernoulliNb:
            spec.hyper = NbHyper{};
            break;
        case ModelKind::SvmLinear: {
            SvmHyper h;
            h.kernel.kind = KernelKind::Linear;
            spec.hyper = h;
            break;
        }
        case ModelKind::SvmPoly: {
            SvmHyper h;
            h.kernel.kind = KernelKind::Poly;
            spec.hyper = h;
            break;
        }
        case ModelKind::SvmSigmoid: {
            SvmHyper h;
            h.kernel.kind = KernelKind::Sigmoid;
            spec.hyper = h;
            break;
        }
        case ModelKind::SvmRbf: {
            SvmHyper h;
            h.kernel.kind = KernelKind::Rbf;
            spec.hyper = h;
            break;
        }
        case ModelKind::Knn:
            spec.hyper = KnnHyper{};
            break;
        case ModelKind::Mlp:
            spec.hyper = MlpHyper{};
            break;
        case ModelKind::LogReg:
            spec.hyper = LogRegHyper{};
            break;
        case ModelKind::RandomForest:
            spec.hyper = RfHyper{};
            break;
        case ModelKind::Xgboost:
            spec.hyper = GbtHyper{};
            break;
    }
    return spec;
}

void ClassifierSpec::validate() const {
    if (const auto* h = std::get_if<SvmHyper>(&hyper)) {
        if (h->kernel.degree < 1) throw ConfigError("svm: polynomial degree must be >= 1");
        if (h->kernel.kind == KernelKind::Rbf && h->kernel.gamma < 0) {
            throw ConfigError("svm: rbf gamma must be positive (or 0 for auto)");
        }
        if (h->c <= 0) throw ConfigError("svm: penalty c must be positive");
        if (h->epoch_cap < 0) throw ConfigError("svm: epoch cap must be nonnegative");
    } else if (const auto* h = std::get_if<KnnHyper>(&hyper)) {
        if (h->k < 1) throw ConfigError("knn: k must be >= 1");
        if (h->leaf_size < 1) throw ConfigError("knn: leaf size must be >= 1");
        if (h->p < 1) throw ConfigError("knn: Minkowski exponent must be >= 1");
    } else if (const auto* h = std::get_if<MlpHyper>(&hyper)) {
        for (int w : h->hidden) {
            if (w < 1) throw ConfigError("mpnn: hidden layer widths must be positive");
        }
        if (h->max_iter < 0) throw ConfigError("mpnn: max_iter must be nonnegative");
        if (h->l2 < 0) throw ConfigError("mpnn: l2 must be nonnegative");
    } else if (const auto* h = std::get_if<LogRegHyper>(&hyper)) {
        if (h->l2 < 0) throw ConfigError("logreg: l2 must be nonnegative");
        if (h->max_iter < 0) throw ConfigError("logreg: max_iter must be nonnegative");
    } else if (const auto* h = std::get_if<RfHyper>(&hyper)) {
        if (h->n_trees < 1) throw ConfigError("random_forest: tree count must be >= 1");
        if (h->min_split < 2) throw ConfigError("random_forest: min_split must be >= 2");
    } else if (const auto* h = std::get_if<GbtHyper>(&hyper)) {
        if (h->rounds < 1) throw ConfigError("xgboost: rounds must be >= 1");
        if (h->eta <= 0) throw ConfigError("xgboost: eta must be positive");
        if (h->lambda < 0) throw ConfigError("xgboost: lambda must be nonnegative");
        if (h->max_depth < 1) throw ConfigError("xgboost: max depth must be >= 1");
    }
}

nlohmann::json ClassifierSpec::hyper_to_json() const {
    json j;
    if (const auto* h = std::get_if<SvmHyper>(&hyper)) {
        static const char* kernel_names[] = {"linear", "poly", "sigmoid", "rbf"};
        j["kernel"] = kernel_names[static_cast<int>(h->kernel.kind)];
        j["degree"] = h->kernel.degree;
        j["r"] = h->kernel.r;
        j["gamma"] = h->kernel.gamma;
        j["c"] = h->c;
        j["epoch_cap"] = h->epoch_cap;
        j["kkt_tol"] = h->kkt_tol;
    } else if (const auto* h = std::get_if<KnnHyper>(&hyper)) {
        static const char* alg_names[] = {"brute", "ball_tree", "kd_tree"};
        j["k"] = h->k;
        j["algorithm"] = alg_names[static_cast<int>(h->algorithm)];
        j["leaf_size"] = h->leaf_size;
        j["p"] = h->p;
    } else if (const auto* h = std::get_if<MlpHyper>(&hyper)) {
        j["hidden"] = h->hidden;
        j["max_iter"] = h->max_iter;
        j["l2"] = h->l2;
    } else if (const auto* h = std::get_if<LogRegHyper>(&hyper)) {
        j["l2"] = h->l2;
        j["max_iter"] = h->max_iter;
    } else if (const auto* h = std::get_if<RfHyper>(&hyper)) {
        j["n_trees"] = h->n_trees;
        j["min_split"] = h->min_split;
        j["bootstrap"] = h->bootstrap;
    } else if (const auto* h = std::get_if<GbtHyper>(&hyper)) {
        j["rounds"] = h->rounds;
        j["eta"] = h->eta;
        j["lambda"] = h->lambda;
        j["gamma"] = h->gamma;
        j["max_depth"] = h->max_depth;
    } else {
        j = json::object();
    }
    return j;
}

void ClassifierSpec::apply_overrides(const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw ConfigError("hyperparameter overrides must be a JSON object");
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        bool handled = false;
        if (key == "seed") {
            seed = v.get<uint64_t>();
            handled = true;
        } else if (auto* h = std::get_if<SvmHyper>(&hyper)) {
            handled = true;
            if (key == "kernel") {
                const std::string name = v.get<std::string>();
                if (name == "linear") h->kernel.kind = KernelKind::Linear;
                else if (name == "poly") h->kernel.kind = KernelKind::Poly;
                else if (name == "sigmoid") h->kernel.kind = KernelKind::Sigmoid;
                else if (name == "rbf") h->kernel.kind = KernelKind::Rbf;
                else throw ConfigError("unknown kernel: " + name);
            } else if (key == "degree") h->kernel.degree = v.get<int>();
            else if (key == "r") h->kernel.r = v.get<double>();
            else if (key == "gamma") h->kernel.gamma = v.get<double>();
            else if (key == "c") h->c = v.get<double>();
            else if (key == "epoch_cap") h->epoch_cap = v.get<int>();
            else if (key == "kkt_tol") h->kkt_tol = v.get<double>();
            else handled = false;
        } else if (auto* h = std::get_if<KnnHyper>(&hyper)) {
            handled = true;
            if (key == "k") h->k = v.get<int>();
            else if (key == "algorithm") {
                const std::string name = v.get<std::string>();
                if (name == "brute") h->algorithm = KnnAlgorithm::Brute;
                else if (name == "ball_tree") h->algorithm = KnnAlgorithm::BallTree;
                else if (name == "kd_tree") h->algorithm = KnnAlgorithm::KdTree;
                else throw ConfigError("unknown knn algorithm: " + name);
            } else if (key == "leaf_size") h->leaf_size = v.get<int>();
            else if (key == "p") h->p = v.get<double>();
            else handled = false;
        } else if (auto* h = std::get_if<MlpHyper>(&hyper)) {
            handled = true;
            if (key == "hidden") h->hidden = v.get<std::vector<int>>();
            else if (key == "max_iter") h->max_iter = v.get<int>();
            else if (key == "l2") h->l2 = v.get<double>();
            else handled = false;
        } else if (auto* h = std::get_if<LogRegHyper>(&hyper)) {
            handled = true;
            if (key == "l2") h->l2 = v.get<double>();
            else if (key == "max_iter") h->max_iter = v.get<int>();
            else handled = false;
        } else if (auto* h = std::get_if<RfHyper>(&hyper)) {
            handled = true;
            if (key == "n_trees") h->n_trees = v.get<int>();
            else if (key == "min_split") h->min_split = v.get<int>();
            else if (key == "bootstrap") h->bootstrap = v.get<bool>();
            else handled = false;
        } else if (auto* h = std::get_if<GbtHyper>(&hyper)) {
            handled = true;
            if (key == "rounds") h->rounds = v.get<int>();
            else if (key == "eta") h->eta = v.get<double>();
            else if (key == "lambda") h->lambda = v.get<double>();
            else if (key == "gamma") h->gamma = v.get<double>();
            else if (key == "max_depth") h->max_depth = v.get<int>();
            else handled = false;
        }
        if (!handled) {
            throw ConfigError("unknown hyperparameter '" + key + "' for model " +
                              model_kind_name(kind));
        }
    }
    validate();
}

double TrainedModel::threshold() const {
    switch (spec_.kind) {
        case ModelKind::MultinomialNb:
        case ModelKind::GaussianNb:
        case ModelKind::BernoulliNb:
        case ModelKind::SvmLinear:
        case ModelKind::SvmPoly:
        case ModelKind::SvmSigmoid:
        case ModelKind::SvmRbf:
        case ModelKind::Xgboost:
            return 0.0;  // margin / log-ratio models
        case ModelKind::Knn:
        case ModelKind::Mlp:
        case ModelKind::LogReg:
        case ModelKind::RandomForest:
            return 0.5;  // probability / vote-fraction models
    }
    return 0.0;
}

void TrainedModel::check_compatible(const FeatureMatrix& X) const {
    if (X.dict_fingerprint != dict_fingerprint_) {
        throw InvalidArgument("incompatible features: matrix was built against a different dictionary");
    }
}

std::vector<double> TrainedModel::decision_scores(const FeatureMatrix& X) const {
    check_compatible(X);
    std::vector<double> scores;
    scores.reserve(X.rows());
    for (const auto& row : X.counts) scores.push_back(score_row(row));
    return scores;
}

std::vector<Label> TrainedModel::predict(const FeatureMatrix& X) const {
    const double t = threshold();
    std::vector<Label> labels;
    for (double s : decision_scores(X)) labels.push_back(s > t ? Label::Spam : Label::Ham);
    return labels;
}

std::string TrainedModel::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["kind"] = model_kind_name(spec_.kind);
    j["seed"] = spec_.seed;
    j["hyperparameters"] = spec_.hyper_to_json();
    j["dictionary_fingerprint"] = hex64(dict_fingerprint_);
    json params;
    serialize_params(params);
    j["parameters"] = params;
    return j.dump(2);
}

void check_fit_preconditions(const FeatureMatrix& X) {
    if (X.rows() == 0) throw TrainingError("degenerate training data: empty matrix");
    bool has_ham = false, has_spam = false;
    for (Label l : X.labels) (l == Label::Spam ? has_spam : has_ham) = true;
    if (!has_ham || !has_spam) {
        throw TrainingError("degenerate training data: only one class present");
    }
}

std::unique_ptr<TrainedModel> fit(const ClassifierSpec& spec, const FeatureMatrix& X) {
    spec.validate();
    check_fit_preconditions(X);
    switch (spec.kind) {
        case ModelKind::MultinomialNb:
        case ModelKind::GaussianNb:
        case ModelKind::BernoulliNb:
            return fit_naive_bayes(spec, X);
        case ModelKind::SvmLinear:
        case ModelKind::SvmPoly:
        case ModelKind::SvmSigmoid:
        case ModelKind::SvmRbf:
            return fit_svm(spec, X);
        case ModelKind::Knn:
            return fit_knn(spec, X);
        case ModelKind::Mlp:
            return fit_mlp(spec, X);
        case ModelKind::LogReg:
            return fit_logreg(spec, X);
        case ModelKind::RandomForest:
            return fit_random_forest(spec, X);
        case ModelKind::Xgboost:
            return fit_gbt(spec, X);
    }
    throw InvalidArgument("unknown model kind");
}

}  // namespace spamlab
