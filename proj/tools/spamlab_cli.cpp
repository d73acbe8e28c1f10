#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spamlab.h"

using nlohmann::json;

namespace {

struct Options {
    std::string config_file;
    std::string corpus;
    std::string output;
    std::string stopwords;
    std::string lemma;
    std::vector<std::string> models;
    std::vector<size_t> sizes;
    uint64_t seed = 0;
    size_t dict_size = 200;
    double train_fraction = 0.7;
    int folds = 5;
    int repeats = 20;
    int threads = 1;
    size_t shap_instances = 10;
    int shap_permutations = 30;
    size_t shap_background = 100;
    bool no_strip_html = false;
    bool no_stopwords = false;
    bool no_noise = false;
    bool no_lemmatize = false;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("-c,--config", opt.config_file, "JSON configuration file");
    cmd->add_option("--corpus", opt.corpus, "corpus root directory (or ENRON_CORPUS_DIR)");
    cmd->add_option("-o,--output", opt.output, "output directory");
    cmd->add_option("--seed", opt.seed, "master random seed");
    cmd->add_option("--dict-size", opt.dict_size, "dictionary size");
    cmd->add_option("--train-fraction", opt.train_fraction, "train split fraction");
    cmd->add_option("--folds", opt.folds, "cross-validation folds");
    cmd->add_option("--repeats", opt.repeats, "repeats for the compare subcommand");
    cmd->add_option("--threads", opt.threads, "worker thread cap");
    cmd->add_option("--models", opt.models, "model subset (names, comma separated)")
        ->delimiter(',');
    cmd->add_option("--stopwords", opt.stopwords, "stop word list file");
    cmd->add_option("--lemma-table", opt.lemma, "lemma exception table file");
    cmd->add_option("--shap-instances", opt.shap_instances, "instances to attribute");
    cmd->add_option("--shap-permutations", opt.shap_permutations, "sampling permutations");
    cmd->add_option("--shap-background", opt.shap_background, "background sample size");
    cmd->add_flag("--no-strip-html", opt.no_strip_html, "keep HTML markup");
    cmd->add_flag("--no-stopwords", opt.no_stopwords, "keep stop words");
    cmd->add_flag("--no-noise", opt.no_noise, "keep header/noise tokens");
    cmd->add_flag("--no-lemmatize", opt.no_lemmatize, "skip lemmatization");
}

int load_merged_config(const CLI::App* cmd, const Options& opt, slab_config* cfg) {
    json merged = json::object();
    if (!opt.config_file.empty()) {
        std::ifstream in(opt.config_file);
        if (!in) {
            std::fprintf(stderr, "error: cannot read config file %s\n", opt.config_file.c_str());
            return SLAB_ERR_IO;
        }
        try {
            in >> merged;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "error: %s: %s\n", opt.config_file.c_str(), e.what());
            return SLAB_ERR_CONFIG;
        }
        if (!merged.is_object()) {
            std::fprintf(stderr, "error: %s: config must be a JSON object\n",
                         opt.config_file.c_str());
            return SLAB_ERR_CONFIG;
        }
    }

    auto seen = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (seen("--corpus")) merged["corpus_root"] = opt.corpus;
    if (seen("--output")) merged["output_dir"] = opt.output;
    if (seen("--seed")) merged["seed"] = opt.seed;
    if (seen("--dict-size")) merged["dict_size"] = opt.dict_size;
    if (seen("--train-fraction")) merged["train_fraction"] = opt.train_fraction;
    if (seen("--folds")) merged["folds"] = opt.folds;
    if (seen("--repeats")) merged["repeats"] = opt.repeats;
    if (seen("--threads")) merged["threads"] = opt.threads;
    if (seen("--models")) merged["models"] = opt.models;
    if (seen("--stopwords")) merged["stopword_file"] = opt.stopwords;
    if (seen("--lemma-table")) merged["lemma_file"] = opt.lemma;
    if (seen("--shap-instances")) merged["shap_instances"] = opt.shap_instances;
    if (seen("--shap-permutations")) merged["shap_permutations"] = opt.shap_permutations;
    if (seen("--shap-background")) merged["shap_background"] = opt.shap_background;
    if (seen("--no-strip-html")) merged["strip_html"] = false;
    if (seen("--no-stopwords")) merged["remove_stopwords"] = false;
    if (seen("--no-noise")) merged["remove_noise_words"] = false;
    if (seen("--no-lemmatize")) merged["lemmatize"] = false;

    if (!merged.contains("corpus_root")) {
        if (const char* env = std::getenv("ENRON_CORPUS_DIR")) merged["corpus_root"] = env;
    }

    const int rc = slab_config_load_json(cfg, merged.dump().c_str());
    if (rc != SLAB_OK) std::fprintf(stderr, "error: %s\n", slab_last_error());
    return rc;
}

int report(int rc) {
    if (rc != SLAB_OK) std::fprintf(stderr, "error: %s\n", slab_last_error());
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Text classification laboratory: preprocessing, twelve classifiers, "
                 "evaluation, significance tests and feature attribution"};
    app.require_subcommand(1);

    Options opt;
    auto* run = app.add_subcommand("run", "full pipeline: reports, plots and attributions");
    auto* ablate_f = app.add_subcommand("ablate-features", "sweep dictionary sizes");
    auto* ablate_p = app.add_subcommand("ablate-prep", "raw vs preprocessed comparison");
    auto* compare = app.add_subcommand("compare", "repeated runs with pairwise t-tests");
    auto* explain = app.add_subcommand("explain", "Shapley feature attributions");
    auto* plot = app.add_subcommand("plot", "rebuild SVG plots from existing CSV output");
    for (auto* cmd : {run, ablate_f, ablate_p, compare, explain, plot}) {
        add_common_flags(cmd, opt);
    }
    ablate_f->add_option("--sizes", opt.sizes, "dictionary sizes to sweep")->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    CLI::App* cmd = app.get_subcommands().front();

    slab_config* cfg = slab_config_create();
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return SLAB_ERR_UNKNOWN;
    }
    int rc = load_merged_config(cmd, opt, cfg);
    if (rc == SLAB_OK) {
        if (cmd == run) {
            rc = report(slab_run(cfg));
        } else if (cmd == ablate_f) {
            rc = report(slab_ablate_features(cfg, opt.sizes.empty() ? nullptr : opt.sizes.data(),
                                             opt.sizes.size()));
        } else if (cmd == ablate_p) {
            rc = report(slab_ablate_prep(cfg));
        } else if (cmd == compare) {
            rc = report(slab_compare(cfg));
        } else if (cmd == explain) {
            rc = report(slab_explain(cfg));
        } else {
            rc = report(slab_plot(cfg));
        }
    }
    slab_config_destroy(cfg);
    return rc;
}
