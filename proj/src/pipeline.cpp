#include "spamlab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace spamlab {

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    if (corpus_root.empty()) throw ConfigError("corpus_root is required");
    if (!fs::exists(corpus_root)) throw ConfigError("corpus_root does not exist: " + corpus_root.string());
    if (output_dir.empty()) throw ConfigError("output_dir is required");
    if (dict_size == 0) throw ConfigError("dict_size must be positive");
    if (train_fraction <= 0.0 || train_fraction >= 1.0) {
        throw ConfigError("train_fraction must lie strictly between 0 and 1");
    }
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (repeats < 2) throw ConfigError("repeats must be >= 2");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (shap_instances == 0 || shap_permutations < 1 || shap_background == 0) {
        throw ConfigError("attribution settings must be positive");
    }
    for (const auto& m : models) m.validate();
}

json RunConfig::to_json() const {
    json models_json = json::array();
    for (const auto& m : models) {
        models_json.push_back({{"kind", model_kind_name(m.kind)}, {"hyper", m.hyper_to_json()}});
    }
    return json{{"corpus_root", corpus_root.string()},
                {"output_dir", output_dir.string()},
                {"seed", seed},
                {"dict_size", dict_size},
                {"train_fraction", train_fraction},
                {"folds", folds},
                {"repeats", repeats},
                {"threads", threads},
                {"strip_html", strip_html},
                {"remove_stopwords", remove_stopwords},
                {"remove_noise_words", remove_noise_words},
                {"lemmatize", lemmatize},
                {"stopword_file", stopword_file.string()},
                {"lemma_file", lemma_file.string()},
                {"models", models_json},
                {"shap_instances", shap_instances},
                {"shap_permutations", shap_permutations},
                {"shap_background", shap_background}};
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) {
            try {
                field = j.at(key).get<std::decay_t<decltype(field)>>();
            } catch (const json::exception& e) {
                throw ConfigError(std::string("bad config field '") + key + "': " + e.what());
            }
        }
    };
    std::string corpus_root_s, output_dir_s, stop_s, lemma_s;
    get("corpus_root", corpus_root_s);
    get("output_dir", output_dir_s);
    get("stopword_file", stop_s);
    get("lemma_file", lemma_s);
    if (!corpus_root_s.empty()) cfg.corpus_root = corpus_root_s;
    if (!output_dir_s.empty()) cfg.output_dir = output_dir_s;
    cfg.stopword_file = stop_s;
    cfg.lemma_file = lemma_s;
    get("seed", cfg.seed);
    get("dict_size", cfg.dict_size);
    get("train_fraction", cfg.train_fraction);
    get("folds", cfg.folds);
    get("repeats", cfg.repeats);
    get("threads", cfg.threads);
    get("strip_html", cfg.strip_html);
    get("remove_stopwords", cfg.remove_stopwords);
    get("remove_noise_words", cfg.remove_noise_words);
    get("lemmatize", cfg.lemmatize);
    get("shap_instances", cfg.shap_instances);
    get("shap_permutations", cfg.shap_permutations);
    get("shap_background", cfg.shap_background);

    if (j.contains("models")) {
        if (!j.at("models").is_array()) throw ConfigError("models must be an array");
        for (const auto& m : j.at("models")) {
            std::string name = m.is_string() ? m.get<std::string>() : m.value("kind", "");
            auto kind = model_kind_from_name(name);
            if (!kind) throw ConfigError("unknown model kind: " + name);
            ClassifierSpec spec = ClassifierSpec::defaults(*kind, cfg.seed);
            if (m.is_object() && m.contains("hyper")) spec.apply_overrides(m.at("hyper"));
            cfg.models.push_back(std::move(spec));
        }
    }
    return cfg;
}

std::vector<ClassifierSpec> RunConfig::resolved_models() const {
    if (!models.empty()) {
        std::vector<ClassifierSpec> out = models;
        for (auto& m : out) m.seed = seed;
        return out;
    }
    std::vector<ClassifierSpec> out;
    for (ModelKind kind : all_model_kinds()) out.push_back(ClassifierSpec::defaults(kind, seed));
    return out;
}

PrepConfig RunConfig::prep_config() const {
    PrepConfig prep;
    if (!stopword_file.empty() || !lemma_file.empty()) {
        prep = PrepConfig::load(stopword_file, lemma_file);
    }
    prep.strip_html = strip_html;
    prep.remove_stopwords = remove_stopwords;
    prep.remove_noise_words = remove_noise_words;
    prep.lemmatize = lemmatize;
    return prep;
}

namespace {

// output of pipeline stages a to d, shared by every entry point
struct PreparedData {
    Corpus corpus;
    SplitPlan plan;
    std::vector<TokenStream> streams;  // aligned with corpus.documents
    std::vector<Label> labels;
    PrepConfig prep;
};

PreparedData prepare(const RunConfig& cfg, uint64_t split_seed, const PrepConfig& prep) {
    PreparedData data;
    data.prep = prep;
    data.corpus = balance(load_corpus(cfg.corpus_root), split_seed);
    data.plan = split(data.corpus, cfg.train_fraction, cfg.folds, split_seed);
    data.streams.reserve(data.corpus.documents.size());
    data.labels.reserve(data.corpus.documents.size());
    for (const auto& doc : data.corpus.documents) {
        data.streams.push_back(preprocess(doc, data.prep));
        data.labels.push_back(doc.label);
    }
    return data;
}

PreparedData prepare(const RunConfig& cfg) { return prepare(cfg, cfg.seed, cfg.prep_config()); }

std::vector<size_t> ids_to_indices(const std::vector<std::string>& ids,
                                   const std::vector<TokenStream>& streams) {
    std::vector<size_t> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        auto it = std::find_if(streams.begin(), streams.end(),
                               [&](const TokenStream& s) { return s.doc_id == id; });
        if (it == streams.end()) throw InvalidArgument("unknown document id " + id);
        out.push_back(static_cast<size_t>(it - streams.begin()));
    }
    return out;
}

struct TrainTest {
    Dictionary dict;
    FeatureMatrix train;
    FeatureMatrix test;
    std::vector<std::string> test_ids;
};

// dictionary and matrices for the 70/30 split, train-side vocabulary only
TrainTest build_split_matrices(const PreparedData& data, size_t dict_size) {
    TrainTest tt;
    std::vector<TokenStream> train_streams, test_streams;
    std::vector<Label> train_labels, test_labels;
    for (size_t idx : ids_to_indices(data.plan.train_ids, data.streams)) {
        train_streams.push_back(data.streams[idx]);
        train_labels.push_back(data.labels[idx]);
    }
    for (size_t idx : ids_to_indices(data.plan.test_ids, data.streams)) {
        test_streams.push_back(data.streams[idx]);
        test_labels.push_back(data.labels[idx]);
        tt.test_ids.push_back(data.streams[idx].doc_id);
    }
    tt.dict = build_dictionary(train_streams, dict_size);
    tt.train = build_matrix(train_streams, train_labels, tt.dict);
    tt.test = build_matrix(test_streams, test_labels, tt.dict);
    return tt;
}

std::string metrics_csv(const std::vector<ModelReport>& models) {
    std::ostringstream out;
    out << "model,fold,precision,recall,fscore,auc\n";
    for (const auto& m : models) {
        for (size_t f = 0; f < m.folds.folds.size(); ++f) {
            const auto& fm = m.folds.folds[f];
            out << m.model << ',' << f << ',' << opt_field(fm.precision) << ','
                << opt_field(fm.recall) << ',' << opt_field(fm.fscore) << ','
                << format_double(fm.auc) << '\n';
        }
        out << m.model << ",mean," << opt_field(m.folds.precision_summary().mean) << ','
            << opt_field(m.folds.recall_summary().mean) << ','
            << opt_field(m.folds.fscore_summary().mean) << ','
            << opt_field(m.folds.auc_summary().mean) << '\n';
        out << m.model << ",std," << opt_field(m.folds.precision_summary().stddev) << ','
            << opt_field(m.folds.recall_summary().stddev) << ','
            << opt_field(m.folds.fscore_summary().stddev) << ','
            << opt_field(m.folds.auc_summary().stddev) << '\n';
    }
    return out.str();
}

std::string timing_csv(const std::vector<ModelReport>& models) {
    std::ostringstream out;
    out << "model,fold,predict_seconds\n";
    for (const auto& m : models) {
        for (size_t f = 0; f < m.folds.folds.size(); ++f) {
            out << m.model << ',' << f << ',' << format_double(m.folds.folds[f].predict_seconds)
                << '\n';
        }
        out << m.model << ",mean," << opt_field(m.folds.time_summary().mean) << '\n';
        out << m.model << ",std," << opt_field(m.folds.time_summary().stddev) << '\n';
    }
    return out.str();
}

std::string roc_csv(const MeanRoc& roc) {
    std::ostringstream out;
    out << "fpr,tpr_mean,tpr_std,auc_mean,auc_std\n";
    for (size_t i = 0; i < roc.fpr_grid.size(); ++i) {
        out << format_double(roc.fpr_grid[i]) << ',' << format_double(roc.mean_tpr[i]) << ','
            << format_double(roc.std_tpr[i]) << ',' << format_double(roc.mean_auc) << ','
            << format_double(roc.std_auc) << '\n';
    }
    return out.str();
}

SignificanceMatrix fold_significance(const std::vector<ModelReport>& models) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> scores;
    for (const auto& m : models) {
        names.push_back(m.model);
        std::vector<double> fs;
        for (const auto& f : m.folds.folds) fs.push_back(f.fscore.value_or(0.0));
        scores.push_back(std::move(fs));
    }
    return compare_all(names, scores);
}

struct ShapOutput {
    std::string per_instance_csv;
    std::string ranking_csv;
    std::vector<std::string> ranked_words;
};

ShapOutput run_shap(const RunConfig& cfg, const TrainedModel& model, const TrainTest& tt) {
    const Background bg = sample_background(tt.train, cfg.shap_background, cfg.seed);

    std::vector<size_t> candidates(tt.test.rows());
    std::iota(candidates.begin(), candidates.end(), 0);
    Rng rng = Rng::derived(cfg.seed, "shap-instances");
    rng.shuffle(candidates);
    candidates.resize(std::min(cfg.shap_instances, candidates.size()));
    std::sort(candidates.begin(), candidates.end());

    std::vector<AttributionSet> sets;
    std::vector<std::vector<uint32_t>> instances;
    for (size_t idx : candidates) {
        AttributionSet a = shapley_sample(model, tt.test.counts[idx], bg, cfg.shap_permutations,
                                          cfg.seed + idx);
        a.instance_id = tt.test.row_ids[idx];
        sets.push_back(std::move(a));
        instances.push_back(tt.test.counts[idx]);
    }
    const FeatureRanking ranking = summary_ranking(sets, instances, 10);

    ShapOutput out;
    std::ostringstream per_instance;
    per_instance << "instance,feature,value,feature_count\n";
    for (const auto& pt : ranking.scatter) {
        per_instance << sets[pt.instance].instance_id << ',' << tt.dict.word(pt.feature) << ','
                     << format_double(pt.attribution) << ',' << pt.feature_count << '\n';
    }
    out.per_instance_csv = per_instance.str();

    std::ostringstream ranks;
    ranks << "rank,feature,mean_abs_attribution\n";
    for (size_t r = 0; r < ranking.ranked.size(); ++r) {
        const auto& e = ranking.ranked[r];
        ranks << (r + 1) << ',' << tt.dict.word(e.feature) << ','
              << format_double(e.mean_abs_attribution) << '\n';
        out.ranked_words.push_back(tt.dict.word(e.feature));
    }
    out.ranking_csv = ranks.str();
    return out;
}

// per-model mean fscore on a held-out matrix
double holdout_fscore(const TrainedModel& model, const FeatureMatrix& test) {
    const auto preds = model.predict(test);
    const Confusion c = confusion(test.labels, preds);
    return fscore(c).value_or(0.0);
}

class StageGuard {
public:
    StageGuard(fs::path output_dir) : output_dir_(std::move(output_dir)) {}

    template <typename F>
    auto run(const std::string& stage, F&& f) {
        try {
            return f();
        } catch (...) {
            std::ofstream marker(output_dir_ / "FAILED");
            marker << stage << '\n';
            throw;
        }
    }

private:
    fs::path output_dir_;
};

}  // namespace

ReportBundle run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    const auto wall_start = std::chrono::steady_clock::now();

    fs::create_directories(cfg.output_dir);
    fs::create_directories(cfg.output_dir / "roc");
    fs::create_directories(cfg.output_dir / "shap");
    fs::create_directories(cfg.output_dir / "models");
    fs::remove(cfg.output_dir / "FAILED");
    StageGuard guard(cfg.output_dir);

    ReportBundle bundle;
    bundle.config = cfg;

    const PreparedData data = guard.run("prepare", [&] { return prepare(cfg); });
    const TrainTest tt =
        guard.run("vectorize", [&] { return build_split_matrices(data, cfg.dict_size); });

    auto record = [&](const fs::path& rel, const std::string& content) {
        write_file(cfg.output_dir / rel, content);
        bundle.artifacts.push_back(rel);
    };

    const auto specs = cfg.resolved_models();
    guard.run("evaluate", [&] {
        for (const auto& spec : specs) {
            ModelReport report;
            report.model = model_kind_name(spec.kind);
            report.folds = cross_validate(spec, data.plan, data.streams, data.labels, cfg.dict_size,
                                          cfg.threads);
            report.roc = mean_roc(report.folds.curves);
            bundle.models.push_back(std::move(report));
        }
    });

    guard.run("write-metrics", [&] {
        record("metrics.csv", metrics_csv(bundle.models));
        record("timing.csv", timing_csv(bundle.models));
        for (const auto& m : bundle.models) {
            record(fs::path("roc") / (m.model + ".csv"), roc_csv(m.roc));
        }
    });

    guard.run("significance", [&] {
        if (bundle.models.size() >= 2) {
            bundle.significance = fold_significance(bundle.models);
            record("significance.csv", significance_to_csv(bundle.significance));
        }
    });

    guard.run("explain", [&] {
        for (const auto& spec : specs) {
            const auto model = fit(spec, tt.train);
            record(fs::path("models") / (std::string(model_kind_name(spec.kind)) + ".json"),
                   model->to_json());
            const ShapOutput shap = run_shap(cfg, *model, tt);
            record(fs::path("shap") / (std::string(model_kind_name(spec.kind)) + ".csv"),
                   shap.per_instance_csv);
            record(fs::path("shap") / (std::string(model_kind_name(spec.kind)) + "_ranking.csv"),
                   shap.ranking_csv);
        }
    });

    guard.run("plot", [&] {
        record("roc.svg", roc_svg(bundle.models));
        record("summary.svg", summary_svg(bundle.models));
    });

    guard.run("report", [&] {
        json manifest = json::array();
        for (const auto& rel : bundle.artifacts) {
            manifest.push_back({{"path", rel.generic_string()},
                                {"fnv1a64", hex64(fnv1a(read_file(cfg.output_dir / rel)))}});
        }
        bundle.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        json report{{"schema_version", 1},
                    {"config", cfg.to_json()},
                    {"config_hash", hex64(fnv1a(cfg.to_json().dump()))},
                    {"data_assets",
                     {{"stop_list_hash", hex64(data.prep.stop_list_hash)},
                      {"lemma_table_hash", hex64(data.prep.lemmatizer.table_hash())},
                      {"dictionary_fingerprint", hex64(tt.dict.fingerprint())}}},
                    {"class_counts",
                     {{"ham", data.corpus.count(Label::Ham)}, {"spam", data.corpus.count(Label::Spam)}}},
                    {"wall_seconds", bundle.wall_seconds},
                    {"artifacts", manifest}};
        write_file(cfg.output_dir / "report.json", report.dump(2) + "\n");
        bundle.artifacts.push_back("report.json");
    });

    return bundle;
}

std::vector<FeatureAblationRow> ablate_features(const RunConfig& cfg, std::vector<size_t> sizes) {
    cfg.validate();
    if (sizes.empty()) throw ConfigError("ablate_features: at least one size required");
    fs::create_directories(cfg.output_dir);

    const PreparedData data = prepare(cfg);
    const auto specs = cfg.resolved_models();

    std::vector<FeatureAblationRow> rows;
    for (size_t size : sizes) {
        double fsum = 0.0, tsum = 0.0;
        for (const auto& spec : specs) {
            const FoldReport report =
                cross_validate(spec, data.plan, data.streams, data.labels, size, cfg.threads);
            const double f = report.fscore_summary().mean.value_or(0.0);
            const double t = report.time_summary().mean.value_or(0.0);
            rows.push_back({size, model_kind_name(spec.kind), f, t});
            fsum += f;
            tsum += t;
        }
        rows.push_back({size, "all", fsum / static_cast<double>(specs.size()),
                        tsum / static_cast<double>(specs.size())});
    }

    std::ostringstream out;
    out << "dict_size,model,fscore_mean,predict_seconds_mean\n";
    for (const auto& r : rows) {
        out << r.dict_size << ',' << r.model << ',' << format_double(r.fscore_mean) << ','
            << format_double(r.predict_seconds_mean) << '\n';
    }
    write_file(cfg.output_dir / "ablation_features.csv", out.str());
    return rows;
}

std::vector<PrepAblationRow> ablate_preprocessing(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);

    const PreparedData on = prepare(cfg, cfg.seed, cfg.prep_config());
    const PreparedData off = prepare(cfg, cfg.seed, PrepConfig::raw());
    const auto specs = cfg.resolved_models();

    std::vector<PrepAblationRow> rows;
    for (const auto& spec : specs) {
        const double f_on = cross_validate(spec, on.plan, on.streams, on.labels, cfg.dict_size,
                                           cfg.threads, false)
                                .fscore_summary()
                                .mean.value_or(0.0);
        const double f_off = cross_validate(spec, off.plan, off.streams, off.labels, cfg.dict_size,
                                            cfg.threads, false)
                                 .fscore_summary()
                                 .mean.value_or(0.0);
        const double ratio =
            f_off > 0.0 ? f_on / f_off : std::numeric_limits<double>::infinity();
        rows.push_back({model_kind_name(spec.kind), f_on, f_off, ratio});
    }

    std::ostringstream out;
    out << "model,fscore_preprocessed,fscore_raw,ratio\n";
    for (const auto& r : rows) {
        out << r.model << ',' << format_double(r.fscore_on) << ',' << format_double(r.fscore_off)
            << ',' << format_double(r.ratio) << '\n';
    }
    write_file(cfg.output_dir / "ablation_prep.csv", out.str());
    return rows;
}

SignificanceMatrix compare_models(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);

    const auto specs = cfg.resolved_models();
    if (specs.size() < 2) throw ConfigError("compare needs at least two models");
    const PrepConfig prep = cfg.prep_config();

    std::vector<std::string> names;
    for (const auto& spec : specs) names.push_back(model_kind_name(spec.kind));
    std::vector<std::vector<double>> scores(specs.size());

    for (int r = 0; r < cfg.repeats; ++r) {
        // fresh split per repeat, shared by every model so pairs stay paired
        const uint64_t repeat_seed = Rng::derived(cfg.seed, "repeat-" + std::to_string(r)).next();
        const PreparedData data = prepare(cfg, repeat_seed, prep);
        const TrainTest tt = build_split_matrices(data, cfg.dict_size);
        for (size_t m = 0; m < specs.size(); ++m) {
            ClassifierSpec spec = specs[m];
            spec.seed = repeat_seed;
            const auto model = fit(spec, tt.train);
            scores[m].push_back(holdout_fscore(*model, tt.test));
        }
    }

    std::ostringstream repeat_csv;
    repeat_csv << "model,repeat,fscore\n";
    for (size_t m = 0; m < names.size(); ++m) {
        for (int r = 0; r < cfg.repeats; ++r) {
            repeat_csv << names[m] << ',' << r << ',' << format_double(scores[m][r]) << '\n';
        }
    }
    write_file(cfg.output_dir / "repeat_scores.csv", repeat_csv.str());

    const SignificanceMatrix matrix = compare_all(names, scores);
    write_file(cfg.output_dir / "significance.csv", significance_to_csv(matrix));
    return matrix;
}

void explain_models(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir / "shap");

    const PreparedData data = prepare(cfg);
    const TrainTest tt = build_split_matrices(data, cfg.dict_size);
    for (const auto& spec : cfg.resolved_models()) {
        const auto model = fit(spec, tt.train);
        const ShapOutput shap = run_shap(cfg, *model, tt);
        write_file(cfg.output_dir / "shap" / (std::string(model_kind_name(spec.kind)) + ".csv"),
                   shap.per_instance_csv);
        write_file(
            cfg.output_dir / "shap" / (std::string(model_kind_name(spec.kind)) + "_ranking.csv"),
            shap.ranking_csv);
    }
}

namespace {

// minimal CSV row splitter for our own comma-free fields
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

void plot_outputs(const RunConfig& cfg) {
    if (cfg.output_dir.empty() || !fs::exists(cfg.output_dir)) {
        throw ConfigError("plot: output_dir does not exist");
    }

    std::vector<ModelReport> models;

    // reconstruct mean curves from roc/<model>.csv
    if (fs::exists(cfg.output_dir / "roc")) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(cfg.output_dir / "roc")) {
            if (entry.path().extension() == ".csv") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            ModelReport report;
            report.model = file.stem().string();
            const auto rows = parse_csv(read_file(file));
            for (size_t i = 1; i < rows.size(); ++i) {
                report.roc.fpr_grid.push_back(std::stod(rows[i][0]));
                report.roc.mean_tpr.push_back(std::stod(rows[i][1]));
                report.roc.std_tpr.push_back(std::stod(rows[i][2]));
                report.roc.mean_auc = std::stod(rows[i][3]);
                report.roc.std_auc = std::stod(rows[i][4]);
            }
            models.push_back(std::move(report));
        }
    }
    if (models.empty()) throw ConfigError("plot: no roc/<model>.csv files in output_dir");

    // fscore mean/std rows from metrics.csv
    const auto metric_rows = parse_csv(read_file(cfg.output_dir / "metrics.csv"));
    for (auto& m : models) {
        for (size_t i = 1; i < metric_rows.size(); ++i) {
            if (metric_rows[i][0] != m.model) continue;
            FoldMetrics fm;
            if (metric_rows[i][1] != "mean" && metric_rows[i][1] != "std") {
                if (!metric_rows[i][4].empty()) fm.fscore = std::stod(metric_rows[i][4]);
                fm.auc = std::stod(metric_rows[i][5]);
                m.folds.folds.push_back(fm);
            }
        }
    }

    write_file(cfg.output_dir / "roc.svg", roc_svg(models));
    write_file(cfg.output_dir / "summary.svg", summary_svg(models));
}

namespace {

const char* palette(size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};
    return colors[i % 12];
}

double plot_x(double fpr) { return 70.0 + fpr * 690.0; }
double plot_y(double tpr) { return 560.0 - tpr * 520.0; }

}  // namespace

std::string roc_svg(const std::vector<ModelReport>& models) {
    if (models.empty()) throw InvalidArgument("roc_svg: at least one curve required");

    std::vector<size_t> order(models.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return models[a].roc.mean_auc > models[b].roc.mean_auc;
    });

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"70\" y1=\"560\" x2=\"760\" y2=\"560\" stroke=\"black\"/>\n";
    svg << "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"560\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        svg << "<text x=\"" << plot_x(v) << "\" y=\"578\" font-size=\"12\" "
               "text-anchor=\"middle\">" << fixed2(v).substr(0, 3) << "</text>\n";
        svg << "<text x=\"62\" y=\"" << plot_y(v) + 4 << "\" font-size=\"12\" "
               "text-anchor=\"end\">" << fixed2(v).substr(0, 3) << "</text>\n";
    }
    svg << "<text x=\"415\" y=\"596\" font-size=\"14\" text-anchor=\"middle\">"
           "False positive rate</text>\n";
    svg << "<text x=\"20\" y=\"300\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 300)\">True positive rate</text>\n";

    // chance diagonal
    svg << "<line x1=\"" << plot_x(0) << "\" y1=\"" << plot_y(0) << "\" x2=\"" << plot_x(1)
        << "\" y2=\"" << plot_y(1) << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";

    for (size_t rank = 0; rank < order.size(); ++rank) {
        const ModelReport& m = models[order[rank]];
        const char* color = palette(rank);

        // +/- 1 std band
        std::ostringstream band;
        for (size_t i = 0; i < m.roc.fpr_grid.size(); ++i) {
            band << plot_x(m.roc.fpr_grid[i]) << ','
                 << plot_y(std::min(1.0, m.roc.mean_tpr[i] + m.roc.std_tpr[i])) << ' ';
        }
        for (size_t i = m.roc.fpr_grid.size(); i-- > 0;) {
            band << plot_x(m.roc.fpr_grid[i]) << ','
                 << plot_y(std::max(0.0, m.roc.mean_tpr[i] - m.roc.std_tpr[i])) << ' ';
        }
        svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
            << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

        std::ostringstream line;
        for (size_t i = 0; i < m.roc.fpr_grid.size(); ++i) {
            line << plot_x(m.roc.fpr_grid[i]) << ',' << plot_y(m.roc.mean_tpr[i]) << ' ';
        }
        svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
    }

    // legend, descending mean AUC
    const double legend_x = 470.0;
    double legend_y = 360.0;
    svg << "<rect x=\"" << legend_x - 10 << "\" y=\"" << legend_y - 18 << "\" width=\"295\" height=\""
        << models.size() * 16 + 26 << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
    for (size_t rank = 0; rank < order.size(); ++rank) {
        const ModelReport& m = models[order[rank]];
        svg << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y - 4 << "\" x2=\""
            << legend_x + 24 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << palette(rank)
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << legend_x + 32 << "\" y=\"" << legend_y
            << "\" font-size=\"12\">" << m.model << " AUC = " << fixed2(m.roc.mean_auc)
            << " &#177; " << fixed2(m.roc.std_auc) << "</text>\n";
        legend_y += 16.0;
    }

    svg << "</svg>\n";
    return svg.str();
}

std::string summary_svg(const std::vector<ModelReport>& models) {
    if (models.empty()) throw InvalidArgument("summary_svg: at least one model required");

    struct Bar {
        std::string name;
        double mean;
        double stddev;
    };
    std::vector<Bar> bars;
    for (const auto& m : models) {
        bars.push_back({m.model, m.folds.fscore_summary().mean.value_or(0.0),
                        m.folds.fscore_summary().stddev.value_or(0.0)});
    }
    std::stable_sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) { return a.mean > b.mean; });

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<line x1=\"70\" y1=\"520\" x2=\"760\" y2=\"520\" stroke=\"black\"/>\n";
    svg << "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"520\" stroke=\"black\"/>\n";
    svg << "<text x=\"20\" y=\"280\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 280)\">Mean F-score</text>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        const double y = 520.0 - v * 480.0;
        svg << "<text x=\"62\" y=\"" << y + 4 << "\" font-size=\"12\" text-anchor=\"end\">"
            << fixed2(v).substr(0, 3) << "</text>\n";
    }

    const double width = 690.0 / static_cast<double>(bars.size());
    for (size_t i = 0; i < bars.size(); ++i) {
        const double x = 70.0 + width * static_cast<double>(i) + width * 0.15;
        const double w = width * 0.7;
        const double h = bars[i].mean * 480.0;
        svg << "<rect x=\"" << x << "\" y=\"" << 520.0 - h << "\" width=\"" << w << "\" height=\""
            << h << "\" fill=\"" << palette(i) << "\"/>\n";
        // error bar
        const double cx = x + w / 2.0;
        const double y_lo = 520.0 - std::max(0.0, bars[i].mean - bars[i].stddev) * 480.0;
        const double y_hi = 520.0 - std::min(1.0, bars[i].mean + bars[i].stddev) * 480.0;
        svg << "<line x1=\"" << cx << "\" y1=\"" << y_lo << "\" x2=\"" << cx << "\" y2=\"" << y_hi
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << cx << "\" y=\"555\" font-size=\"11\" text-anchor=\"end\" "
               "transform=\"rotate(-40 " << cx << " 555)\">" << bars[i].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace spamlab
