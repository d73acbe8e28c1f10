#include "spamlab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace spamlab {

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void Corpus::recount() {
    class_counts.clear();
    for (const auto& d : documents) ++class_counts[d.label];
}

namespace {

// Replace bytes that do not form valid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(const std::string& in) {
    static const std::string replacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    while (i < in.size()) {
        unsigned char c = static_cast<unsigned char>(in[i]);
        size_t len;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        else {
            out += replacement;
            ++i;
            continue;
        }
        if (i + len > in.size()) {
            out += replacement;
            ++i;
            continue;
        }
        bool ok = true;
        for (size_t j = 1; j < len; ++j) {
            if ((static_cast<unsigned char>(in[i + j]) & 0xC0) != 0x80) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.append(in, i, len);
            i += len;
        } else {
            out += replacement;
            ++i;
        }
    }
    return out;
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool dirs_only) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (dirs_only ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Corpus load_corpus(const fs::path& root) {
    if (!fs::exists(root) || !fs::is_directory(root)) {
        throw ConfigError("corpus root does not exist: " + root.string());
    }
    Corpus corpus;
    auto subsets = sorted_entries(root, true);
    if (subsets.empty()) throw CorpusError("corpus root has no subset directories: " + root.string());

    for (const auto& subset_dir : subsets) {
        const std::string subset = subset_dir.filename().string();
        const fs::path ham_dir = subset_dir / "ham";
        const fs::path spam_dir = subset_dir / "spam";
        if (!fs::is_directory(ham_dir) && !fs::is_directory(spam_dir)) {
            throw CorpusError("subset '" + subset + "' has neither ham/ nor spam/ directory");
        }
        for (Label label : {Label::Ham, Label::Spam}) {
            const fs::path dir = label == Label::Ham ? ham_dir : spam_dir;
            if (!fs::is_directory(dir)) continue;
            for (const auto& file : sorted_entries(dir, false)) {
                std::ifstream f(file, std::ios::binary);
                if (!f) {
                    ++corpus.skipped_files;
                    continue;
                }
                std::ostringstream buf;
                buf << f.rdbuf();
                if (f.bad()) {
                    ++corpus.skipped_files;
                    continue;
                }
                Document doc;
                doc.id = subset + "/" + std::string(label_name(label)) + "/" + file.filename().string();
                doc.label = label;
                doc.raw_text = sanitize_utf8(buf.str());
                doc.subset = subset;
                corpus.documents.push_back(std::move(doc));
            }
        }
    }
    if (corpus.documents.empty()) throw CorpusError("no documents found under " + root.string());
    corpus.recount();
    return corpus;
}

Corpus balance(const Corpus& corpus, uint64_t seed) {
    const size_t n_ham = corpus.count(Label::Ham);
    const size_t n_spam = corpus.count(Label::Spam);
    if (n_ham == 0 || n_spam == 0) throw CorpusError("balance requires both classes to be non-empty");
    if (n_ham == n_spam) return corpus;

    const Label majority = n_ham > n_spam ? Label::Ham : Label::Spam;
    const size_t keep = std::min(n_ham, n_spam);

    std::vector<size_t> majority_idx;
    for (size_t i = 0; i < corpus.documents.size(); ++i) {
        if (corpus.documents[i].label == majority) majority_idx.push_back(i);
    }
    Rng rng = Rng(seed).derive("balance");
    rng.shuffle(majority_idx);
    majority_idx.resize(keep);
    std::sort(majority_idx.begin(), majority_idx.end());

    Corpus out;
    out.skipped_files = corpus.skipped_files;
    size_t next = 0;
    for (size_t i = 0; i < corpus.documents.size(); ++i) {
        if (corpus.documents[i].label == majority) {
            if (next < majority_idx.size() && majority_idx[next] == i) {
                out.documents.push_back(corpus.documents[i]);
                ++next;
            }
        } else {
            out.documents.push_back(corpus.documents[i]);
        }
    }
    out.recount();
    return out;
}

SplitPlan split(const Corpus& corpus, double train_fraction, int k, uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train_fraction must lie strictly between 0 and 1");
    }
    if (k < 2) throw InvalidArgument("fold count must be at least 2");

    SplitPlan plan;
    plan.seed = seed;
    plan.folds.resize(static_cast<size_t>(k));

    // Train size = floor(fraction * total), apportioned over classes by
    // largest fractional remainder (tie -> ham). The epsilon guard absorbs
    // the binary representation error of fractions like 0.7.
    auto guarded = [](double x) { return x + std::max(1e-9, x * 1e-9); };
    std::map<Label, std::vector<std::string>> by_class;
    for (const auto& d : corpus.documents) by_class[d.label].push_back(d.id);

    const size_t total = corpus.documents.size();
    const size_t total_train = static_cast<size_t>(guarded(train_fraction * static_cast<double>(total)));
    std::map<Label, size_t> quota;
    std::vector<std::pair<double, Label>> remainders;
    size_t allotted = 0;
    for (Label label : {Label::Ham, Label::Spam}) {
        const double exact = train_fraction * static_cast<double>(by_class[label].size());
        quota[label] = static_cast<size_t>(guarded(exact));
        allotted += quota[label];
        remainders.push_back({exact - static_cast<double>(quota[label]), label});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t i = 0; allotted < total_train && i < remainders.size(); ++i, ++allotted) {
        ++quota[remainders[i].second];
    }

    Rng rng = Rng(seed).derive("split");
    for (Label label : {Label::Ham, Label::Spam}) {
        auto& ids = by_class[label];
        rng.shuffle(ids);
        const size_t n_train = quota[label];
        if (n_train < static_cast<size_t>(k)) {
            throw CorpusError(std::string("class '") + label_name(label) +
                              "' has fewer training documents than folds");
        }
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i < n_train) {
                plan.train_ids.push_back(ids[i]);
                plan.folds[i % static_cast<size_t>(k)].push_back(ids[i]);
            } else {
                plan.test_ids.push_back(ids[i]);
            }
        }
    }
    return plan;
}

std::string SplitPlan::to_json() const {
    json j;
    j["seed"] = seed;
    j["train_ids"] = train_ids;
    j["test_ids"] = test_ids;
    j["folds"] = folds;
    return j.dump(2);
}

SplitPlan SplitPlan::from_json(const std::string& text) {
    json j = json::parse(text);
    SplitPlan plan;
    plan.seed = j.at("seed").get<uint64_t>();
    plan.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    plan.test_ids = j.at("test_ids").get<std::vector<std::string>>();
    plan.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
    return plan;
}

}  // namespace spamlab
