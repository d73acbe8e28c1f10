#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spamlab/common.hpp"

namespace spamlab {

/// One raw email. `raw_text` holds the file bytes with undecodable UTF-8
/// sequences replaced by U+FFFD.
struct Document {
    std::string id;  // "<subset>/<ham|spam>/<filename>", unique within a corpus
    Label label = Label::Ham;
    std::string raw_text;
    std::string subset;
};

struct Corpus {
    std::vector<Document> documents;
    std::map<Label, size_t> class_counts;
    size_t skipped_files = 0;  // unreadable files skipped with a warning

    size_t count(Label l) const {
        auto it = class_counts.find(l);
        return it == class_counts.end() ? 0 : it->second;
    }
    void recount();
};

/// Stratified 70/30-style split plus k CV folds over the train ids.
struct SplitPlan {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::vector<std::vector<std::string>> folds;
    uint64_t seed = 0;

    std::string to_json() const;
    static SplitPlan from_json(const std::string& text);
};

/// Layout: <root>/<subset>/{ham,spam}/*  (one document per file).
Corpus load_corpus(const std::filesystem::path& root);

/// Downsample the majority class to the minority count, seeded and
/// deterministic. Minority class membership is untouched.
Corpus balance(const Corpus& corpus, uint64_t seed);

/// Per-class train size = floor(train_fraction * class size); remainder goes
/// to test. Folds are stratified over the train set, imbalance <= 1 doc.
SplitPlan split(const Corpus& corpus, double train_fraction, int k, uint64_t seed);

}  // namespace spamlab
