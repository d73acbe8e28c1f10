#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spamlab/corpus.hpp"

namespace spamlab {

struct TokenStream {
    std::string doc_id;
    std::vector<std::string> tokens;
};

/// Crude rule-based lemmatizer: exception table first, then one pass of
/// ordered suffix rules (ies->y, sses->ss, ing->0, ed->0, s->0) with a
/// minimum stem length of 3 and consonant undoubling after ing/ed removal.
class Lemmatizer {
public:
    Lemmatizer() = default;
    static Lemmatizer load(const std::filesystem::path& exception_table);

    std::string lemmatize(const std::string& token) const;

    uint64_t table_hash() const { return table_hash_; }

private:
    std::unordered_map<std::string, std::string> exceptions_;
    uint64_t table_hash_ = 0;
};

struct PrepConfig {
    bool strip_html = true;
    bool remove_stopwords = true;
    bool remove_noise_words = true;
    bool lemmatize = true;
    std::unordered_set<std::string> stop_list;
    std::unordered_set<std::string> noise_words = {"subject", "cc", "to", "enron"};
    Lemmatizer lemmatizer;
    uint64_t stop_list_hash = 0;

    /// Load the stop list and lemma exception table shipped under data/.
    static PrepConfig load(const std::filesystem::path& stop_list_file,
                           const std::filesystem::path& lemma_table_file);

    /// All stages disabled; tokenization only.
    static PrepConfig raw();
};

std::string strip_html(const std::string& raw);

/// Lowercase, split on every non-alphanumeric character, drop empty pieces.
std::vector<std::string> tokenize(const std::string& text);

TokenStream preprocess(const Document& doc, const PrepConfig& cfg);

}  // namespace spamlab
