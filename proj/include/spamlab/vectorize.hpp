#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "spamlab/textprep.hpp"

namespace spamlab {

/// Top-N training vocabulary, sorted by frequency descending then word
/// ascending. Immutable after build.
class Dictionary {
public:
    struct Entry {
        std::string word;
        uint64_t frequency;
    };

    Dictionary() = default;
    Dictionary(std::vector<Entry> entries);

    size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::string& word(size_t column) const { return entries_[column].word; }

    /// Column of `word`, or -1 when out of dictionary.
    int column(const std::string& word) const {
        auto it = index_.find(word);
        return it == index_.end() ? -1 : static_cast<int>(it->second);
    }

    /// Stable hash of the ordered word list; used to reject matrices built
    /// against a different dictionary.
    uint64_t fingerprint() const { return fingerprint_; }

    std::string to_csv() const;
    static Dictionary from_csv(const std::string& text);

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> index_;
    uint64_t fingerprint_ = 0;
};

struct FeatureMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::vector<uint32_t>> counts;  // n_docs x dictionary size
    std::vector<Label> labels;
    std::vector<std::string> column_words;
    uint64_t dict_fingerprint = 0;

    size_t rows() const { return counts.size(); }
    size_t cols() const { return counts.empty() ? column_words.size() : counts[0].size(); }

    std::string to_csv() const;
};

Dictionary build_dictionary(const std::vector<TokenStream>& streams, size_t size);

std::vector<uint32_t> vectorize(const TokenStream& stream, const Dictionary& dict);

FeatureMatrix build_matrix(const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                           const Dictionary& dict);

}  // namespace spamlab
