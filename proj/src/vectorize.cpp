#include "spamlab/vectorize.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace spamlab {

Dictionary::Dictionary(std::vector<Entry> entries) : entries_(std::move(entries)) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < entries_.size(); ++i) {
        index_[entries_[i].word] = i;
        h = fnv1a(entries_[i].word, h);
        h = fnv1a("\x1f", h);
    }
    fingerprint_ = h;
}

Dictionary build_dictionary(const std::vector<TokenStream>& streams, size_t size) {
    std::map<std::string, uint64_t> freq;
    for (const auto& s : streams) {
        for (const auto& tok : s.tokens) ++freq[tok];
    }
    if (freq.empty()) throw CorpusError("cannot build a dictionary from an empty vocabulary");

    std::vector<Dictionary::Entry> entries;
    entries.reserve(freq.size());
    for (const auto& [word, count] : freq) entries.push_back({word, count});
    // frequency descending, ties lexicographic ascending (map order preserved
    // by stable_sort)
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
    if (entries.size() > size) entries.resize(size);
    return Dictionary(std::move(entries));
}

std::vector<uint32_t> vectorize(const TokenStream& stream, const Dictionary& dict) {
    if (dict.size() == 0) throw InvalidArgument("vectorize requires a non-empty dictionary");
    std::vector<uint32_t> counts(dict.size(), 0);
    for (const auto& tok : stream.tokens) {
        int col = dict.column(tok);
        if (col >= 0) ++counts[static_cast<size_t>(col)];
    }
    return counts;
}

FeatureMatrix build_matrix(const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                           const Dictionary& dict) {
    if (streams.size() != labels.size()) throw InvalidArgument("streams/labels length mismatch");
    FeatureMatrix m;
    m.dict_fingerprint = dict.fingerprint();
    for (const auto& e : dict.entries()) m.column_words.push_back(e.word);
    m.labels = labels;
    m.row_ids.reserve(streams.size());
    m.counts.reserve(streams.size());
    for (const auto& s : streams) {
        m.row_ids.push_back(s.doc_id);
        m.counts.push_back(vectorize(s, dict));
    }
    return m;
}

std::string Dictionary::to_csv() const {
    std::ostringstream out;
    out << "rank,word,frequency\n";
    for (size_t i = 0; i < entries_.size(); ++i) {
        out << i + 1 << "," << entries_[i].word << "," << entries_[i].frequency << "\n";
    }
    return out.str();
}

Dictionary Dictionary::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string rank, word, freq;
        std::getline(ls, rank, ',');
        std::getline(ls, word, ',');
        std::getline(ls, freq, ',');
        entries.push_back({word, std::stoull(freq)});
    }
    return Dictionary(std::move(entries));
}

std::string FeatureMatrix::to_csv() const {
    std::ostringstream out;
    for (const auto& w : column_words) out << w << ",";
    out << "label\n";
    for (size_t i = 0; i < counts.size(); ++i) {
        for (uint32_t c : counts[i]) out << c << ",";
        out << label_name(labels[i]) << "\n";
    }
    return out.str();
}

}  // namespace spamlab
