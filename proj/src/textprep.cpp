#include "spamlab/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace spamlab {

namespace {

bool is_ascii_alnum(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
}

bool is_ascii_alpha(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool has_vowel(const std::string& s) {
    return s.find_first_of("aeiouy") != std::string::npos;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open data file: " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace

std::string strip_html(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '<') {
            // Tag syntax: '<' then optional '/', then a letter, or "<!".
            size_t j = i + 1;
            bool taglike = false;
            if (j < raw.size()) {
                if (raw[j] == '!') taglike = true;
                else {
                    if (raw[j] == '/') ++j;
                    taglike = j < raw.size() && is_ascii_alpha(raw[j]);
                }
            }
            if (taglike) {
                size_t close = raw.find('>', i + 1);
                if (close != std::string::npos) {
                    i = close + 1;
                    continue;
                }
            }
            out += c;
            ++i;
        } else if (c == '&') {
            static const std::pair<const char*, const char*> entities[] = {
                {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&nbsp;", " "},
            };
            bool replaced = false;
            for (const auto& [name, repl] : entities) {
                size_t len = std::char_traits<char>::length(name);
                if (raw.compare(i, len, name) == 0) {
                    out += repl;
                    i += len;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) {
                out += c;
                ++i;
            }
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_ascii_alnum(c)) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Lemmatizer Lemmatizer::load(const std::filesystem::path& exception_table) {
    const std::string content = read_file(exception_table);
    Lemmatizer lem;
    lem.table_hash_ = fnv1a(content);
    std::istringstream lines(content);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string inflected, base;
        ls >> inflected >> base;
        if (inflected.empty()) continue;
        if (base.empty()) base = inflected;  // identity entry
        lem.exceptions_[inflected] = base;
    }
    return lem;
}

std::string Lemmatizer::lemmatize(const std::string& token) const {
    auto it = exceptions_.find(token);
    if (it != exceptions_.end()) return it->second;

    const size_t n = token.size();
    auto ends_with = [&](const char* suf) {
        size_t len = std::char_traits<char>::length(suf);
        return n >= len && token.compare(n - len, len, suf) == 0;
    };
    // Undouble a trailing consonant pair after ing/ed removal (run[n]->run),
    // except l/s/z (fall, miss, buzz); restore a trailing 'e' for stems whose
    // base form almost always carries one (hous->house, amaz->amaze).
    auto repair = [&](std::string stem) {
        if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
            !is_vowel(stem.back()) && stem.back() != 'l' && stem.back() != 's' && stem.back() != 'z') {
            stem.pop_back();
        } else if (!stem.empty() && std::string("sczvu").find(stem.back()) != std::string::npos &&
                   !(stem.size() >= 2 && stem[stem.size() - 2] == stem.back())) {
            stem += 'e';
        }
        return stem;
    };

    std::vector<std::string> candidates;
    if (ends_with("ies")) candidates.push_back(token.substr(0, n - 3) + "y");
    if (ends_with("sses")) candidates.push_back(token.substr(0, n - 2));
    if (ends_with("ing") && n > 3) candidates.push_back(repair(token.substr(0, n - 3)));
    if (ends_with("ed") && n > 2) candidates.push_back(repair(token.substr(0, n - 2)));
    if (ends_with("s") && !ends_with("ss")) candidates.push_back(token.substr(0, n - 1));

    for (const auto& cand : candidates) {
        if (cand.size() < 3 || !has_vowel(cand)) continue;
        // A rule only applies when its output is itself stable, which keeps
        // the whole map idempotent.
        if (lemmatize(cand) == cand) return cand;
    }
    return token;
}

PrepConfig PrepConfig::load(const std::filesystem::path& stop_list_file,
                            const std::filesystem::path& lemma_table_file) {
    PrepConfig cfg;
    const std::string content = read_file(stop_list_file);
    cfg.stop_list_hash = fnv1a(content);
    std::istringstream lines(content);
    std::string line;
    while (std::getline(lines, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        cfg.stop_list.insert(line);
    }
    cfg.lemmatizer = Lemmatizer::load(lemma_table_file);
    return cfg;
}

PrepConfig PrepConfig::raw() {
    PrepConfig cfg;
    cfg.strip_html = false;
    cfg.remove_stopwords = false;
    cfg.remove_noise_words = false;
    cfg.lemmatize = false;
    return cfg;
}

TokenStream preprocess(const Document& doc, const PrepConfig& cfg) {
    TokenStream stream;
    stream.doc_id = doc.id;
    const std::string text = cfg.strip_html ? strip_html(doc.raw_text) : doc.raw_text;
    for (auto& tok : tokenize(text)) {
        if (cfg.remove_noise_words) {
            if (tok.size() < 2 || all_digits(tok)) continue;
            if (cfg.noise_words.count(tok)) continue;
        }
        if (cfg.remove_stopwords && cfg.stop_list.count(tok)) continue;
        stream.tokens.push_back(cfg.lemmatize ? cfg.lemmatizer.lemmatize(tok) : std::move(tok));
    }
    return stream;
}

}  // namespace spamlab
