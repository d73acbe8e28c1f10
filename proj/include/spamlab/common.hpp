#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spamlab {

enum class Label { Ham, Spam };

inline const char* label_name(Label l) { return l == Label::Spam ? "spam" : "ham"; }

// Error taxonomy shared with the C API (codes must stay in sync with spamlab.h).
enum class ErrorCode {
    Unknown = 1,
    Config = 2,
    Corpus = 3,
    Training = 4,
    Numeric = 5,
    Io = 6,
    Invalid = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};
struct CorpusError : Error {
    explicit CorpusError(const std::string& w) : Error(ErrorCode::Corpus, w) {}
};
struct TrainingError : Error {
    explicit TrainingError(const std::string& w) : Error(ErrorCode::Training, w) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorCode::Numeric, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error(ErrorCode::Invalid, w) {}
};

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// shuffling and bounded draws are implemented here because std::shuffle and
// the distribution classes are not bit-stable across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed), base_(seed) {}

    uint64_t next() { return engine_(); }

    // Unbiased draw in [0, n) by rejection.
    uint64_t next_below(uint64_t n) {
        if (n == 0) throw InvalidArgument("Rng::next_below: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1).
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent stream for a named stage, so all randomness flows
    // from one config seed.
    Rng derive(std::string_view stage) const {
        uint64_t h = 1469598103934665603ull;
        for (char c : stage) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return Rng(seed_mix(h));
    }

    static Rng derived(uint64_t seed, std::string_view stage) { return Rng(seed).derive(stage); }

private:
    uint64_t seed_mix(uint64_t h) const {
        // splitmix-style avalanche of (engine seed state, stage hash)
        uint64_t x = base_ ^ h;
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    uint64_t base_ = 0;
};

// FNV-1a 64-bit, used for content hashes and dictionary fingerprints.
inline uint64_t fnv1a(std::string_view data, uint64_t h = 1469598103934665603ull) {
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v);

// Shortest round-trip decimal form; locale-free, so CSV output is byte
// stable across runs and machines.
std::string format_double(double v);

}  // namespace spamlab
