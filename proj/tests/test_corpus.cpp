#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "spamlab/corpus.hpp"

using namespace spamlab;
namespace fs = std::filesystem;

namespace {

struct TempCorpusDir {
    fs::path root;

    TempCorpusDir() {
        root = fs::temp_directory_path() /
               ("corpus_test_" + std::to_string(Rng(std::random_device{}()).next()));
        fs::create_directories(root);
    }
    ~TempCorpusDir() { fs::remove_all(root); }

    void add(const std::string& subset, const std::string& cls, const std::string& name,
             const std::string& text) {
        fs::create_directories(root / subset / cls);
        std::ofstream(root / subset / cls / name, std::ios::binary) << text;
    }
};

Corpus synthetic_corpus(size_t n_ham, size_t n_spam) {
    Corpus c;
    for (size_t i = 0; i < n_ham; ++i) {
        c.documents.push_back({"s/ham/" + std::to_string(i), Label::Ham, "", "s"});
    }
    for (size_t i = 0; i < n_spam; ++i) {
        c.documents.push_back({"s/spam/" + std::to_string(i), Label::Spam, "", "s"});
    }
    c.recount();
    return c;
}

std::set<std::string> id_set(const std::vector<std::string>& ids) {
    return std::set<std::string>(ids.begin(), ids.end());
}

std::set<std::string> membership(const Corpus& c) {
    std::set<std::string> out;
    for (const auto& d : c.documents) out.insert(d.id);
    return out;
}

}  // namespace

TEST_CASE("load_corpus counts files per class") {
    TempCorpusDir dir;
    dir.add("set1", "ham", "a.txt", "hello there");
    dir.add("set1", "ham", "b.txt", "meeting today");
    dir.add("set1", "spam", "c.txt", "win cash");
    dir.add("set1", "spam", "d.txt", "free money");
    dir.add("set1", "spam", "e.txt", "click now");

    const Corpus c = load_corpus(dir.root);
    CHECK(c.count(Label::Ham) == 2);
    CHECK(c.count(Label::Spam) == 3);
    CHECK(c.documents.size() == 5);
    CHECK(c.skipped_files == 0);

    std::set<std::string> ids;
    for (const auto& d : c.documents) {
        CHECK(ids.insert(d.id).second);  // ids unique
        CHECK(d.subset == "set1");
    }
}

TEST_CASE("load_corpus error paths") {
    CHECK_THROWS_AS(load_corpus("/definitely/not/a/path"), ConfigError);

    TempCorpusDir empty;
    CHECK_THROWS_AS(load_corpus(empty.root), CorpusError);

    TempCorpusDir bad;
    fs::create_directories(bad.root / "set1" / "other");
    CHECK_THROWS_AS(load_corpus(bad.root), CorpusError);
}

TEST_CASE("load_corpus replaces undecodable bytes") {
    TempCorpusDir dir;
    dir.add("s", "ham", "a.txt", std::string("ok \xFF\xFE bytes"));
    dir.add("s", "spam", "b.txt", "fine");
    const Corpus c = load_corpus(dir.root);
    const auto& text = c.documents[0].raw_text;
    CHECK(text.find('\xFF') == std::string::npos);
    CHECK(text.find("\xEF\xBF\xBD") != std::string::npos);
    CHECK(text.find("ok ") == 0);
}

TEST_CASE("balance downsamples the majority class to the minority count") {
    const Corpus c = synthetic_corpus(20, 35);
    const Corpus b = balance(c, 7);
    CHECK(b.count(Label::Ham) == 20);
    CHECK(b.count(Label::Spam) == 20);

    // minority untouched
    for (const auto& d : c.documents) {
        if (d.label == Label::Ham) CHECK(membership(b).count(d.id) == 1);
    }
}

TEST_CASE("balance on large counts matches the expected pair") {
    const Corpus c = synthetic_corpus(16545, 17171);
    const Corpus b = balance(c, 1);
    CHECK(b.count(Label::Ham) == 16545);
    CHECK(b.count(Label::Spam) == 16545);
}

TEST_CASE("balance is a no-op on already balanced corpora") {
    const Corpus c = synthetic_corpus(12, 12);
    CHECK(membership(balance(c, 3)) == membership(c));
}

TEST_CASE("balance is deterministic and idempotent") {
    const Corpus c = synthetic_corpus(30, 50);
    const Corpus b1 = balance(c, 42);
    const Corpus b2 = balance(c, 42);
    CHECK(membership(b1) == membership(b2));
    CHECK(membership(balance(b1, 42)) == membership(b1));

    // a different seed should pick a different spam subset eventually
    const Corpus b3 = balance(c, 43);
    CHECK(membership(b3) != membership(b1));
}

TEST_CASE("balance rejects an empty class") {
    const Corpus c = synthetic_corpus(5, 0);
    CHECK_THROWS_AS(balance(c, 1), CorpusError);
}

TEST_CASE("split with exact divisibility") {
    const Corpus c = synthetic_corpus(50, 50);
    const SplitPlan plan = split(c, 0.7, 5, 9);
    CHECK(plan.train_ids.size() == 70);
    CHECK(plan.test_ids.size() == 30);
    REQUIRE(plan.folds.size() == 5);

    for (const auto& fold : plan.folds) {
        CHECK(fold.size() == 14);
        size_t ham = 0;
        for (const auto& id : fold) ham += id.find("/ham/") != std::string::npos ? 1 : 0;
        CHECK(ham == 7);
    }

    size_t train_ham = 0;
    for (const auto& id : plan.train_ids) train_ham += id.find("/ham/") != std::string::npos ? 1 : 0;
    CHECK(train_ham == 35);
}

TEST_CASE("split sizes on 33090 balanced documents") {
    const Corpus c = synthetic_corpus(16545, 16545);
    const SplitPlan plan = split(c, 0.7, 5, 0);
    CHECK(plan.train_ids.size() == 23163);
    CHECK(plan.test_ids.size() == 9927);
}

TEST_CASE("split id-set algebra and fold invariants") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const size_t n_ham = 10 + rng.next_below(60);
        const size_t n_spam = 10 + rng.next_below(60);
        const Corpus c = synthetic_corpus(n_ham, n_spam);
        const int k = 2 + static_cast<int>(rng.next_below(4));
        SplitPlan plan;
        try {
            plan = split(c, 0.5 + 0.4 * rng.next_double(), k, rng.next());
        } catch (const CorpusError&) {
            continue;  // class too small for this k
        }

        auto train = id_set(plan.train_ids);
        auto test = id_set(plan.test_ids);
        CHECK(train.size() == plan.train_ids.size());
        CHECK(test.size() == plan.test_ids.size());
        CHECK(train.size() + test.size() == c.documents.size());
        for (const auto& id : test) CHECK(train.count(id) == 0);

        // folds partition the train ids
        std::set<std::string> fold_union;
        for (const auto& fold : plan.folds) {
            for (const auto& id : fold) CHECK(fold_union.insert(id).second);
        }
        CHECK(fold_union == train);

        // per-fold class imbalance at most one document
        std::vector<long> ham_counts, sizes;
        for (const auto& fold : plan.folds) {
            long ham = 0;
            for (const auto& id : fold) ham += id.find("/ham/") != std::string::npos ? 1 : 0;
            ham_counts.push_back(ham);
            sizes.push_back(static_cast<long>(fold.size()));
        }
        for (size_t i = 0; i < ham_counts.size(); ++i) {
            for (size_t j = 0; j < ham_counts.size(); ++j) {
                CHECK(std::abs(ham_counts[i] - ham_counts[j]) <= 1);
                CHECK(std::abs((sizes[i] - ham_counts[i]) - (sizes[j] - ham_counts[j])) <= 1);
            }
        }
    }
}

TEST_CASE("split is deterministic per seed") {
    const Corpus c = synthetic_corpus(40, 40);
    const SplitPlan a = split(c, 0.7, 5, 11);
    const SplitPlan b = split(c, 0.7, 5, 11);
    CHECK(a.train_ids == b.train_ids);
    CHECK(a.test_ids == b.test_ids);
    CHECK(a.folds == b.folds);
}

TEST_CASE("split rejects classes too small for the fold count") {
    const Corpus c = synthetic_corpus(4, 40);
    CHECK_THROWS_AS(split(c, 0.7, 5, 0), CorpusError);
}

TEST_CASE("SplitPlan JSON round trip") {
    const Corpus c = synthetic_corpus(20, 20);
    const SplitPlan plan = split(c, 0.7, 2, 5);
    const SplitPlan back = SplitPlan::from_json(plan.to_json());
    CHECK(back.seed == plan.seed);
    CHECK(back.train_ids == plan.train_ids);
    CHECK(back.test_ids == plan.test_ids);
    CHECK(back.folds == plan.folds);
}
