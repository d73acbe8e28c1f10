#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cctype>

#include "spamlab/textprep.hpp"

using namespace spamlab;

namespace {

PrepConfig default_prep() {
    return PrepConfig::load(SPAMLAB_DATA_DIR "/stopwords.txt",
                            SPAMLAB_DATA_DIR "/lemma_exceptions.txt");
}

Document make_doc(const std::string& text) { return {"t/ham/x", Label::Ham, text, "t"}; }

}  // namespace

TEST_CASE("strip_html removes tags and keeps text") {
    CHECK(strip_html("<b>win</b> cash") == "win cash");
    CHECK(strip_html("a &lt; b") == "a < b");
    CHECK(strip_html("price<") == "price<");
    CHECK(strip_html("<a href=\"x\">link</a>") == "link");
    CHECK(strip_html("5 < 6 but 7 > 3") == "5 < 6 but 7 > 3");
    CHECK(strip_html("x &amp; y &nbsp;z") == "x & y  z");
    CHECK(strip_html("<!-- note --><p>hi</p>") == "hi");
}

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(tokenize("Follow-up: 2 meetings!") ==
          std::vector<std::string>{"follow", "up", "2", "meetings"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("HTTP://x.y") == std::vector<std::string>{"http", "x", "y"});
    CHECK(tokenize("win100 now") == std::vector<std::string>{"win100", "now"});
}

TEST_CASE("lemmatize handles the documented forms") {
    const Lemmatizer lem = Lemmatizer::load(SPAMLAB_DATA_DIR "/lemma_exceptions.txt");
    CHECK(lem.lemmatize("following") == "follow");
    CHECK(lem.lemmatize("impacted") == "impact");
    CHECK(lem.lemmatize("gas") == "gas");
    CHECK(lem.lemmatize("schedules") == "schedule");
    CHECK(lem.lemmatize("meetings") == "meeting");
    CHECK(lem.lemmatize("meeting") == "meeting");
    CHECK(lem.lemmatize("companies") == "company");
    CHECK(lem.lemmatize("classes") == "class");
}

TEST_CASE("lemmatize is idempotent") {
    const Lemmatizer lem = Lemmatizer::load(SPAMLAB_DATA_DIR "/lemma_exceptions.txt");

    // random lowercase words, plus suffixes that trigger every rule
    Rng rng(99);
    std::vector<std::string> words;
    const std::string suffixes[] = {"", "s", "es", "ies", "sses", "ing", "ed"};
    for (int i = 0; i < 500; ++i) {
        std::string w;
        const size_t n = 2 + rng.next_below(8);
        for (size_t j = 0; j < n; ++j) w += static_cast<char>('a' + rng.next_below(26));
        w += suffixes[rng.next_below(7)];
        words.push_back(w);
    }
    for (const auto& w : words) {
        const std::string once = lem.lemmatize(w);
        CHECK(lem.lemmatize(once) == once);
    }
}

TEST_CASE("preprocess runs the staged pipeline") {
    const PrepConfig cfg = default_prep();

    const TokenStream a = preprocess(make_doc("Subject: meeting schedules"), cfg);
    CHECK(a.tokens == std::vector<std::string>{"meeting", "schedule"});

    const TokenStream b = preprocess(make_doc("<a>cc 7 x</a>"), cfg);
    CHECK(b.tokens.empty());
}

TEST_CASE("preprocess with all flags off keeps raw tokens") {
    const PrepConfig raw = PrepConfig::raw();
    const TokenStream t = preprocess(make_doc("Subject: The 2 meetings <b>now</b>"), raw);
    CHECK(t.tokens == std::vector<std::string>{"subject", "the", "2", "meetings", "b", "now", "b"});
}

TEST_CASE("preprocess output satisfies the token stream invariants") {
    const PrepConfig cfg = default_prep();
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        std::string text;
        const size_t n = rng.next_below(400);
        for (size_t i = 0; i < n; ++i) {
            text += static_cast<char>(32 + rng.next_below(95));
        }
        const TokenStream ts = preprocess(make_doc(text), cfg);
        for (const auto& tok : ts.tokens) {
            CHECK(tok.size() >= 2);
            bool all_digits = true;
            for (char c : tok) {
                CHECK((std::isalnum(static_cast<unsigned char>(c)) != 0));
                CHECK(!std::isupper(static_cast<unsigned char>(c)));
                if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
            }
            CHECK(!all_digits);
            CHECK(cfg.stop_list.count(tok) == 0);
            CHECK(cfg.noise_words.count(tok) == 0);
        }
    }
}

TEST_CASE("data asset hashes are stable and recorded") {
    const PrepConfig cfg = default_prep();
    CHECK(cfg.stop_list_hash != 0);
    CHECK(cfg.lemmatizer.table_hash() != 0);
    const PrepConfig again = default_prep();
    CHECK(again.stop_list_hash == cfg.stop_list_hash);
    CHECK(again.lemmatizer.table_hash() == cfg.lemmatizer.table_hash());
}
