#include <doctest.h>

#include <random>

#include "egowsd/corpus.hpp"
#include "egowsd/errors.hpp"
#include "temp_dir.hpp"

using namespace egowsd;
using namespace egowsd::corpus;
using egowsd::testing::TempDir;
using egowsd::testing::write_file;

namespace {

std::vector<std::string> norms(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.norm);
  return out;
}

// Random text from a pool mixing ASCII, accented letters, digits,
// punctuation, hyphens, apostrophes and various whitespace.
std::string random_text(std::mt19937_64& rng, std::size_t pieces) {
  static const std::vector<std::string> pool = {
      "a", "B", "z", "Q", "é", "É", "ß", "Σ", "ω", "ﬁ", "7", "0", "-", "'", ".", ",", "!", "?",
      " ", " ", " ", "\t", "\n", "é", "日", "—", "(", ")", "\"", "İ"};
  std::string s;
  for (std::size_t i = 0; i < pieces; ++i) s += pool[rng() % pool.size()];
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("tokenize: documented examples") {
    CHECK(norms(tokenize("Jaguar is fast.")) == std::vector<std::string>{"jaguar", "is", "fast", "."});
    CHECK(tokenize("").empty());
    CHECK(norms(tokenize("state-of-the-art WSD")) == std::vector<std::string>{"state-of-the-art", "wsd"});
  }

  TEST_CASE("tokenize: stopword and candidate flags") {
    auto tokens = tokenize("The jaguar's 3 cubs.");
    REQUIRE(tokens.size() == 5);
    CHECK(tokens[0].is_stopword);
    CHECK(tokens[1].norm == "jaguar's");
    CHECK(tokens[1].is_target_candidate);
    CHECK_FALSE(tokens[2].is_target_candidate);  // digits are not alphabetic
    CHECK(tokens[4].norm == ".");
  }

  TEST_CASE("tokenize: Unicode case folding and NFC") {
    auto tokens = tokenize("STRASSE Straße Café");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].norm == "strasse");
    CHECK(tokens[1].norm == "strasse");
    CHECK(tokens[2].norm == "café");
  }

  TEST_CASE("tokenize: hyphen or apostrophe at a word edge is split off") {
    CHECK(norms(tokenize("-cat- 'dog'")) == std::vector<std::string>{"-", "cat", "-", "'", "dog", "'"});
  }

  TEST_CASE("split_sentences: documented rule") {
    std::string text = "A cat sleeps. A dog barks.";
    auto spans = split_sentences(text);
    REQUIRE(spans.size() == 2);
    CHECK(text.substr(spans[0].begin, spans[0].end - spans[0].begin) == "A cat sleeps.");
    CHECK(text.substr(spans[1].begin, spans[1].end - spans[1].begin) == "A dog barks.");
    CHECK(split_sentences("Mr. smith went home.").size() == 1);  // lowercase after the period
    CHECK(split_sentences("It ended.\nthen more").size() == 2);   // line break after the period
    CHECK(split_sentences("   ").empty());
  }

  TEST_CASE("load_corpus: documented examples") {
    TempDir dir;
    write_file(dir / "a.txt", "A cat sleeps. A dog barks.");
    auto sentences = load_corpus(dir / "a.txt");
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0].tokens.size() == 4);
    CHECK(sentences[1].tokens.size() == 4);
    CHECK(sentences[0].tokens.back().norm == ".");

    write_file(dir / "empty.txt", "");
    CHECK(load_corpus(dir / "empty.txt").empty());
  }

  TEST_CASE("load_corpus: line mode, directory order and errors") {
    TempDir dir;
    std::filesystem::create_directories(dir / "sub");
    write_file(dir / "b.txt", "second file\nline two\r\n");
    write_file(dir / "sub" / "c.txt", "third");
    write_file(dir / "a.txt", "first");
    CorpusConfig config;
    config.mode = DocumentMode::line;
    auto sentences = load_corpus(dir.path(), config);
    REQUIRE(sentences.size() == 4);
    CHECK(sentences[0].raw == "first");
    CHECK(sentences[1].raw == "second file");
    CHECK(sentences[2].raw == "line two");
    CHECK(sentences[1].doc_id != sentences[2].doc_id);
    CHECK(sentences[3].raw == "third");

    write_file(dir / "bad.txt", "ok \xff\xfe bad");
    CHECK_THROWS_AS(load_corpus(dir / "bad.txt"), Utf8Error);
    CHECK_THROWS_AS(load_corpus(dir / "missing"), IoError);
  }

  TEST_CASE("stopword list from file") {
    TempDir dir;
    write_file(dir / "stop.txt", "# comment\nFoo\n\nbar\n");
    auto list = StopwordList::from_file(dir / "stop.txt");
    CHECK(list->contains("foo"));
    CHECK(list->contains("bar"));
    CHECK(list->size() == 2);
    CHECK(StopwordList::builtin()->contains("the"));
    CHECK(StopwordList::builtin()->size() > 250);
  }

  TEST_CASE("detect_targets: documented examples") {
    Sentence s{"d", 0, tokenize("the jaguar runs"), "the jaguar runs"};
    CHECK(detect_targets(s, {"jaguar"}) == std::vector<std::size_t>{1});
    Sentence t{"d", 0, tokenize("the the the"), "the the the"};
    CHECK(detect_targets(t, {"the", "jaguar"}).empty());
  }

  TEST_CASE("property: token invariants on random text") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 500; ++trial) {
      std::string text = normalize_nfc(random_text(rng, 1 + rng() % 40));
      auto tokens = tokenize(text);
      std::size_t prev_end = 0;
      std::string joined;
      for (const auto& t : tokens) {
        CHECK(t.offset.begin < t.offset.end);
        CHECK(t.offset.begin >= prev_end);
        prev_end = t.offset.end;
        CHECK(text.substr(t.offset.begin, t.offset.end - t.offset.begin) == t.surface);
        CHECK(t.norm == fold_case(t.surface));
        if (!joined.empty()) joined += ' ';
        joined += t.norm;
      }
      // Idempotence on the joined norms.
      CHECK(norms(tokenize(joined)) == norms(tokens));
    }
  }

  TEST_CASE("property: stored sentences are non-empty and raw holds the surfaces in order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
      std::string text = normalize_nfc(random_text(rng, 1 + rng() % 80));
      for (const auto& s : sentences_from_text(text, "doc", *StopwordList::builtin())) {
        REQUIRE_FALSE(s.tokens.empty());
        for (const auto& t : s.tokens) {
          CHECK(s.raw.substr(t.offset.begin, t.offset.end - t.offset.begin) == t.surface);
        }
      }
    }
  }

  TEST_CASE("property: detect_targets is a subset of in-vocabulary tokens") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      std::string text = normalize_nfc(random_text(rng, 30));
      Sentence s{"d", 0, tokenize(text), text};
      std::unordered_set<std::string> vocab;
      for (const auto& t : s.tokens) {
        if (rng() % 2) vocab.insert(t.norm);
      }
      for (auto i : detect_targets(s, vocab)) {
        CHECK(vocab.count(s.tokens[i].norm) == 1);
        CHECK_FALSE(s.tokens[i].is_stopword);
      }
    }
  }

  TEST_CASE("find_invalid_utf8") {
    CHECK(find_invalid_utf8("plain") == std::string_view::npos);
    CHECK(find_invalid_utf8("ab\xc3") == 2);
    CHECK(find_invalid_utf8("\xed\xa0\x80") == 0);  // surrogate
    CHECK_THROWS_AS(normalize_nfc("x\xff"), Utf8Error);
  }
}
