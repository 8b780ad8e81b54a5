#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace egowsd::corpus {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  std::string norm;
  Span offset;  // byte span into the owning text
  bool is_stopword = false;
  bool is_target_candidate = false;
};

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;
  std::vector<Token> tokens;
  std::string raw;
};

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// The English list compiled into the library.
  static std::shared_ptr<const StopwordList> builtin();

  /// One entry per line, UTF-8; blank lines and `#` comments ignored.
  static std::shared_ptr<const StopwordList> from_file(const std::filesystem::path& path);

  bool contains(std::string_view norm) const { return words_.count(std::string(norm)) != 0; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

enum class DocumentMode { file, line };

struct CorpusConfig {
  DocumentMode mode = DocumentMode::file;
  std::shared_ptr<const StopwordList> stopwords = StopwordList::builtin();
};

/// NFC normalization; throws Utf8Error on malformed input.
std::string normalize_nfc(std::string_view text);

/// Unicode default case folding followed by NFC.
std::string fold_case(std::string_view text);

/// Byte offset of the first malformed UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text);

/// True when the token consists of letters (and combining marks), with
/// hyphens or apostrophes allowed between letters.
bool is_alphabetic(std::string_view norm);

/// True when the token contains at least one letter or digit.
bool has_word_character(std::string_view norm);

/// Splits on whitespace and punctuation. Letters, digits and combining marks
/// form words; a hyphen or apostrophe flanked by word characters stays
/// inside the word; every other non-space code point is its own token.
std::vector<Token> tokenize(std::string_view text, const StopwordList& stopwords = *StopwordList::builtin());

/// Sentence spans in `text`: a break follows `.`, `?` or `!` when the next
/// character is end of text or a line break, or when whitespace is followed
/// by an uppercase letter. Spans are trimmed and never empty.
std::vector<Span> split_sentences(std::string_view text);

/// Splits already-normalized text into sentences carrying `doc_id`.
/// Sentences without tokens are not emitted.
std::vector<Sentence> sentences_from_text(std::string_view text, const std::string& doc_id,
                                          const StopwordList& stopwords);

/// Streams sentences from a file or (recursively, in path order) a directory.
void for_each_sentence(const std::filesystem::path& path, const CorpusConfig& config,
                       const std::function<void(Sentence&&)>& sink);

std::vector<Sentence> load_corpus(const std::filesystem::path& path, const CorpusConfig& config = {});

/// Token indices whose norm is in `vocab`, is not a stopword and is alphabetic.
std::vector<std::size_t> detect_targets(const Sentence& sentence, const std::unordered_set<std::string>& vocab);

/// Non-stopword tokens carrying a letter or digit: the ones used as
/// co-occurrence and context features.
inline bool is_content(const Token& token) { return !token.is_stopword && has_word_character(token.norm); }

}  // namespace egowsd::corpus
