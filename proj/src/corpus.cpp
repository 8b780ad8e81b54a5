#include "egowsd/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "egowsd/errors.hpp"

namespace egowsd::corpus {

extern const char* const kBuiltinStopwords;

namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

// Decodes the code point at `pos`; malformed bytes come back as a negative
// value spanning one or more bytes.
CodePoint decode(std::string_view text, std::size_t pos) {
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c;
  U8_NEXT(reinterpret_cast<const uint8_t*>(text.data()), i, static_cast<int32_t>(text.size()), c);
  return {c, pos, static_cast<std::size_t>(i)};
}

bool is_mark(UChar32 c) {
  auto type = u_charType(c);
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK || type == U_ENCLOSING_MARK;
}

bool is_word_char(UChar32 c) { return c >= 0 && (u_isalnum(c) || is_mark(c)); }

bool is_joiner(UChar32 c) { return c == '-' || c == '\'' || c == 0x2019; }

bool is_space(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
  return *n;
}

std::unordered_set<std::string> read_word_list(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    words.insert(fold_case(line.substr(first, last - first + 1)));
  }
  return words;
}

}  // namespace

std::shared_ptr<const StopwordList> StopwordList::builtin() {
  static const auto list = [] {
    std::istringstream in(kBuiltinStopwords);
    return std::make_shared<const StopwordList>(read_word_list(in));
  }();
  return list;
}

std::shared_ptr<const StopwordList> StopwordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read stopword file " + path.string());
  return std::make_shared<const StopwordList>(read_word_list(in));
}

std::size_t find_invalid_utf8(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto cp = decode(text, pos);
    if (cp.value < 0) return pos;
    pos = cp.end;
  }
  return std::string_view::npos;
}

std::string normalize_nfc(std::string_view text) {
  if (auto bad = find_invalid_utf8(text); bad != std::string_view::npos) throw Utf8Error("input", bad);
  UErrorCode status = U_ZERO_ERROR;
  const auto& normalizer = nfc();
  auto ustr = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (normalizer.isNormalized(ustr, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  auto out = normalizer.normalize(ustr, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::string fold_case(std::string_view text) {
  bool ascii = std::all_of(text.begin(), text.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) {
    std::string out(text);
    for (auto& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  auto ustr = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  ustr.foldCase();
  UErrorCode status = U_ZERO_ERROR;
  auto normalized = nfc().normalize(ustr, status);
  std::string out;
  (U_SUCCESS(status) ? normalized : ustr).toUTF8String(out);
  return out;
}

bool is_alphabetic(std::string_view norm) {
  if (norm.empty()) return false;
  bool prev_letter = false;
  std::size_t pos = 0;
  while (pos < norm.size()) {
    auto cp = decode(norm, pos);
    if (cp.value < 0) return false;
    bool letter = u_isalpha(cp.value) || (prev_letter && is_mark(cp.value));
    if (letter) {
      prev_letter = true;
    } else if (is_joiner(cp.value) && prev_letter && cp.end < norm.size() && u_isalpha(decode(norm, cp.end).value)) {
      prev_letter = false;
    } else {
      return false;
    }
    pos = cp.end;
  }
  return true;
}

bool has_word_character(std::string_view norm) {
  std::size_t pos = 0;
  while (pos < norm.size()) {
    auto cp = decode(norm, pos);
    if (cp.value >= 0 && u_isalnum(cp.value)) return true;
    pos = cp.end;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view text, const StopwordList& stopwords) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t begin, std::size_t end) {
    Token token;
    token.surface = std::string(text.substr(begin, end - begin));
    token.norm = find_invalid_utf8(token.surface) == std::string_view::npos ? fold_case(token.surface) : token.surface;
    token.offset = {begin, end};
    token.is_stopword = stopwords.contains(token.norm);
    token.is_target_candidate = !token.is_stopword && is_alphabetic(token.norm);
    tokens.push_back(std::move(token));
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto cp = decode(text, pos);
    if (is_space(cp.value)) {
      pos = cp.end;
      continue;
    }
    if (!is_word_char(cp.value)) {
      emit(cp.begin, cp.end);
      pos = cp.end;
      continue;
    }
    std::size_t begin = cp.begin;
    std::size_t end = cp.end;
    while (end < text.size()) {
      auto next = decode(text, end);
      if (is_word_char(next.value)) {
        end = next.end;
      } else if (is_joiner(next.value) && next.end < text.size() && is_word_char(decode(text, next.end).value)) {
        end = next.end;
      } else {
        break;
      }
    }
    emit(begin, end);
    pos = end;
  }
  return tokens;
}

std::vector<Span> split_sentences(std::string_view text) {
  std::vector<Span> spans;
  auto push_trimmed = [&](std::size_t begin, std::size_t end) {
    while (begin < end) {
      auto cp = decode(text, begin);
      if (!is_space(cp.value)) break;
      begin = cp.end;
    }
    while (end > begin) {
      // Whitespace we trim is ASCII or multi-byte; step back one code point.
      std::size_t back = end - 1;
      while (back > begin && (static_cast<unsigned char>(text[back]) & 0xC0) == 0x80) --back;
      if (!is_space(decode(text, back).value)) break;
      end = back;
    }
    if (begin < end) spans.push_back({begin, end});
  };

  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (c != '.' && c != '?' && c != '!') {
      pos = decode(text, pos).end;
      continue;
    }
    std::size_t after = pos + 1;
    bool boundary = false;
    if (after >= text.size() || text[after] == '\n' || text[after] == '\r') {
      boundary = true;
    } else if (is_space(decode(text, after).value)) {
      std::size_t k = after;
      bool saw_newline = false;
      while (k < text.size()) {
        auto cp = decode(text, k);
        if (!is_space(cp.value)) break;
        saw_newline = saw_newline || cp.value == '\n';
        k = cp.end;
      }
      if (k >= text.size() || saw_newline) {
        boundary = true;
      } else {
        auto cp = decode(text, k);
        boundary = cp.value >= 0 && (u_isupper(cp.value) || u_istitle(cp.value));
      }
    }
    if (boundary) {
      push_trimmed(start, after);
      start = after;
    }
    pos = after;
  }
  push_trimmed(start, text.size());
  return spans;
}

std::vector<Sentence> sentences_from_text(std::string_view text, const std::string& doc_id,
                                          const StopwordList& stopwords) {
  std::vector<Sentence> out;
  for (const auto& span : split_sentences(text)) {
    Sentence sentence;
    sentence.doc_id = doc_id;
    sentence.raw = std::string(text.substr(span.begin, span.end - span.begin));
    sentence.tokens = tokenize(sentence.raw, stopwords);
    if (sentence.tokens.empty()) continue;
    sentence.index = out.size();
    out.push_back(std::move(sentence));
  }
  return out;
}

namespace {

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("corpus path does not exist: " + path.string());
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (fs::recursive_directory_iterator it(path, ec), end; it != end; it.increment(ec)) {
    if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
    if (it->is_regular_file()) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return buf.str();
}

}  // namespace

void for_each_sentence(const std::filesystem::path& path, const CorpusConfig& config,
                       const std::function<void(Sentence&&)>& sink) {
  const auto& stopwords = config.stopwords ? *config.stopwords : *StopwordList::builtin();
  for (const auto& file : corpus_files(path)) {
    std::string content = read_file(file);
    if (auto bad = find_invalid_utf8(content); bad != std::string_view::npos) throw Utf8Error(file.string(), bad);
    std::string id = file.string();
    if (config.mode == DocumentMode::file) {
      for (auto& s : sentences_from_text(normalize_nfc(content), id, stopwords)) sink(std::move(s));
      continue;
    }
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin < content.size()) {
      std::size_t end = content.find('\n', begin);
      if (end == std::string::npos) end = content.size();
      ++line_no;
      std::string_view line(content.data() + begin, end - begin);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      for (auto& s : sentences_from_text(normalize_nfc(line), id + ":" + std::to_string(line_no), stopwords)) {
        sink(std::move(s));
      }
      begin = end + 1;
    }
  }
}

std::vector<Sentence> load_corpus(const std::filesystem::path& path, const CorpusConfig& config) {
  std::vector<Sentence> out;
  for_each_sentence(path, config, [&](Sentence&& s) { out.push_back(std::move(s)); });
  return out;
}

std::vector<std::size_t> detect_targets(const Sentence& sentence, const std::unordered_set<std::string>& vocab) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& token = sentence.tokens[i];
    if (token.is_stopword || !is_alphabetic(token.norm)) continue;
    if (vocab.count(token.norm)) out.push_back(i);
  }
  return out;
}

}  // namespace egowsd::corpus
