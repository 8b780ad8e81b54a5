#include "egowsd/store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "egowsd/errors.hpp"
#include "egowsd/format.hpp"

namespace egowsd::store {

namespace fs = std::filesystem;

namespace {

const char* const kFiles[] = {"dt.tsv",        "inventory.tsv",  "hypernyms.tsv",   "senses.vec.tsv", "examples.tsv",
                              "classes.tsv",   "classes.vec.tsv", "hearst.tsv",     "words.vec.tsv"};

void check_token(const std::string& token, const char* what) {
  if (token.empty() || token.find_first_of("\t\n\r:,#") != std::string::npos) {
    throw Error(std::string("cannot store ") + what + " '" + token + "': empty or contains a reserved character");
  }
}

std::string join_weighted(const std::vector<std::pair<std::string, double>>& items, const char* what) {
  std::string out;
  for (const auto& [key, weight] : items) {
    check_token(key, what);
    if (!out.empty()) out += ',';
    out += key;
    out += ':';
    out += format_double(weight);
  }
  return out;
}

std::string join_weighted(const WeightedWords& items, const char* what) {
  std::vector<std::pair<std::string, double>> pairs;
  pairs.reserve(items.size());
  for (const auto& w : items) pairs.emplace_back(w.word, w.weight);
  return join_weighted(pairs, what);
}

class TsvWriter {
 public:
  explicit TsvWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path.string());
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : "\t") << fields, first = false), ...);
    out_ << '\n';
    ++rows_;
  }

  std::size_t close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
    return rows_;
  }

 private:
  fs::path path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Splits a file into TAB-separated rows, rejecting CR and missing final LF.
class TsvReader {
 public:
  explicit TsvReader(const fs::path& path) : name_(path.filename().string()), text_(read_file(path)) {
    if (auto cr = text_.find('\r'); cr != std::string::npos) {
      throw ParseError(name_, line_at(cr), "CR line ending (files must use LF)");
    }
    if (!text_.empty() && text_.back() != '\n') throw ParseError(name_, line_at(text_.size()), "missing final newline");
  }

  const std::string& name() const { return name_; }

  /// Calls fn(fields, line_no) for each row; enforces the column count.
  void each(std::size_t columns, const std::function<void(const std::vector<std::string>&, std::size_t)>& fn) {
    std::size_t pos = 0;
    std::size_t line = 0;
    std::vector<std::string> fields;
    while (pos < text_.size()) {
      auto end = text_.find('\n', pos);
      ++line;
      fields.clear();
      std::size_t begin = pos;
      for (;;) {
        auto tab = text_.find('\t', begin);
        if (tab == std::string::npos || tab > end) {
          fields.emplace_back(text_, begin, end - begin);
          break;
        }
        fields.emplace_back(text_, begin, tab - begin);
        begin = tab + 1;
      }
      if (fields.size() != columns) {
        throw ParseError(name_, line,
                         "expected " + std::to_string(columns) + " columns, found " + std::to_string(fields.size()));
      }
      fn(fields, line);
      ++rows_;
      pos = end + 1;
    }
  }

  std::size_t rows() const { return rows_; }

 private:
  std::size_t line_at(std::size_t offset) const {
    return static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<long>(offset), '\n')) + 1;
  }

  std::string name_;
  std::string text_;
  std::size_t rows_ = 0;
};

std::uint64_t parse_uint(const TsvReader& r, std::size_t line, const std::string& text) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(r.name(), line, "invalid integer '" + text + "'");
  }
  return out;
}

double parse_weight(const TsvReader& r, std::size_t line, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const Error&) {
    throw ParseError(r.name(), line, "invalid weight '" + text + "'");
  }
}

std::vector<std::pair<std::string, double>> parse_weighted(const TsvReader& r, std::size_t line,
                                                           const std::string& field) {
  std::vector<std::pair<std::string, double>> out;
  if (field.empty()) return out;
  std::size_t begin = 0;
  for (;;) {
    auto comma = field.find(',', begin);
    std::string item = field.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
    auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ParseError(r.name(), line, "malformed entry '" + item + "'");
    out.emplace_back(item.substr(0, colon), parse_weight(r, line, item.substr(colon + 1)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

WeightedWords to_weighted_words(std::vector<std::pair<std::string, double>> pairs) {
  WeightedWords out;
  out.reserve(pairs.size());
  for (auto& [w, x] : pairs) out.push_back({std::move(w), x});
  return out;
}

FeatureVector unit_vector(const TsvReader& r, std::size_t line, const std::string& field) {
  FeatureVector v(parse_weighted(r, line, field));
  if (!v.empty() && std::abs(v.norm() - 1.0) > 1e-6) {
    throw ParseError(r.name(), line, "context vector norm " + format_double(v.norm()) + " is not 1");
  }
  return v;
}

std::string manifest_get(const Manifest& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw ParseError("manifest.tsv", 0, "missing key '" + key + "'");
  return it->second;
}

std::uint64_t manifest_uint(const Manifest& m, const std::string& key) {
  auto text = manifest_get(m, key);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("manifest.tsv", 0, "invalid integer for '" + key + "'");
  }
  return out;
}

void expect_count(const std::string& what, std::uint64_t expected, std::uint64_t actual) {
  if (expected != actual) {
    throw CountMismatchError("count mismatch: " + what + " manifest says " + std::to_string(expected) + ", found " +
                             std::to_string(actual));
  }
}

}  // namespace

std::string escape_field(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i == text.size()) throw Error("dangling escape");
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw Error(std::string("unknown escape \\") + text[i]);
    }
  }
  return out;
}

void save_model(const ModelData& data, const fs::path& dir) {
  fs::create_directories(dir);
  fs::remove(dir / kCompleteMarker);

  std::map<std::string, std::size_t> rows;

  {
    TsvWriter w(dir / "dt.tsv");
    for (const auto& [word, list] : data.thesaurus.lists()) {
      check_token(word, "word");
      for (const auto& n : list) {
        check_token(n.word, "neighbour");
        w.row(word, n.word, format_double(n.similarity));
      }
    }
    rows["dt.tsv"] = w.close();
  }
  {
    TsvWriter inv(dir / "inventory.tsv");
    TsvWriter hyp(dir / "hypernyms.tsv");
    TsvWriter vec(dir / "senses.vec.tsv");
    TsvWriter ex(dir / "examples.tsv");
    for (const auto& [word, entries] : data.inventory) {
      check_token(word, "word");
      for (const auto& e : entries) {
        inv.row(word, e.sense_id, join_weighted(e.members, "member"));
        hyp.row(word, e.sense_id, join_weighted(e.hypernyms, "hypernym"));
        vec.row(word, e.sense_id, join_weighted(e.context_vec.ranked(), "feature"));
        for (const auto& example : e.examples) {
          ex.row(word, e.sense_id, format_double(example.confidence), escape_field(example.sentence));
        }
      }
    }
    rows["inventory.tsv"] = inv.close();
    rows["hypernyms.tsv"] = hyp.close();
    rows["senses.vec.tsv"] = vec.close();
    rows["examples.tsv"] = ex.close();
  }
  {
    TsvWriter cls(dir / "classes.tsv");
    TsvWriter vec(dir / "classes.vec.tsv");
    for (const auto& c : data.classes) {
      std::string members;
      for (const auto& ref : c.member_senses) {
        if (!members.empty()) members += ',';
        members += ref.str();
      }
      cls.row(c.class_id, members, join_weighted(c.hypernyms, "hypernym"));
      vec.row(c.class_id, join_weighted(c.context_vec.ranked(), "feature"));
    }
    rows["classes.tsv"] = cls.close();
    rows["classes.vec.tsv"] = vec.close();
  }
  {
    TsvWriter w(dir / "hearst.tsv");
    for (const auto& [hypo, row] : data.hearst.by_hyponym()) {
      check_token(hypo, "hyponym");
      for (const auto& [hyper, n] : row) {
        check_token(hyper, "hypernym");
        w.row(hypo, hyper, n);
      }
    }
    rows["hearst.tsv"] = w.close();
  }
  {
    TsvWriter w(dir / "words.vec.tsv");
    for (const auto& [word, vec] : data.word_vectors) {
      check_token(word, "word");
      w.row(word, join_weighted(vec.ranked(), "feature"));
    }
    rows["words.vec.tsv"] = w.close();
  }
  {
    TsvWriter m(dir / "manifest.tsv");
    m.row("format_version", kFormatVersion);
    for (const auto& [key, value] : data.config.to_pairs()) m.row("config." + key, value);
    m.row("stat.documents", data.stats.documents);
    m.row("stat.sentences", data.stats.sentences);
    m.row("stat.tokens", data.stats.tokens);
    m.row("count.words", data.inventory.size());
    m.row("count.senses", data.sense_count());
    m.row("count.classes", data.classes.size());
    for (const char* f : kFiles) m.row(std::string("rows.") + f, rows.at(f));
    m.close();
  }
  TsvWriter(dir / kCompleteMarker).close();
}

Manifest read_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a model directory: " + dir.string());
  if (!fs::exists(dir / kCompleteMarker)) throw IncompleteModelError(dir.string());
  TsvReader r(dir / "manifest.tsv");
  Manifest m;
  r.each(2, [&](const std::vector<std::string>& f, std::size_t line) {
    if (!m.emplace(f[0], f[1]).second) throw ParseError(r.name(), line, "duplicate key '" + f[0] + "'");
  });
  auto version = manifest_get(m, "format_version");
  if (version != std::to_string(kFormatVersion)) {
    throw VersionError("unsupported model format_version " + version + " (expected " +
                       std::to_string(kFormatVersion) + ")");
  }
  return m;
}

ModelData load_model_data(const fs::path& dir) {
  Manifest manifest = read_manifest(dir);
  ModelData data;

  std::vector<std::pair<std::string, std::string>> config_pairs;
  for (const auto& [key, value] : manifest) {
    if (key.rfind("config.", 0) == 0) config_pairs.emplace_back(key.substr(7), value);
  }
  data.config = PipelineConfig::from_pairs(config_pairs);
  data.stats.documents = manifest_uint(manifest, "stat.documents");
  data.stats.sentences = manifest_uint(manifest, "stat.sentences");
  data.stats.tokens = manifest_uint(manifest, "stat.tokens");

  auto check_rows = [&](const TsvReader& r) {
    expect_count(r.name() + " rows", manifest_uint(manifest, "rows." + r.name()), r.rows());
  };

  {
    TsvReader r(dir / "dt.tsv");
    dt::Thesaurus::Lists lists;
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      lists[f[0]].push_back({f[1], parse_weight(r, line, f[2])});
    });
    check_rows(r);
    data.thesaurus = dt::Thesaurus(std::move(lists));
  }

  auto sense_at = [&](const TsvReader& r, std::size_t line, const std::string& word,
                      const std::string& id_text) -> senses::SenseEntry& {
    auto id = parse_uint(r, line, id_text);
    auto it = data.inventory.find(word);
    if (it == data.inventory.end() || id >= it->second.size()) {
      throw ParseError(r.name(), line, "unknown sense " + word + "#" + id_text);
    }
    return it->second[id];
  };

  {
    TsvReader r(dir / "inventory.tsv");
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      auto& entries = data.inventory[f[0]];
      auto id = parse_uint(r, line, f[1]);
      if (id != entries.size()) throw ParseError(r.name(), line, "sense ids of '" + f[0] + "' are not contiguous");
      senses::SenseEntry e;
      e.word = f[0];
      e.sense_id = id;
      e.members = to_weighted_words(parse_weighted(r, line, f[2]));
      e.cluster_vec = senses::cluster_vector(e.members);
      entries.push_back(std::move(e));
    });
    check_rows(r);
  }
  expect_count("words", manifest_uint(manifest, "count.words"), data.inventory.size());
  expect_count("senses", manifest_uint(manifest, "count.senses"), data.sense_count());

  {
    TsvReader r(dir / "hypernyms.tsv");
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      sense_at(r, line, f[0], f[1]).hypernyms = to_weighted_words(parse_weighted(r, line, f[2]));
    });
    check_rows(r);
    expect_count("hypernyms.tsv senses", data.sense_count(), r.rows());
  }
  {
    TsvReader r(dir / "senses.vec.tsv");
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      sense_at(r, line, f[0], f[1]).context_vec = unit_vector(r, line, f[2]);
    });
    check_rows(r);
    expect_count("senses.vec.tsv senses", data.sense_count(), r.rows());
  }
  {
    TsvReader r(dir / "examples.tsv");
    r.each(4, [&](const std::vector<std::string>& f, std::size_t line) {
      auto& e = sense_at(r, line, f[0], f[1]);
      std::string sentence;
      try {
        sentence = unescape_field(f[3]);
      } catch (const Error& err) {
        throw ParseError(r.name(), line, err.what());
      }
      e.examples.push_back({std::move(sentence), parse_weight(r, line, f[2])});
    });
    check_rows(r);
  }
  {
    TsvReader r(dir / "classes.tsv");
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      auto id = parse_uint(r, line, f[0]);
      if (id != data.classes.size()) throw ParseError(r.name(), line, "class ids are not contiguous");
      senses::SemanticClass c;
      c.class_id = id;
      std::size_t begin = 0;
      while (begin <= f[1].size() && !f[1].empty()) {
        auto comma = f[1].find(',', begin);
        auto text = f[1].substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
        senses::SenseRef ref;
        try {
          ref = senses::SenseRef::parse(text);
        } catch (const Error& err) {
          throw ParseError(r.name(), line, err.what());
        }
        sense_at(r, line, ref.word, std::to_string(ref.sense_id));
        c.member_senses.push_back(std::move(ref));
        if (comma == std::string::npos) break;
        begin = comma + 1;
      }
      if (!std::is_sorted(c.member_senses.begin(), c.member_senses.end())) {
        throw ParseError(r.name(), line, "class members are not sorted");
      }
      for (const auto& ref : c.member_senses) c.member_words.push_back(ref.word);
      c.member_words.erase(std::unique(c.member_words.begin(), c.member_words.end()), c.member_words.end());
      std::vector<FeatureVector::Entry> unit;
      for (const auto& w : c.member_words) unit.emplace_back(w, 1.0);
      c.cluster_vec = FeatureVector(std::move(unit));
      c.hypernyms = to_weighted_words(parse_weighted(r, line, f[2]));
      data.classes.push_back(std::move(c));
    });
    check_rows(r);
  }
  expect_count("classes", manifest_uint(manifest, "count.classes"), data.classes.size());
  {
    TsvReader r(dir / "classes.vec.tsv");
    r.each(2, [&](const std::vector<std::string>& f, std::size_t line) {
      auto id = parse_uint(r, line, f[0]);
      if (id >= data.classes.size()) throw ParseError(r.name(), line, "unknown class " + f[0]);
      data.classes[id].context_vec = unit_vector(r, line, f[1]);
    });
    check_rows(r);
    expect_count("classes.vec.tsv classes", data.classes.size(), r.rows());
  }
  {
    TsvReader r(dir / "hearst.tsv");
    r.each(3, [&](const std::vector<std::string>& f, std::size_t line) {
      data.hearst.add(f[0], f[1], parse_uint(r, line, f[2]));
    });
    check_rows(r);
  }
  {
    TsvReader r(dir / "words.vec.tsv");
    r.each(2, [&](const std::vector<std::string>& f, std::size_t line) {
      data.word_vectors.emplace(f[0], FeatureVector(parse_weighted(r, line, f[1])));
    });
    check_rows(r);
  }
  return data;
}

Model load_model(const fs::path& dir) { return Model(load_model_data(dir)); }

}  // namespace egowsd::store
