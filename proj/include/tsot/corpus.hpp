// Copyright 2026 The tsot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Parallel corpora: tokens, word alignments and the JSONL record format.
///
/// A corpus file holds one JSON object per line:
///
///     {"id": "u1", "src": "Ich brauche das wirklich.", "tgt": "I really need it.",
///      "align": "0-0 1-2 2-3 3-1", "src_lang": "de", "tgt_lang": "en",
///      "duration_ms": 4000}
///
/// `align`, the language codes and `duration_ms` are optional; unknown
/// fields are ignored. Alignments use 0-based Pharaoh "i-j" pairs where i
/// indexes the transcription and j the translation.

#ifndef TSOT_CORPUS_HPP
#define TSOT_CORPUS_HPP

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsot/detail/utf8.hpp"
#include "tsot/error.hpp"

namespace tsot {

inline constexpr std::string_view kAsrTag = "#ASR#";
inline constexpr std::string_view kStTag = "#ST#";

constexpr bool is_tag(std::string_view s) noexcept { return s == kAsrTag || s == kStTag; }

/// Splits on runs of Unicode whitespace. No other normalization happens:
/// punctuation stays attached to its word.
inline std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t space = detail::space_length_at(text, pos);
    if (space != 0) {
      if (start != std::string_view::npos) {
        out.emplace_back(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
      pos += space;
    } else {
      if (start == std::string_view::npos) start = pos;
      pos += detail::char_length_at(text, pos);
    }
  }
  if (start != std::string_view::npos) out.emplace_back(text.substr(start));
  return out;
}

/// A word of a transcription or translation. Never empty, never contains
/// whitespace and never spells one of the task tags, so a joint stream can
/// always be split back without ambiguity.
class Token {
 public:
  explicit Token(std::string text) : text_(std::move(text)) {
    if (text_.empty()) throw ParseError("empty token");
    if (detail::contains_space(text_)) throw ParseError("token contains whitespace: '" + text_ + "'");
    if (is_tag(text_)) throw ParseError("token collides with reserved tag " + text_);
  }

  const std::string& text() const noexcept { return text_; }
  operator std::string_view() const noexcept { return text_; }

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
  friend bool operator==(const Token& a, std::string_view b) noexcept { return a.text_ == b; }

 private:
  std::string text_;
};

using TokenSeq = std::vector<Token>;

inline TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  for (auto& word : split_whitespace(text)) out.emplace_back(std::move(word));
  return out;
}

template <typename Range>
std::string join(const Range& words, std::string_view sep = " ") {
  std::string out;
  bool first = true;
  for (const auto& w : words) {
    if (!first) out += sep;
    out += std::string_view(w);
    first = false;
  }
  return out;
}

struct Link {
  std::size_t src = 0;
  std::size_t tgt = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Set of source/target word links, kept sorted lexicographically.
class Alignment {
 public:
  Alignment() = default;
  explicit Alignment(std::vector<Link> links) : links_(std::move(links)) {
    std::sort(links_.begin(), links_.end());
    links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
  }

  const std::vector<Link>& links() const noexcept { return links_; }
  std::size_t size() const noexcept { return links_.size(); }
  bool empty() const noexcept { return links_.empty(); }
  bool contains(Link l) const { return std::binary_search(links_.begin(), links_.end(), l); }

  auto begin() const noexcept { return links_.begin(); }
  auto end() const noexcept { return links_.end(); }

  friend bool operator==(const Alignment&, const Alignment&) = default;

 private:
  std::vector<Link> links_;
};

inline std::string render_link(Link l) { return std::to_string(l.src) + "-" + std::to_string(l.tgt); }

/// Throws BoundsError naming the first link with src >= m or tgt >= n.
inline void check_bounds(const Alignment& a, std::size_t m, std::size_t n) {
  for (const Link& l : a) {
    if (l.src >= m || l.tgt >= n) {
      throw BoundsError("alignment link " + render_link(l) + " out of bounds for " + std::to_string(m) +
                        " source and " + std::to_string(n) + " target words");
    }
  }
}

namespace detail {

inline std::optional<std::size_t> parse_index(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses whitespace-separated "i-j" pairs and bounds-checks them against a
/// sentence pair of m source and n target words. Duplicates collapse.
inline Alignment parse_pharaoh(std::string_view text, std::size_t m, std::size_t n) {
  std::vector<Link> links;
  for (const std::string& pair : split_whitespace(text)) {
    const std::size_t dash = pair.find('-');
    if (dash == std::string::npos) throw ParseError("malformed alignment pair '" + pair + "': missing '-'");
    const auto src = detail::parse_index(std::string_view(pair).substr(0, dash));
    const auto tgt = detail::parse_index(std::string_view(pair).substr(dash + 1));
    if (!src || !tgt) throw ParseError("malformed alignment pair '" + pair + "': indices must be non-negative integers");
    links.push_back({*src, *tgt});
  }
  Alignment a(std::move(links));
  check_bounds(a, m, n);
  return a;
}

inline std::string render_pharaoh(const Alignment& a) {
  std::string out;
  for (const Link& l : a) {
    if (!out.empty()) out += ' ';
    out += render_link(l);
  }
  return out;
}

struct UtterancePair {
  std::string id;
  std::string src_lang = "und";
  std::string tgt_lang = "und";
  TokenSeq transcription;
  TokenSeq translation;
  std::optional<Alignment> alignment;
  std::optional<std::int64_t> duration_ms;

  std::size_t m() const noexcept { return transcription.size(); }
  std::size_t n() const noexcept { return translation.size(); }
  std::string lang_pair() const { return src_lang + "-" + tgt_lang; }
};

/// Builds a record from a decoded JSON object. Errors are prefixed with
/// `where` (typically "line N").
inline UtterancePair parse_record(const nlohmann::json& j, const std::string& where = "record") {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  auto required_string = [&](const char* key) -> std::string {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
    if (!it->is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return it->get<std::string>();
  };
  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return it->get<std::string>();
  };

  UtterancePair p;
  p.id = required_string("id");
  try {
    p.transcription = tokenize(required_string("src"));
    p.translation = tokenize(required_string("tgt"));
  } catch (const ParseError& e) {
    throw ParseError(where + " (id '" + p.id + "'): " + e.what());
  }
  if (auto lang = optional_string("src_lang")) p.src_lang = *lang;
  if (auto lang = optional_string("tgt_lang")) p.tgt_lang = *lang;

  if (const auto it = j.find("duration_ms"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw ParseError(where + ": field 'duration_ms' must be a non-negative integer");
    }
    p.duration_ms = it->get<std::int64_t>();
  }

  if (auto align = optional_string("align")) {
    try {
      p.alignment = parse_pharaoh(*align, p.m(), p.n());
    } catch (const BoundsError& e) {
      throw BoundsError(where + " (id '" + p.id + "'): " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(where + " (id '" + p.id + "'): " + e.what());
    }
  }
  return p;
}

inline UtterancePair parse_record_line(std::string_view line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(where + ": invalid JSON: " + e.what());
  }
  return parse_record(j, where);
}

inline nlohmann::json to_json(const UtterancePair& p) {
  nlohmann::json j;
  j["id"] = p.id;
  j["src"] = join(p.transcription);
  j["tgt"] = join(p.translation);
  if (p.alignment) j["align"] = render_pharaoh(*p.alignment);
  j["src_lang"] = p.src_lang;
  j["tgt_lang"] = p.tgt_lang;
  if (p.duration_ms) j["duration_ms"] = *p.duration_ms;
  return j;
}

inline bool is_blank(std::string_view line) { return split_whitespace(line).empty(); }

/// Reads a whole corpus; the first malformed record aborts the load.
/// Blank lines are skipped and ids must be unique.
inline std::vector<UtterancePair> load_corpus(std::istream& in) {
  std::vector<UtterancePair> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    UtterancePair p = parse_record_line(line, line_no);
    if (!seen.insert(p.id).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate id '" + p.id + "'");
    }
    out.push_back(std::move(p));
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  return out;
}

inline std::vector<UtterancePair> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file '" + path + "'");
  return load_corpus(in);
}

}  // namespace tsot

#endif  // TSOT_CORPUS_HPP
