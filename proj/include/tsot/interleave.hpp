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
/// Joint ASR+ST serialization. A transcription and its translation are
/// interleaved into one token sequence in which `#ASR#` and `#ST#` mark every
/// change of task:
///
///     #ASR# Ich #ST# I #ASR# brauche das wirklich. #ST# really need it.
///
/// Two families of strategies are provided: a ratio rule driven by gamma
/// (gamma 0 puts the whole transcription first, gamma 1 the whole
/// translation first, gamma 0.5 alternates word by word) and an
/// alignment-driven rule that emits the smallest aligned source/target
/// blocks one after the other.

#ifndef TSOT_INTERLEAVE_HPP
#define TSOT_INTERLEAVE_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsot/corpus.hpp"
#include "tsot/error.hpp"

namespace tsot {

enum class Task { Asr, St };

constexpr std::string_view tag_of(Task t) noexcept { return t == Task::Asr ? kAsrTag : kStTag; }
constexpr std::string_view to_string(Task t) noexcept { return t == Task::Asr ? "ASR" : "ST"; }

class Strategy {
 public:
  enum class Kind { Gamma, Align };

  static Strategy gamma(double g) {
    if (!(g >= 0.0 && g <= 1.0)) throw DomainError("gamma must lie in [0, 1], got " + std::to_string(g));
    return Strategy(Kind::Gamma, g);
  }
  static Strategy align() { return Strategy(Kind::Align, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_align() const noexcept { return kind_ == Kind::Align; }
  double gamma_value() const noexcept { return gamma_; }

  /// CLI spelling: inter0.0, inter1.0, inter0.5, gamma:<float> or align.
  std::string name() const {
    if (kind_ == Kind::Align) return "align";
    if (gamma_ == 0.0) return "inter0.0";
    if (gamma_ == 1.0) return "inter1.0";
    if (gamma_ == 0.5) return "inter0.5";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, gamma_);
    return "gamma:" + std::string(buf, res.ptr);
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  Strategy(Kind k, double g) : kind_(k), gamma_(g) {}
  Kind kind_;
  double gamma_;
};

inline Strategy parse_strategy(std::string_view s) {
  if (s == "align") return Strategy::align();
  if (s == "inter0.0") return Strategy::gamma(0.0);
  if (s == "inter1.0") return Strategy::gamma(1.0);
  if (s == "inter0.5") return Strategy::gamma(0.5);
  constexpr std::string_view prefix = "gamma:";
  if (s.starts_with(prefix)) {
    const std::string_view num = s.substr(prefix.size());
    double g = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), g);
    if (num.empty() || ec != std::errc{} || ptr != num.data() + num.size()) {
      throw ParseError("invalid gamma value in strategy '" + std::string(s) + "'");
    }
    return Strategy::gamma(g);
  }
  throw ParseError("unknown strategy '" + std::string(s) +
                   "' (expected inter0.0, inter1.0, inter0.5, gamma:<float> or align)");
}

/// The four strategies compared throughout: inter0.0, inter1.0, inter0.5, align.
inline std::vector<Strategy> standard_strategies() {
  return {Strategy::gamma(0.0), Strategy::gamma(1.0), Strategy::gamma(0.5), Strategy::align()};
}

struct Segment {
  Task task;
  TokenSeq tokens;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Task-tagged segments. Appending keeps the stream maximally merged: no
/// segment is empty and no two neighbours share a task.
class SerializedStream {
 public:
  void append(Task task, const Token& token) {
    if (segments_.empty() || segments_.back().task != task) segments_.push_back({task, {}});
    segments_.back().tokens.push_back(token);
  }

  void append(Task task, std::span<const Token> tokens) {
    for (const Token& t : tokens) append(task, t);
  }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }

  std::size_t token_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : segments_) n += s.tokens.size();
    return n;
  }

  friend bool operator==(const SerializedStream&, const SerializedStream&) = default;

 private:
  std::vector<Segment> segments_;
};

struct GammaCounts {
  std::size_t asr = 0;
  std::size_t st = 0;
};

/// ASR iff (1 - gamma) * (1 + st) >= gamma * (1 + asr).
///
/// Gamma 0 always picks ASR, gamma 1 always picks ST and gamma 0.5 picks
/// whichever task is behind, ASR on ties.
inline Task next_task_gamma(double gamma, GammaCounts counts) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  const double asr_side = (1.0 - gamma) * (1.0 + static_cast<double>(counts.st));
  const double st_side = gamma * (1.0 + static_cast<double>(counts.asr));
  return asr_side >= st_side ? Task::Asr : Task::St;
}

inline SerializedStream serialize_gamma(const UtterancePair& pair, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  SerializedStream out;
  GammaCounts counts;
  const std::size_t m = pair.m();
  const std::size_t n = pair.n();
  while (counts.asr < m || counts.st < n) {
    Task task;
    if (counts.asr == m) task = Task::St;
    else if (counts.st == n) task = Task::Asr;
    else task = next_task_gamma(gamma, counts);

    if (task == Task::Asr) out.append(task, pair.transcription[counts.asr++]);
    else out.append(task, pair.translation[counts.st++]);
  }
  return out;
}

/// Half-open source and target spans of one interleaving block.
struct Block {
  std::size_t src_begin = 0;
  std::size_t src_end = 0;
  std::size_t tgt_begin = 0;
  std::size_t tgt_end = 0;

  std::size_t src_size() const noexcept { return src_end - src_begin; }
  std::size_t tgt_size() const noexcept { return tgt_end - tgt_begin; }

  friend bool operator==(const Block&, const Block&) = default;
};

/// Finest monotone decomposition of an m x n sentence pair into blocks that
/// no alignment link crosses.
///
/// Every block but the last contains at least one link and ends, on both
/// sides, with an aligned word: unaligned words go to the block that follows
/// them. Words after the last link form a final block that may be empty on
/// one side. Each block is the closure of the earliest remaining source word
/// with a link: the spans grow until every link touching either span lies
/// inside both, which folds crossing and many-to-one links into one block.
inline std::vector<Block> segment_blocks(std::size_t m, std::size_t n, const Alignment& alignment) {
  check_bounds(alignment, m, n);
  const std::vector<Link>& links = alignment.links();  // sorted by source index

  std::vector<Block> blocks;
  std::size_t src = 0;
  std::size_t tgt = 0;
  std::size_t next_link = 0;  // first link with source index >= src
  while (next_link < links.size()) {
    Block b{src, links[next_link].src + 1, tgt, 0};
    for (std::size_t k = next_link; k < links.size() && links[k].src == links[next_link].src; ++k) {
      b.tgt_end = std::max(b.tgt_end, links[k].tgt + 1);
    }
    for (bool grown = true; grown;) {
      grown = false;
      for (std::size_t k = next_link; k < links.size(); ++k) {
        const Link& l = links[k];
        if (l.src >= b.src_end && l.tgt >= b.tgt_end) continue;
        if (l.src + 1 > b.src_end) {
          b.src_end = l.src + 1;
          grown = true;
        }
        if (l.tgt + 1 > b.tgt_end) {
          b.tgt_end = l.tgt + 1;
          grown = true;
        }
      }
    }
    blocks.push_back(b);
    src = b.src_end;
    tgt = b.tgt_end;
    while (next_link < links.size() && links[next_link].src < src) ++next_link;
  }
  if (src < m || tgt < n) blocks.push_back({src, m, tgt, n});
  return blocks;
}

inline SerializedStream serialize_align(const UtterancePair& pair) {
  if (!pair.alignment) {
    throw PreconditionError("utterance '" + pair.id +
                            "' has no word alignment: supply an 'align' field or use a gamma strategy");
  }
  SerializedStream out;
  const std::span<const Token> src(pair.transcription);
  const std::span<const Token> tgt(pair.translation);
  for (const Block& b : segment_blocks(pair.m(), pair.n(), *pair.alignment)) {
    out.append(Task::Asr, src.subspan(b.src_begin, b.src_size()));
    out.append(Task::St, tgt.subspan(b.tgt_begin, b.tgt_size()));
  }
  return out;
}

inline SerializedStream serialize(const UtterancePair& pair, const Strategy& strategy) {
  return strategy.is_align() ? serialize_align(pair) : serialize_gamma(pair, strategy.gamma_value());
}

/// Joint token sequence: each segment's tag followed by its words.
inline std::vector<std::string> flatten(const SerializedStream& stream) {
  std::vector<std::string> out;
  out.reserve(stream.token_count() + stream.segments().size());
  for (const Segment& s : stream.segments()) {
    out.emplace_back(tag_of(s.task));
    for (const Token& t : s.tokens) out.push_back(t.text());
  }
  return out;
}

inline std::string to_tsot_string(const SerializedStream& stream) { return join(flatten(stream)); }

}  // namespace tsot

#endif  // TSOT_INTERLEAVE_HPP
