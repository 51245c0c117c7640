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
/// Splitting a joint token stream back into transcription and translation.
///
/// The parser is append-only: feeding more tokens never changes what was
/// already emitted, so it can sit directly behind a streaming decoder.
/// Malformed input produces warnings, never errors.

#ifndef TSOT_STREAM_HPP
#define TSOT_STREAM_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsot/corpus.hpp"
#include "tsot/interleave.hpp"

namespace tsot {

/// A sequence of tokens or tags, e.g. std::vector<std::string>.
template <typename R>
concept JointTokenRange = std::ranges::input_range<R> &&
                          std::convertible_to<std::ranges::range_reference_t<R>, std::string_view> &&
                          !std::convertible_to<R, std::string_view>;

struct Emission {
  Task task;
  std::string token;

  friend bool operator==(const Emission&, const Emission&) = default;
};

class StreamParser {
 public:
  /// Tags switch the current task and emit nothing. Other tokens go to the
  /// current task; before the first tag they go to ASR with a warning.
  std::optional<Emission> feed(std::string_view token) {
    const std::size_t position = tokens_seen_++;
    if (token == kAsrTag) {
      current_ = Task::Asr;
      return std::nullopt;
    }
    if (token == kStTag) {
      current_ = Task::St;
      return std::nullopt;
    }
    if (token.empty()) {
      warnings_.push_back("empty token at position " + std::to_string(position) + " ignored");
      return std::nullopt;
    }
    if (!current_) {
      warnings_.push_back("token '" + std::string(token) + "' at position " + std::to_string(position) +
                          " precedes any task tag; assigned to ASR");
      current_ = Task::Asr;
    }
    (*current_ == Task::Asr ? asr_ : st_).emplace_back(token);
    return Emission{*current_, std::string(token)};
  }

  std::optional<Task> current_task() const noexcept { return current_; }
  const std::vector<std::string>& asr() const noexcept { return asr_; }
  const std::vector<std::string>& st() const noexcept { return st_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t tokens_seen() const noexcept { return tokens_seen_; }

 private:
  std::optional<Task> current_;
  std::vector<std::string> asr_;
  std::vector<std::string> st_;
  std::vector<std::string> warnings_;
  std::size_t tokens_seen_ = 0;
};

struct SplitResult {
  std::vector<std::string> asr;
  std::vector<std::string> st;
  std::vector<std::string> warnings;
};

template <JointTokenRange Range>
SplitResult split(const Range& tokens) {
  StreamParser parser;
  for (const auto& t : tokens) parser.feed(std::string_view(t));
  return {parser.asr(), parser.st(), parser.warnings()};
}

/// Splits a space-joined joint stream such as a `tsot` field.
inline SplitResult split_joined(std::string_view joined) { return split(split_whitespace(joined)); }

struct RoundtripReport {
  bool ok = true;
  /// First index at which the recovered words differ from the reference
  /// (including a length mismatch), per task.
  std::optional<std::size_t> asr_divergence;
  std::optional<std::size_t> st_divergence;
  std::vector<std::string> warnings;

  std::string describe() const {
    std::string out = ok ? "ok" : "";
    if (asr_divergence) out += "ASR differs at position " + std::to_string(*asr_divergence);
    if (st_divergence) {
      if (!out.empty()) out += "; ";
      out += "ST differs at position " + std::to_string(*st_divergence);
    }
    for (const auto& w : warnings) {
      if (!out.empty()) out += "; ";
      out += "warning: " + w;
    }
    return out;
  }
};

namespace detail {

inline std::optional<std::size_t> first_divergence(std::span<const Token> ref, std::span<const std::string> got) {
  const std::size_t common = std::min(ref.size(), got.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (ref[i].text() != got[i]) return i;
  }
  if (ref.size() != got.size()) return common;
  return std::nullopt;
}

}  // namespace detail

/// Checks a joint token sequence against the pair it was built from. Parser
/// warnings are carried along but only word mismatches fail the check.
template <JointTokenRange Range>
RoundtripReport roundtrip_check(const UtterancePair& pair, const Range& joint_tokens) {
  SplitResult s = split(joint_tokens);
  RoundtripReport r;
  r.asr_divergence = detail::first_divergence(pair.transcription, s.asr);
  r.st_divergence = detail::first_divergence(pair.translation, s.st);
  r.warnings = std::move(s.warnings);
  r.ok = !r.asr_divergence && !r.st_divergence;
  return r;
}

inline RoundtripReport roundtrip_check(const UtterancePair& pair, const SerializedStream& stream) {
  return roundtrip_check(pair, flatten(stream));
}

}  // namespace tsot

#endif  // TSOT_STREAM_HPP
