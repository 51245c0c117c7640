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
/// Model-free simulation of a chunked streaming decoder.
///
/// Source words are assumed to have equal durations. A transcription word can
/// be emitted once its own audio has been heard; a translation word once the
/// audio of every source word aligned to it has been heard. The decoder sees
/// audio in whole chunks, so those times are rounded up to a chunk boundary,
/// and a word cannot come out before the word preceding it in the serialized
/// stream. The result is a delay log that the latency metrics can score.

#ifndef TSOT_SIMULATE_HPP
#define TSOT_SIMULATE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsot/corpus.hpp"
#include "tsot/error.hpp"
#include "tsot/interleave.hpp"
#include "tsot/metrics.hpp"

namespace tsot {

struct EmissionPolicy {
  std::int64_t chunk_ms = 1000;

  void validate() const {
    if (chunk_ms <= 0) throw DomainError("chunk size must be positive, got " + std::to_string(chunk_ms));
  }
};

/// End time of each of m equally long words spanning duration_ms:
/// round((i + 1) * T / m), half away from zero.
inline std::vector<std::int64_t> word_end_times(std::size_t m, std::int64_t duration_ms) {
  if (m == 0) throw DomainError("word_end_times needs at least one word");
  if (duration_ms <= 0) throw DomainError("duration must be positive");
  const auto words = static_cast<std::int64_t>(m);
  std::vector<std::int64_t> ends(m);
  for (std::int64_t i = 0; i < words; ++i) {
    ends[static_cast<std::size_t>(i)] = (2 * (i + 1) * duration_ms + words) / (2 * words);
  }
  return ends;
}

/// Earliest emission time of every word, before stream-order propagation.
struct EmittableTimes {
  std::vector<std::int64_t> asr;
  std::vector<std::int64_t> st;
};

namespace detail {

inline std::int64_t chunk_ceil(std::int64_t t, const EmissionPolicy& policy, std::int64_t duration_ms) {
  const std::int64_t rounded = (t + policy.chunk_ms - 1) / policy.chunk_ms * policy.chunk_ms;
  return std::min(rounded, duration_ms);
}

inline std::int64_t require_duration(const UtterancePair& pair) {
  if (!pair.duration_ms || *pair.duration_ms <= 0) {
    throw PreconditionError("utterance '" + pair.id + "' needs a positive duration_ms for simulation");
  }
  return *pair.duration_ms;
}

}  // namespace detail

inline EmittableTimes emittable_times(const UtterancePair& pair, const EmissionPolicy& policy) {
  policy.validate();
  const std::int64_t duration = detail::require_duration(pair);
  if (!pair.alignment) {
    throw PreconditionError("utterance '" + pair.id + "' needs a word alignment for simulation");
  }
  check_bounds(*pair.alignment, pair.m(), pair.n());

  EmittableTimes out;
  std::vector<std::int64_t> ends;
  if (pair.m() > 0) ends = word_end_times(pair.m(), duration);

  std::vector<std::int64_t> st_raw(pair.n(), -1);
  for (const Link& l : *pair.alignment) st_raw[l.tgt] = std::max(st_raw[l.tgt], ends[l.src]);
  // An unaligned translation word inherits the constraint of the word before it.
  for (std::size_t j = 0; j < st_raw.size(); ++j) {
    if (st_raw[j] < 0) st_raw[j] = j == 0 ? 0 : st_raw[j - 1];
  }

  out.asr.reserve(ends.size());
  for (const std::int64_t e : ends) out.asr.push_back(detail::chunk_ceil(e, policy, duration));
  out.st.reserve(st_raw.size());
  for (const std::int64_t e : st_raw) out.st.push_back(detail::chunk_ceil(e, policy, duration));
  return out;
}

/// Earliest emission time of word `position` of the given task.
inline std::int64_t emittable_time(std::size_t position, Task task, const UtterancePair& pair,
                                   const EmissionPolicy& policy) {
  const EmittableTimes times = emittable_times(pair, policy);
  const auto& side = task == Task::Asr ? times.asr : times.st;
  if (position >= side.size()) {
    throw DomainError("word " + std::to_string(position) + " out of range for " + std::string(to_string(task)));
  }
  return side[position];
}

/// Joint delay log of `stream`, a serialization of `pair`. A tag is stamped
/// with the time of the word that follows it.
inline JointDelayLog simulate_emission(const UtterancePair& pair, const SerializedStream& stream,
                                       const EmissionPolicy& policy) {
  const EmittableTimes times = emittable_times(pair, policy);
  JointDelayLog log;
  log.id = pair.id;
  log.duration_ms = *pair.duration_ms;

  std::size_t next_asr = 0;
  std::size_t next_st = 0;
  std::int64_t previous = 0;
  for (const Segment& seg : stream.segments()) {
    const bool asr = seg.task == Task::Asr;
    const auto& side = asr ? times.asr : times.st;
    std::size_t& next = asr ? next_asr : next_st;
    if (next + seg.tokens.size() > side.size()) {
      throw PreconditionError("stream for '" + pair.id + "' has more " + std::string(to_string(seg.task)) +
                              " words than the utterance");
    }
    const std::size_t tag_index = log.tokens.size();
    log.tokens.emplace_back(tag_of(seg.task));
    log.delays_ms.push_back(0);
    for (const Token& t : seg.tokens) {
      previous = std::max(previous, side[next++]);
      log.tokens.push_back(t.text());
      log.delays_ms.push_back(previous);
    }
    log.delays_ms[tag_index] = log.delays_ms[tag_index + 1];
  }
  return log;
}

struct StrategyLatency {
  Strategy strategy = Strategy::align();
  std::optional<double> asr_laal_ms;
  std::optional<double> st_laal_ms;
  std::optional<double> asr_al_ms;
  std::optional<double> st_al_ms;
  std::size_t asr_scored = 0;
  std::size_t st_scored = 0;
};

inline std::vector<JointDelayLog> simulate_corpus(std::span<const UtterancePair> corpus, const Strategy& strategy,
                                                  const EmissionPolicy& policy) {
  std::vector<JointDelayLog> logs;
  logs.reserve(corpus.size());
  for (const UtterancePair& p : corpus) {
    logs.push_back(simulate_emission(p, serialize(p, strategy), policy));
    logs.back().strategy = strategy.name();
  }
  return logs;
}

/// Mean per-utterance AL and LAAL of each task. The simulated hypothesis is
/// the reference itself, so a task is only scored where it has words.
inline StrategyLatency summarize_latency(const Strategy& strategy, std::span<const UtterancePair> corpus,
                                         std::span<const JointDelayLog> logs) {
  if (corpus.size() != logs.size()) throw DomainError("one delay log per utterance expected");
  StrategyLatency out;
  out.strategy = strategy;
  double asr_laal = 0.0, st_laal = 0.0, asr_al = 0.0, st_al = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const PerTaskDelays routed = per_task_delays(logs[i].tokens, logs[i].delays_ms, logs[i].duration_ms, logs[i].id);
    if (corpus[i].m() > 0) {
      asr_laal += laal(routed.asr, corpus[i].m());
      asr_al += al(routed.asr, corpus[i].m());
      ++out.asr_scored;
    }
    if (corpus[i].n() > 0) {
      st_laal += laal(routed.st, corpus[i].n());
      st_al += al(routed.st, corpus[i].n());
      ++out.st_scored;
    }
  }
  if (out.asr_scored > 0) {
    out.asr_laal_ms = asr_laal / static_cast<double>(out.asr_scored);
    out.asr_al_ms = asr_al / static_cast<double>(out.asr_scored);
  }
  if (out.st_scored > 0) {
    out.st_laal_ms = st_laal / static_cast<double>(out.st_scored);
    out.st_al_ms = st_al / static_cast<double>(out.st_scored);
  }
  return out;
}

inline std::vector<StrategyLatency> compare_strategies(std::span<const UtterancePair> corpus,
                                                       const EmissionPolicy& policy,
                                                       std::span<const Strategy> strategies) {
  std::vector<StrategyLatency> table;
  for (const Strategy& s : strategies) {
    const auto logs = simulate_corpus(corpus, s, policy);
    table.push_back(summarize_latency(s, corpus, logs));
  }
  return table;
}

inline std::vector<StrategyLatency> compare_strategies(std::span<const UtterancePair> corpus,
                                                       const EmissionPolicy& policy) {
  const auto all = standard_strategies();
  return compare_strategies(corpus, policy, all);
}

}  // namespace tsot

#endif  // TSOT_SIMULATE_HPP
