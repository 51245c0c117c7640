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
/// Quality and latency metrics: WER, corpus BLEU, average lagging (AL) and
/// length-adaptive average lagging (LAAL).
///
/// Text is scored as-is: no case folding, punctuation splitting or other
/// normalization, and task tags never count as words.

#ifndef TSOT_METRICS_HPP
#define TSOT_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsot/corpus.hpp"
#include "tsot/error.hpp"
#include "tsot/stream.hpp"

namespace tsot {

// ---------------------------------------------------------------------------
// WER

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t total() const noexcept { return substitutions + deletions + insertions; }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// Unit-cost Levenshtein alignment of two word sequences. Among equal-cost
/// alignments, substitutions are preferred over deletions over insertions.
template <typename Ref, typename Hyp>
EditCounts edit_counts(const Ref& reference, const Hyp& hypothesis) {
  const std::size_t r = std::size(reference);
  const std::size_t h = std::size(hypothesis);
  // Row-major (r+1) x (h+1) table of best alignments of prefixes.
  std::vector<EditCounts> table((r + 1) * (h + 1));
  auto at = [&](std::size_t i, std::size_t j) -> EditCounts& { return table[i * (h + 1) + j]; };
  for (std::size_t i = 1; i <= r; ++i) at(i, 0).deletions = i;
  for (std::size_t j = 1; j <= h; ++j) at(0, j).insertions = j;

  auto ref_it = std::begin(reference);
  for (std::size_t i = 1; i <= r; ++i, ++ref_it) {
    auto hyp_it = std::begin(hypothesis);
    for (std::size_t j = 1; j <= h; ++j, ++hyp_it) {
      EditCounts diag = at(i - 1, j - 1);
      if (!(std::string_view(*ref_it) == std::string_view(*hyp_it))) ++diag.substitutions;
      EditCounts up = at(i - 1, j);
      ++up.deletions;
      EditCounts left = at(i, j - 1);
      ++left.insertions;

      EditCounts best = diag;
      if (up.total() < best.total()) best = up;
      if (left.total() < best.total()) best = left;
      at(i, j) = best;
    }
  }
  return at(r, h);
}

/// Word error rate in percent. Throws DomainError on an empty reference.
template <typename Ref, typename Hyp>
double wer(const Ref& reference, const Hyp& hypothesis) {
  if (std::size(reference) == 0) throw DomainError("WER is undefined for an empty reference");
  return 100.0 * static_cast<double>(edit_counts(reference, hypothesis).total()) /
         static_cast<double>(std::size(reference));
}

// ---------------------------------------------------------------------------
// BLEU

inline constexpr std::size_t kBleuMaxOrder = 4;

/// Sufficient statistics of corpus BLEU; sentence statistics add up.
struct BleuStats {
  std::array<std::size_t, kBleuMaxOrder> correct{};
  std::array<std::size_t, kBleuMaxOrder> total{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o) {
    for (std::size_t k = 0; k < kBleuMaxOrder; ++k) {
      correct[k] += o.correct[k];
      total[k] += o.total[k];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    return *this;
  }
};

inline BleuStats sentence_bleu_stats(std::span<const std::string> ref, std::span<const std::string> hyp) {
  using Ngram = std::vector<std::string_view>;
  auto count = [](std::span<const std::string> words, std::size_t order) {
    std::map<Ngram, std::size_t> counts;
    for (std::size_t i = 0; i + order <= words.size(); ++i) {
      ++counts[Ngram(words.begin() + static_cast<std::ptrdiff_t>(i),
                     words.begin() + static_cast<std::ptrdiff_t>(i + order))];
    }
    return counts;
  };

  BleuStats s;
  s.hyp_len = hyp.size();
  s.ref_len = ref.size();
  for (std::size_t order = 1; order <= kBleuMaxOrder; ++order) {
    const auto ref_counts = count(ref, order);
    for (const auto& [ngram, c] : count(hyp, order)) {
      s.total[order - 1] += c;
      if (const auto it = ref_counts.find(ngram); it != ref_counts.end()) {
        s.correct[order - 1] += std::min(c, it->second);
      }
    }
  }
  return s;
}

struct BleuResult {
  double score = 0.0;
  double brevity_penalty = 1.0;
  std::array<double, kBleuMaxOrder> precisions{};  // percent, after smoothing
  BleuStats stats;
};

/// BLEU-4 from accumulated statistics.
///
/// An order with zero matches gets precision 1 / (2^k * total), k counting
/// the zero-match orders seen so far. Orders for which the hypothesis has no
/// n-grams at all are left out of the geometric mean.
inline BleuResult bleu_from_stats(const BleuStats& s) {
  BleuResult r;
  r.stats = s;
  if (s.hyp_len == 0) {
    r.score = s.ref_len == 0 ? 100.0 : 0.0;
    r.brevity_penalty = s.ref_len == 0 ? 1.0 : 0.0;
    return r;
  }

  double smooth = 1.0;
  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t k = 0; k < kBleuMaxOrder; ++k) {
    if (s.total[k] == 0) break;
    double p;
    if (s.correct[k] == 0) {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(s.total[k]));
    } else {
      p = static_cast<double>(s.correct[k]) / static_cast<double>(s.total[k]);
    }
    r.precisions[k] = 100.0 * p;
    log_sum += std::log(p);
    ++orders;
  }
  if (s.hyp_len < s.ref_len) {
    r.brevity_penalty = std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.hyp_len));
  }
  r.score = 100.0 * r.brevity_penalty * std::exp(log_sum / static_cast<double>(orders));
  return r;
}

/// Corpus-level BLEU over whitespace-tokenized sentences.
inline BleuResult corpus_bleu(std::span<const std::string> references, std::span<const std::string> hypotheses) {
  if (references.size() != hypotheses.size()) {
    throw DomainError("BLEU needs one hypothesis per reference (" + std::to_string(references.size()) +
                      " references, " + std::to_string(hypotheses.size()) + " hypotheses)");
  }
  if (references.empty()) throw DomainError("BLEU needs at least one sentence");
  BleuStats total;
  for (std::size_t i = 0; i < references.size(); ++i) {
    total += sentence_bleu_stats(split_whitespace(references[i]), split_whitespace(hypotheses[i]));
  }
  return bleu_from_stats(total);
}

inline double bleu(std::span<const std::string> references, std::span<const std::string> hypotheses) {
  return corpus_bleu(references, hypotheses).score;
}

// ---------------------------------------------------------------------------
// Latency

/// Emission times of hypothesis tokens: delays_ms[i] is how much source
/// audio had been heard when token i was produced.
struct DelayLog {
  std::string id;
  std::vector<std::int64_t> delays_ms;
  std::int64_t duration_ms = 0;

  void validate() const {
    if (duration_ms <= 0) throw DomainError("delay log '" + id + "': duration must be positive");
    for (std::size_t i = 0; i < delays_ms.size(); ++i) {
      if (delays_ms[i] < 0 || delays_ms[i] > duration_ms) {
        throw DomainError("delay log '" + id + "': delay " + std::to_string(delays_ms[i]) + " at position " +
                          std::to_string(i) + " outside [0, " + std::to_string(duration_ms) + "]");
      }
      if (i > 0 && delays_ms[i] < delays_ms[i - 1]) {
        throw DomainError("delay log '" + id + "': delays decrease at position " + std::to_string(i));
      }
    }
  }
};

/// Un-normalized lagging: the sum of d_i - i * T / rate_divisor over the
/// first tau tokens, where tau is the first token emitted once the whole
/// source was heard (or the last token).
struct LaggingSum {
  double sum = 0.0;
  std::size_t tau = 0;

  double mean() const noexcept { return sum / static_cast<double>(tau); }
};

inline LaggingSum lagging_sum(const DelayLog& log, std::size_t rate_divisor) {
  log.validate();
  if (log.delays_ms.empty()) throw DomainError("delay log '" + log.id + "' is empty");
  if (rate_divisor == 0) throw DomainError("reference length must be positive");
  const double step = static_cast<double>(log.duration_ms) / static_cast<double>(rate_divisor);
  LaggingSum out;
  for (std::size_t i = 0; i < log.delays_ms.size(); ++i) {
    out.sum += static_cast<double>(log.delays_ms[i]) - static_cast<double>(i) * step;
    out.tau = i + 1;
    if (log.delays_ms[i] >= log.duration_ms) break;
  }
  return out;
}

/// Average lagging with the ideal policy paced by the reference length.
inline double al(const DelayLog& log, std::size_t ref_len) { return lagging_sum(log, ref_len).mean(); }

/// Length-adaptive average lagging: the ideal policy is paced by the longer
/// of reference and hypothesis, so over-generation cannot lower the score.
inline double laal(const DelayLog& log, std::size_t ref_len) {
  if (ref_len == 0) throw DomainError("reference length must be positive");
  return lagging_sum(log, std::max(ref_len, log.delays_ms.size())).mean();
}

struct PerTaskDelays {
  DelayLog asr;
  DelayLog st;
  std::vector<std::string> warnings;
};

/// Routes the delay of every word of a joint stream to its task. Tags carry
/// delays in the input but are dropped from the output.
template <JointTokenRange Range>
PerTaskDelays per_task_delays(const Range& joint_tokens, std::span<const std::int64_t> joint_delays,
                              std::int64_t duration_ms, const std::string& id = {}) {
  std::vector<std::string_view> tokens;
  for (const auto& t : joint_tokens) tokens.emplace_back(t);
  if (tokens.size() != joint_delays.size()) {
    throw DomainError("delay log '" + id + "': " + std::to_string(tokens.size()) + " tokens but " +
                      std::to_string(joint_delays.size()) + " delays");
  }
  DelayLog joint{id, {joint_delays.begin(), joint_delays.end()}, duration_ms};
  joint.validate();

  PerTaskDelays out{{id, {}, duration_ms}, {id, {}, duration_ms}, {}};
  StreamParser parser;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (const auto e = parser.feed(tokens[i])) {
      (e->task == Task::Asr ? out.asr : out.st).delays_ms.push_back(joint_delays[i]);
    }
  }
  out.warnings = parser.warnings();
  if (out.asr.delays_ms.empty()) out.warnings.push_back("no ASR tokens in '" + id + "'");
  if (out.st.delays_ms.empty()) out.warnings.push_back("no ST tokens in '" + id + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Corpus evaluation

/// One line of a delay-log file: a joint hypothesis with per-token times.
struct JointDelayLog {
  std::string id;
  std::string strategy;  // empty when the file does not say
  std::int64_t duration_ms = 0;
  std::vector<std::string> tokens;
  std::vector<std::int64_t> delays_ms;
};

inline JointDelayLog parse_delay_record(const nlohmann::json& j, const std::string& where = "record") {
  try {
    JointDelayLog d;
    d.id = j.at("id").get<std::string>();
    d.duration_ms = j.at("duration_ms").get<std::int64_t>();
    d.tokens = j.at("tokens").get<std::vector<std::string>>();
    d.delays_ms = j.at("delays_ms").get<std::vector<std::int64_t>>();
    if (const auto it = j.find("strategy"); it != j.end()) d.strategy = it->get<std::string>();
    if (d.tokens.size() != d.delays_ms.size()) throw ParseError("'tokens' and 'delays_ms' differ in length");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline nlohmann::json to_json(const JointDelayLog& d) {
  nlohmann::json j;
  j["id"] = d.id;
  if (!d.strategy.empty()) j["strategy"] = d.strategy;
  j["duration_ms"] = d.duration_ms;
  j["tokens"] = d.tokens;
  j["delays_ms"] = d.delays_ms;
  return j;
}

/// How per-utterance lagging is combined into a corpus figure.
enum class LatencyPooling {
  PerUtterance,  // mean of per-utterance AL/LAAL
  Pooled,        // all lagging terms summed, divided by the summed cutoffs
};

struct TaskLatency {
  std::optional<double> al_ms;
  std::optional<double> laal_ms;
  std::size_t scored = 0;   // utterances that contributed
  std::size_t skipped = 0;  // empty reference or no hypothesis words
};

struct MetricReport {
  std::size_t utterance_count = 0;
  std::optional<double> wer_percent;
  std::optional<double> bleu;
  TaskLatency asr;
  TaskLatency st;
  std::vector<std::string> warnings;
};

namespace detail {

struct LatencyAccumulator {
  double al_sum = 0.0, laal_sum = 0.0;          // per-utterance means
  double al_terms = 0.0, laal_terms = 0.0;      // pooled sums
  std::size_t al_tau = 0, laal_tau = 0;
  TaskLatency result;

  void add(const DelayLog& log, std::size_t ref_len) {
    if (ref_len == 0 || log.delays_ms.empty()) {
      ++result.skipped;
      return;
    }
    const LaggingSum a = lagging_sum(log, ref_len);
    const LaggingSum l = lagging_sum(log, std::max(ref_len, log.delays_ms.size()));
    al_sum += a.mean();
    laal_sum += l.mean();
    al_terms += a.sum;
    laal_terms += l.sum;
    al_tau += a.tau;
    laal_tau += l.tau;
    ++result.scored;
  }

  TaskLatency finish(LatencyPooling pooling) const {
    TaskLatency r = result;
    if (r.scored == 0) return r;
    if (pooling == LatencyPooling::PerUtterance) {
      r.al_ms = al_sum / static_cast<double>(r.scored);
      r.laal_ms = laal_sum / static_cast<double>(r.scored);
    } else {
      r.al_ms = al_terms / static_cast<double>(al_tau);
      r.laal_ms = laal_terms / static_cast<double>(laal_tau);
    }
    return r;
  }
};

}  // namespace detail

/// Scores joint hypotheses against their references; `hypotheses[i]`
/// belongs to `references[i]`. WER is corpus-level (summed errors over
/// summed reference words), BLEU corpus-level over the ST side.
inline MetricReport evaluate(std::span<const UtterancePair> references, std::span<const JointDelayLog> hypotheses,
                             LatencyPooling pooling = LatencyPooling::PerUtterance) {
  if (references.size() != hypotheses.size()) {
    throw DomainError("evaluation needs one hypothesis per reference");
  }
  MetricReport report;
  report.utterance_count = references.size();
  std::size_t errors = 0;
  std::size_t ref_words = 0;
  std::vector<std::string> st_refs;
  std::vector<std::string> st_hyps;
  detail::LatencyAccumulator asr_lat;
  detail::LatencyAccumulator st_lat;

  for (std::size_t i = 0; i < references.size(); ++i) {
    const UtterancePair& ref = references[i];
    const JointDelayLog& hyp = hypotheses[i];
    PerTaskDelays routed = per_task_delays(hyp.tokens, hyp.delays_ms, hyp.duration_ms, hyp.id);
    const SplitResult words = split(hyp.tokens);
    for (auto& w : words.warnings) report.warnings.push_back(hyp.id + ": " + w);

    errors += edit_counts(ref.transcription, words.asr).total();
    ref_words += ref.m();
    st_refs.push_back(join(ref.translation));
    st_hyps.push_back(join(words.st));

    asr_lat.add(routed.asr, ref.m());
    st_lat.add(routed.st, ref.n());
  }

  if (ref_words > 0) report.wer_percent = 100.0 * static_cast<double>(errors) / static_cast<double>(ref_words);
  if (!st_refs.empty()) report.bleu = bleu(st_refs, st_hyps);
  report.asr = asr_lat.finish(pooling);
  report.st = st_lat.finish(pooling);
  return report;
}

inline nlohmann::json to_json(const MetricReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  auto task = [&](const TaskLatency& t) {
    return nlohmann::json{{"al_ms", opt(t.al_ms)}, {"laal_ms", opt(t.laal_ms)}, {"scored", t.scored},
                          {"skipped", t.skipped}};
  };
  return nlohmann::json{{"utterance_count", r.utterance_count},
                        {"wer_percent", opt(r.wer_percent)},
                        {"bleu", opt(r.bleu)},
                        {"asr", task(r.asr)},
                        {"st", task(r.st)},
                        {"warnings", r.warnings}};
}

}  // namespace tsot

#endif  // TSOT_METRICS_HPP
