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
/// Seeded synthetic parallel corpora with controlled alignment shapes.
///
/// Output depends only on the configuration: the generator draws raw 64-bit
/// words from std::mt19937_64 (whose sequence is fixed by the standard) and
/// does its own range reduction, so the same seed yields the same corpus on
/// every platform.

#ifndef TSOT_SYNTHETIC_HPP
#define TSOT_SYNTHETIC_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsot/corpus.hpp"
#include "tsot/error.hpp"

namespace tsot {

enum class Topology { Monotone, Crossing, ManyToOne, Sparse };

constexpr std::string_view to_string(Topology t) noexcept {
  switch (t) {
    case Topology::Monotone: return "monotone";
    case Topology::Crossing: return "crossing";
    case Topology::ManyToOne: return "many-to-one";
    case Topology::Sparse: return "sparse";
  }
  return "?";
}

inline Topology parse_topology(std::string_view s) {
  for (Topology t : {Topology::Monotone, Topology::Crossing, Topology::ManyToOne, Topology::Sparse}) {
    if (s == to_string(t)) return t;
  }
  throw ParseError("unknown topology '" + std::string(s) + "' (expected monotone, crossing, many-to-one or sparse)");
}

struct SyntheticConfig {
  std::uint64_t seed = 1;
  std::size_t count = 10;
  /// Record k uses topologies[k % size].
  std::vector<Topology> topologies = {Topology::Monotone};
  std::size_t min_words = 1;
  std::size_t max_words = 30;
  std::int64_t ms_per_word = 1000;
  std::string src_lang = "xx";
  std::string tgt_lang = "yy";
};

/// True if two links cross: i1 < i2 while j1 > j2.
inline bool has_crossing(const Alignment& a) {
  const auto& links = a.links();
  for (std::size_t x = 0; x < links.size(); ++x) {
    for (std::size_t y = x + 1; y < links.size(); ++y) {
      if (links[x].src < links[y].src && links[x].tgt > links[y].tgt) return true;
    }
  }
  return false;
}

/// Diagonal monotone alignment covering every word of both sides.
inline std::vector<Link> staircase_links(std::size_t m, std::size_t n) {
  std::vector<Link> links;
  const std::size_t steps = std::max(m, n);
  if (m == 0 || n == 0) return links;
  for (std::size_t k = 0; k < steps; ++k) links.push_back({k * m / steps, k * n / steps});
  return links;
}

class SyntheticGenerator {
 public:
  explicit SyntheticGenerator(SyntheticConfig config) : config_(std::move(config)), rng_(config_.seed) {
    if (config_.topologies.empty()) throw DomainError("at least one topology is required");
    if (config_.min_words > config_.max_words) throw DomainError("min_words exceeds max_words");
    if (config_.ms_per_word <= 0) throw DomainError("ms_per_word must be positive");
  }

  std::vector<UtterancePair> generate() {
    std::vector<UtterancePair> out;
    out.reserve(config_.count);
    for (std::size_t k = 0; k < config_.count; ++k) {
      out.push_back(make_pair(k, config_.topologies[k % config_.topologies.size()]));
    }
    return out;
  }

 private:
  // Uniform integer in [lo, hi] by rejection sampling.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return rng_();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = rng_();
    } while (x >= limit);
    return lo + x % span;
  }

  std::size_t length(std::size_t floor) {
    const std::size_t lo = std::max(config_.min_words, floor);
    const std::size_t hi = std::max(config_.max_words, lo);
    return static_cast<std::size_t>(uniform(lo, hi));
  }

  Token word(const std::array<std::string_view, 8>& syllables) {
    std::string w;
    const auto count = uniform(1, 3);
    for (std::uint64_t s = 0; s < count; ++s) w += syllables[uniform(0, syllables.size() - 1)];
    return Token(std::move(w));
  }

  UtterancePair make_pair(std::size_t index, Topology topology) {
    static constexpr std::array<std::string_view, 8> kSrcSyllables = {"ka", "lo", "mi", "ne", "su", "ta", "ri", "vo"};
    static constexpr std::array<std::string_view, 8> kTgtSyllables = {"ba", "de", "fi", "go", "hu", "ja", "ke", "pu"};

    const std::size_t floor = topology == Topology::Crossing ? 2 : 0;
    std::size_t m = length(floor);
    std::size_t n = length(floor);
    if (topology == Topology::ManyToOne && m == n && m > 1) {
      // Unequal lengths force at least one many-to-one (or one-to-many) link.
      if (n > std::max<std::size_t>(config_.min_words, 1)) --n;
      else if (m < config_.max_words) ++m;
    }

    UtterancePair p;
    p.id = "syn" + std::to_string(config_.seed) + "-" + std::to_string(index);
    p.src_lang = config_.src_lang;
    p.tgt_lang = config_.tgt_lang;
    for (std::size_t i = 0; i < m; ++i) p.transcription.push_back(word(kSrcSyllables));
    for (std::size_t j = 0; j < n; ++j) p.translation.push_back(word(kTgtSyllables));

    std::vector<Link> links = staircase_links(m, n);
    if (topology == Topology::Crossing) cross(links, n);
    if (topology == Topology::Sparse) {
      std::vector<Link> kept;
      for (const Link& l : links) {
        if (uniform(0, 1) == 1) kept.push_back(l);
      }
      links = std::move(kept);
    }
    p.alignment = Alignment(std::move(links));
    p.duration_ms = config_.ms_per_word * static_cast<std::int64_t>(std::max<std::size_t>(m, 1));
    return p;
  }

  // Swaps two neighbouring target positions whose source ranges differ,
  // which turns the staircase into an alignment with a crossing.
  void cross(std::vector<Link>& links, std::size_t n) {
    std::vector<std::size_t> first_src(n, std::numeric_limits<std::size_t>::max()), last_src(n, 0);
    for (const Link& l : links) {
      first_src[l.tgt] = std::min(first_src[l.tgt], l.src);
      last_src[l.tgt] = std::max(last_src[l.tgt], l.src);
    }
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (last_src[j + 1] > first_src[j]) candidates.push_back(j);
    }
    if (candidates.empty()) return;
    const std::size_t j = candidates[uniform(0, candidates.size() - 1)];
    for (Link& l : links) {
      if (l.tgt == j) l.tgt = j + 1;
      else if (l.tgt == j + 1) l.tgt = j;
    }
  }

  SyntheticConfig config_;
  std::mt19937_64 rng_;
};

inline std::vector<UtterancePair> generate_synthetic(const SyntheticConfig& config) {
  return SyntheticGenerator(config).generate();
}

}  // namespace tsot

#endif  // TSOT_SYNTHETIC_HPP
