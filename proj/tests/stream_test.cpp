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

#include "tsot/stream.hpp"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace tsot {
namespace {

using Strings = std::vector<std::string>;

TEST(StreamParser, EmitsIncrementally) {
  StreamParser parser;
  std::vector<Emission> emitted;
  for (const char* t : {"#ASR#", "Ich", "#ST#", "I"}) {
    if (auto e = parser.feed(t)) emitted.push_back(*e);
  }
  EXPECT_EQ(emitted, (std::vector<Emission>{{Task::Asr, "Ich"}, {Task::St, "I"}}));
  EXPECT_EQ(parser.tokens_seen(), 4u);
  EXPECT_EQ(parser.current_task(), Task::St);
  EXPECT_TRUE(parser.warnings().empty());
}

TEST(StreamParser, NothingFed) {
  StreamParser parser;
  EXPECT_TRUE(parser.asr().empty());
  EXPECT_TRUE(parser.st().empty());
  EXPECT_FALSE(parser.current_task().has_value());
  EXPECT_EQ(parser.tokens_seen(), 0u);
}

TEST(StreamParser, UntaggedTokenDefaultsToAsrWithWarning) {
  StreamParser parser;
  const auto e = parser.feed("Hallo");
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(*e, (Emission{Task::Asr, "Hallo"}));
  EXPECT_EQ(parser.warnings().size(), 1u);
  // The implicit ASR task stays open; no further warnings.
  parser.feed("Welt");
  EXPECT_EQ(parser.asr(), (Strings{"Hallo", "Welt"}));
  EXPECT_EQ(parser.warnings().size(), 1u);
}

TEST(StreamParser, EmptyTokenIgnoredWithWarning) {
  StreamParser parser;
  parser.feed("#ST#");
  EXPECT_FALSE(parser.feed("").has_value());
  EXPECT_TRUE(parser.st().empty());
  EXPECT_EQ(parser.warnings().size(), 1u);
  EXPECT_EQ(parser.tokens_seen(), 2u);
}

TEST(Split, GoldenAlignRow) {
  const SplitResult r = split_joined(testing::kGoldenAlign);
  EXPECT_EQ(r.asr, (Strings{"Ich", "brauche", "das", "wirklich."}));
  EXPECT_EQ(r.st, (Strings{"I", "really", "need", "it."}));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Split, TagsOnly) {
  const SplitResult r = split(Strings{"#ASR#", "#ST#"});
  EXPECT_TRUE(r.asr.empty());
  EXPECT_TRUE(r.st.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Split, RepeatedTagsMerge) {
  const SplitResult r = split(Strings{"#ASR#", "a", "#ASR#", "b"});
  EXPECT_EQ(r.asr, (Strings{"a", "b"}));
  EXPECT_TRUE(r.st.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Split, EqualsFoldOfFeed) {
  std::mt19937_64 rng(2);
  const Strings vocab{"#ASR#", "#ST#", "a", "b", "c", ""};
  for (int trial = 0; trial < 300; ++trial) {
    Strings tokens;
    for (std::size_t k = rng() % 15; k > 0; --k) tokens.push_back(vocab[rng() % vocab.size()]);
    StreamParser parser;
    for (const auto& t : tokens) parser.feed(t);
    const SplitResult r = split(tokens);
    EXPECT_EQ(r.asr, parser.asr());
    EXPECT_EQ(r.st, parser.st());
    EXPECT_EQ(r.warnings, parser.warnings());
  }
}

TEST(RoundtripCheck, GoldenPair) {
  const UtterancePair p = testing::golden_pair();
  EXPECT_TRUE(roundtrip_check(p, serialize_align(p)).ok);
}

TEST(RoundtripCheck, EmptyPair) {
  const UtterancePair p = testing::make_pair(0, 0);
  EXPECT_TRUE(roundtrip_check(p, SerializedStream{}).ok);
}

TEST(RoundtripCheck, DeletedWordReportsPosition) {
  const UtterancePair p = testing::golden_pair();
  SerializedStream corrupted;
  corrupted.append(Task::Asr, Token("Ich"));
  corrupted.append(Task::St, Token("I"));
  for (const char* w : {"brauche", "wirklich."}) corrupted.append(Task::Asr, Token(w));
  for (const char* w : {"really", "need", "it."}) corrupted.append(Task::St, Token(w));
  const RoundtripReport r = roundtrip_check(p, corrupted);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.asr_divergence, 2u);
  EXPECT_FALSE(r.st_divergence.has_value());
  EXPECT_NE(r.describe().find("ASR differs at position 2"), std::string::npos);
}

TEST(RoundtripCheck, TruncationReportsLength) {
  const UtterancePair p = testing::golden_pair();
  const RoundtripReport r = roundtrip_check(p, Strings{"#ASR#", "Ich", "brauche", "das", "wirklich.", "#ST#", "I"});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.st_divergence, 1u);
}

TEST(Split, PrefixMonotone) {
  std::mt19937_64 rng(9);
  const Strings vocab{"#ASR#", "#ST#", "x", "y"};
  for (int trial = 0; trial < 200; ++trial) {
    Strings tokens;
    for (std::size_t k = rng() % 25; k > 0; --k) tokens.push_back(vocab[rng() % vocab.size()]);
    const SplitResult full = split(tokens);
    for (std::size_t len = 0; len <= tokens.size(); ++len) {
      const SplitResult part = split(Strings(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(len)));
      ASSERT_LE(part.asr.size(), full.asr.size());
      ASSERT_LE(part.st.size(), full.st.size());
      EXPECT_TRUE(std::equal(part.asr.begin(), part.asr.end(), full.asr.begin()));
      EXPECT_TRUE(std::equal(part.st.begin(), part.st.end(), full.st.begin()));
    }
  }
}

}  // namespace
}  // namespace tsot
