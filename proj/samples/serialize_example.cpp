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

// Serializes one aligned sentence pair with every standard strategy, splits
// each stream back and prints the simulated per-task latency.

#include <iostream>

#include "tsot/tsot.hpp"

int main() {
  tsot::UtterancePair pair;
  pair.id = "demo";
  pair.src_lang = "de";
  pair.tgt_lang = "en";
  pair.transcription = tsot::tokenize("Ich brauche das wirklich.");
  pair.translation = tsot::tokenize("I really need it.");
  pair.alignment = tsot::parse_pharaoh("0-0 1-2 2-3 3-1", pair.m(), pair.n());
  pair.duration_ms = 4000;

  const tsot::EmissionPolicy policy{1000};
  for (const tsot::Strategy& strategy : tsot::standard_strategies()) {
    const tsot::SerializedStream stream = tsot::serialize(pair, strategy);
    const tsot::RoundtripReport check = tsot::roundtrip_check(pair, stream);
    std::cout << strategy.name() << "\n  " << tsot::to_tsot_string(stream) << "\n  round trip "
              << (check.ok ? "ok" : check.describe()) << "\n";

    const tsot::JointDelayLog log = tsot::simulate_emission(pair, stream, policy);
    const tsot::PerTaskDelays routed = tsot::per_task_delays(log.tokens, log.delays_ms, log.duration_ms, log.id);
    std::cout << "  LAAL asr " << tsot::laal(routed.asr, pair.m()) << " ms, st " << tsot::laal(routed.st, pair.n())
              << " ms\n";
  }
}
