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

// tsot: build, split, check, score and simulate joint ASR+ST serialized
// references. Every subcommand reads and writes JSONL; "-" means stdin or
// stdout. Summaries go to stderr (as JSON with --json) unless the summary is
// the subcommand's output.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsot/tsot.hpp"

namespace {

using nlohmann::json;
using namespace tsot;

struct RunConfig {
  std::string input = "-";
  std::string output = "-";
  bool json_report = false;
  bool skip_bad = false;

  std::string strategy = "align";
  std::string strategies = "inter0.0,inter1.0,inter0.5,align";
  std::int64_t chunk_ms = 1000;
  std::string table_path;

  std::string hyp_path;
  std::string pooling = "per-utterance";

  std::uint64_t seed = 0;
  std::size_t count = 10;
  std::string topology = "monotone";
  std::size_t min_words = 1;
  std::size_t max_words = 30;
  std::int64_t ms_per_word = 1000;
  std::string src_lang = "xx";
  std::string tgt_lang = "yy";
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) throw IoError("cannot open '" + path + "' for reading");
    }
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }
  void finish() {
    get().flush();
    if (!get()) throw IoError("write failure");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Walks the non-blank lines of a JSONL stream. A record-level error either
// aborts the run or, with --skip-bad, is reported and the record dropped.
class RecordLoop {
 public:
  RecordLoop(std::istream& in, bool skip_bad) : in_(in), skip_bad_(skip_bad) {}

  template <typename Fn>
  void run(Fn&& handle) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in_, line)) {
      ++line_no;
      if (is_blank(line)) continue;
      const std::string where = "line " + std::to_string(line_no);
      try {
        json j;
        try {
          j = json::parse(line);
        } catch (const json::parse_error& e) {
          throw ParseError(where + ": invalid JSON: " + e.what());
        }
        handle(j, where);
        ++processed_;
      } catch (const tsot::Error& e) {
        if (!skip_bad_) throw;
        std::cerr << "skipped " << e.what() << "\n";
        ++skipped_;
      }
    }
    if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  }

  std::size_t processed() const { return processed_; }
  std::size_t skipped() const { return skipped_; }

 private:
  std::istream& in_;
  bool skip_bad_;
  std::size_t processed_ = 0;
  std::size_t skipped_ = 0;
};

void report(const RunConfig& cfg, const json& summary, const std::string& text) {
  if (cfg.json_report) std::cerr << summary.dump() << "\n";
  else std::cerr << text << "\n";
}

std::string fixed(std::optional<double> v, int precision = 1) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *v;
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_serialize(const RunConfig& cfg) {
  const Strategy strategy = parse_strategy(cfg.strategy);
  Input in(cfg.input);
  Output out(cfg.output);
  std::size_t tokens = 0, segments = 0;
  RecordLoop loop(in.get(), cfg.skip_bad);
  loop.run([&](json j, const std::string& where) {
    const UtterancePair p = parse_record(j, where);
    SerializedStream s;
    try {
      s = serialize(p, strategy);
    } catch (const PreconditionError& e) {
      throw PreconditionError(where + ": " + e.what());
    }
    j["tsot"] = to_tsot_string(s);
    out.get() << j.dump() << "\n";
    tokens += s.token_count();
    segments += s.segments().size();
  });
  out.finish();
  report(cfg,
         {{"strategy", strategy.name()},
          {"utterances", loop.processed()},
          {"skipped", loop.skipped()},
          {"tokens", tokens},
          {"segments", segments}},
         "serialized " + std::to_string(loop.processed()) + " utterances with " + strategy.name() + " (" +
             std::to_string(loop.skipped()) + " skipped): " + std::to_string(tokens) + " tokens, " +
             std::to_string(segments) + " segments");
  return 0;
}

int cmd_split(const RunConfig& cfg) {
  Input in(cfg.input);
  Output out(cfg.output);
  std::size_t warned = 0;
  RecordLoop loop(in.get(), cfg.skip_bad);
  loop.run([&](const json& j, const std::string& where) {
    const auto it = j.find("tsot");
    if (it == j.end() || !it->is_string()) throw ParseError(where + ": missing string field 'tsot'");
    const SplitResult r = split_joined(it->get<std::string>());
    json o;
    if (const auto id = j.find("id"); id != j.end()) o["id"] = *id;
    o["asr"] = join(r.asr);
    o["st"] = join(r.st);
    o["warnings"] = r.warnings;
    out.get() << o.dump() << "\n";
    if (!r.warnings.empty()) ++warned;
  });
  out.finish();
  report(cfg, {{"records", loop.processed()}, {"skipped", loop.skipped()}, {"records_with_warnings", warned}},
         "split " + std::to_string(loop.processed()) + " records (" + std::to_string(warned) + " with warnings, " +
             std::to_string(loop.skipped()) + " skipped)");
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  Input in(cfg.input);
  Output out(cfg.output);
  json failures = json::array();
  RecordLoop loop(in.get(), cfg.skip_bad);
  loop.run([&](const json& j, const std::string& where) {
    const UtterancePair p = parse_record(j, where);
    const auto it = j.find("tsot");
    if (it == j.end() || !it->is_string()) throw ParseError(where + ": missing string field 'tsot'");
    const RoundtripReport r = roundtrip_check(p, split_whitespace(it->get<std::string>()));
    if (!r.ok) {
      failures.push_back({{"id", p.id},
                          {"asr_divergence", r.asr_divergence ? json(*r.asr_divergence) : json(nullptr)},
                          {"st_divergence", r.st_divergence ? json(*r.st_divergence) : json(nullptr)},
                          {"detail", r.describe()}});
    }
  });
  const bool ok = failures.empty();
  if (cfg.json_report) {
    out.get() << json{{"records", loop.processed()}, {"skipped", loop.skipped()}, {"failures", failures}}.dump()
              << "\n";
  } else {
    out.get() << loop.processed() << " records, " << failures.size() << " failed";
    if (loop.skipped() > 0) out.get() << ", " << loop.skipped() << " skipped";
    out.get() << "\n";
    for (const auto& f : failures) {
      out.get() << "  " << f["id"].get<std::string>() << ": " << f["detail"].get<std::string>() << "\n";
    }
  }
  out.finish();
  return ok ? 0 : 1;
}

int cmd_eval(const RunConfig& cfg) {
  if (cfg.hyp_path.empty()) throw PreconditionError("eval needs --hyp <delay-log.jsonl>");
  const LatencyPooling pooling = cfg.pooling == "pooled" ? LatencyPooling::Pooled : LatencyPooling::PerUtterance;

  Input ref_in(cfg.input);
  std::map<std::string, UtterancePair> refs;
  for (UtterancePair& p : load_corpus(ref_in.get())) refs.emplace(p.id, std::move(p));

  // strategy -> lang pair -> (references, hypotheses)
  struct Group {
    std::vector<UtterancePair> refs;
    std::vector<JointDelayLog> hyps;
  };
  std::map<std::string, std::map<std::string, Group>> groups;
  Input hyp_in(cfg.hyp_path);
  RecordLoop loop(hyp_in.get(), cfg.skip_bad);
  loop.run([&](const json& j, const std::string& where) {
    JointDelayLog d = parse_delay_record(j, where);
    const auto ref = refs.find(d.id);
    if (ref == refs.end()) throw ParseError(where + ": no reference with id '" + d.id + "'");
    Group& g = groups[d.strategy.empty() ? "default" : d.strategy][ref->second.lang_pair()];
    g.refs.push_back(ref->second);
    g.hyps.push_back(std::move(d));
  });

  json result = json::object();
  for (const auto& [strategy, by_pair] : groups) {
    json entry;
    Group all;
    for (const auto& [lang_pair, g] : by_pair) {
      entry["by_lang_pair"][lang_pair] = to_json(evaluate(g.refs, g.hyps, pooling));
      all.refs.insert(all.refs.end(), g.refs.begin(), g.refs.end());
      all.hyps.insert(all.hyps.end(), g.hyps.begin(), g.hyps.end());
    }
    entry["corpus"] = to_json(evaluate(all.refs, all.hyps, pooling));
    result[strategy] = entry;
  }
  Output out(cfg.output);
  out.get() << result.dump(2) << "\n";
  out.finish();
  if (loop.skipped() > 0) std::cerr << "skipped " << loop.skipped() << " delay records\n";
  return 0;
}

json latency_table_json(const std::vector<StrategyLatency>& table, std::int64_t chunk_ms) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : table) {
    rows.push_back({{"strategy", r.strategy.name()},
                    {"asr_laal_ms", opt(r.asr_laal_ms)},
                    {"st_laal_ms", opt(r.st_laal_ms)},
                    {"asr_al_ms", opt(r.asr_al_ms)},
                    {"st_al_ms", opt(r.st_al_ms)},
                    {"asr_scored", r.asr_scored},
                    {"st_scored", r.st_scored}});
  }
  return {{"chunk_ms", chunk_ms}, {"strategies", rows}};
}

std::string latency_table_text(const std::vector<StrategyLatency>& table) {
  std::ostringstream s;
  s << std::left << std::setw(12) << "strategy" << std::right << std::setw(14) << "ASR LAAL" << std::setw(14)
    << "ST LAAL" << std::setw(14) << "ASR AL" << std::setw(14) << "ST AL" << "\n";
  for (const auto& r : table) {
    s << std::left << std::setw(12) << r.strategy.name() << std::right << std::setw(14) << fixed(r.asr_laal_ms)
      << std::setw(14) << fixed(r.st_laal_ms) << std::setw(14) << fixed(r.asr_al_ms) << std::setw(14)
      << fixed(r.st_al_ms) << "\n";
  }
  return s.str();
}

int cmd_simulate(const RunConfig& cfg) {
  const EmissionPolicy policy{cfg.chunk_ms};
  policy.validate();
  std::vector<Strategy> strategies;
  for (const auto& name : split_list(cfg.strategies)) strategies.push_back(parse_strategy(name));
  if (strategies.empty()) throw PreconditionError("--strategies is empty");

  Input in(cfg.input);
  std::vector<UtterancePair> corpus;
  RecordLoop loop(in.get(), cfg.skip_bad);
  loop.run([&](const json& j, const std::string& where) {
    UtterancePair p = parse_record(j, where);
    try {
      emittable_times(p, policy);
    } catch (const tsot::Error& e) {
      throw PreconditionError(where + ": " + e.what());
    }
    corpus.push_back(std::move(p));
  });

  Output out(cfg.output);
  std::vector<StrategyLatency> table;
  for (const Strategy& s : strategies) {
    const auto logs = simulate_corpus(corpus, s, policy);
    for (const auto& log : logs) out.get() << to_json(log).dump() << "\n";
    table.push_back(summarize_latency(s, corpus, logs));
  }
  out.finish();

  const json table_json = latency_table_json(table, cfg.chunk_ms);
  if (!cfg.table_path.empty()) {
    Output t(cfg.table_path);
    t.get() << table_json.dump(2) << "\n";
    t.finish();
  }
  report(cfg, table_json, latency_table_text(table));
  return 0;
}

int cmd_stats(const RunConfig& cfg) {
  std::optional<Strategy> strategy;
  if (!cfg.strategy.empty()) strategy = parse_strategy(cfg.strategy);
  Input in(cfg.input);
  std::size_t src_words = 0, tgt_words = 0, aligned = 0, links = 0, crossing = 0, unaligned_src = 0,
              unaligned_tgt = 0, with_duration = 0, segments = 0, serialized = 0;
  std::map<std::string, std::size_t> lang_pairs;
  RecordLoop loop(in.get(), cfg.skip_bad);
  loop.run([&](const json& j, const std::string& where) {
    const UtterancePair p = parse_record(j, where);
    src_words += p.m();
    tgt_words += p.n();
    ++lang_pairs[p.lang_pair()];
    if (p.duration_ms) ++with_duration;
    if (p.alignment) {
      ++aligned;
      links += p.alignment->size();
      if (has_crossing(*p.alignment)) ++crossing;
      std::vector<bool> s(p.m()), t(p.n());
      for (const Link& l : *p.alignment) s[l.src] = t[l.tgt] = true;
      unaligned_src += static_cast<std::size_t>(std::count(s.begin(), s.end(), false));
      unaligned_tgt += static_cast<std::size_t>(std::count(t.begin(), t.end(), false));
    }
    if (strategy && (!strategy->is_align() || p.alignment)) {
      segments += serialize(p, *strategy).segments().size();
      ++serialized;
    }
  });

  json j{{"utterances", loop.processed()},
         {"skipped", loop.skipped()},
         {"src_words", src_words},
         {"tgt_words", tgt_words},
         {"with_alignment", aligned},
         {"with_duration", with_duration},
         {"links", links},
         {"crossing_utterances", crossing},
         {"unaligned_src_words", unaligned_src},
         {"unaligned_tgt_words", unaligned_tgt},
         {"lang_pairs", lang_pairs}};
  if (strategy) {
    j["strategy"] = strategy->name();
    j["segments"] = segments;
    j["serialized_utterances"] = serialized;
  }

  Output out(cfg.output);
  if (cfg.json_report) {
    out.get() << j.dump(2) << "\n";
  } else {
    const double n = loop.processed() > 0 ? static_cast<double>(loop.processed()) : 1.0;
    out.get() << "utterances           " << loop.processed() << "\n"
              << "source words         " << src_words << " (" << fixed(src_words / n) << " per utterance)\n"
              << "target words         " << tgt_words << " (" << fixed(tgt_words / n) << " per utterance)\n"
              << "aligned utterances   " << aligned << " (" << links << " links, " << crossing << " with crossings)\n"
              << "unaligned words      " << unaligned_src << " source, " << unaligned_tgt << " target\n"
              << "with duration        " << with_duration << "\n";
    for (const auto& [pair, c] : lang_pairs) out.get() << "lang pair " << std::setw(11) << std::left << pair << c << "\n";
    if (strategy) {
      out.get() << "segments (" << strategy->name() << ")  " << segments << " over " << serialized
                << " utterances\n";
    }
  }
  out.finish();
  return 0;
}

int cmd_gen_synthetic(const RunConfig& cfg) {
  SyntheticConfig sc;
  sc.seed = cfg.seed;
  sc.count = cfg.count;
  sc.topologies.clear();
  for (const auto& t : split_list(cfg.topology)) sc.topologies.push_back(parse_topology(t));
  sc.min_words = cfg.min_words;
  sc.max_words = cfg.max_words;
  sc.ms_per_word = cfg.ms_per_word;
  sc.src_lang = cfg.src_lang;
  sc.tgt_lang = cfg.tgt_lang;
  const auto corpus = generate_synthetic(sc);
  Output out(cfg.output);
  for (const auto& p : corpus) out.get() << to_json(p).dump() << "\n";
  out.finish();
  report(cfg, {{"utterances", corpus.size()}, {"seed", cfg.seed}},
         "generated " + std::to_string(corpus.size()) + " utterances (seed " + std::to_string(cfg.seed) + ")");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Joint ASR+ST serialized-output-training toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-i,--input", cfg.input, "Input JSONL file, '-' for stdin")->capture_default_str();
  app.add_option("-o,--output", cfg.output, "Output file, '-' for stdout")->capture_default_str();
  app.add_flag("--json", cfg.json_report, "Emit reports as JSON");

  auto* serialize_cmd = app.add_subcommand("serialize", "Add a joint 'tsot' reference to every corpus record");
  serialize_cmd->add_option("-s,--strategy", cfg.strategy, "inter0.0, inter1.0, inter0.5, gamma:<float> or align")
      ->capture_default_str();
  serialize_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* split_cmd = app.add_subcommand("split", "Split 'tsot' streams into 'asr' and 'st'");
  split_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* validate_cmd = app.add_subcommand("validate", "Check that every 'tsot' splits back into 'src' and 'tgt'");
  validate_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* eval_cmd = app.add_subcommand("eval", "Score delay-logged hypotheses (WER, BLEU, AL, LAAL)");
  eval_cmd->add_option("--hyp", cfg.hyp_path, "Delay-log JSONL with id, duration_ms, tokens, delays_ms")->required();
  eval_cmd->add_option("--pooling", cfg.pooling, "Latency aggregation: per-utterance or pooled")
      ->check(CLI::IsMember({"per-utterance", "pooled"}))
      ->capture_default_str();
  eval_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate chunked streaming emission and compare strategies");
  simulate_cmd->add_option("--chunk-ms", cfg.chunk_ms, "Encoder chunk size in milliseconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate_cmd->add_option("--strategies", cfg.strategies, "Comma-separated strategies")->capture_default_str();
  simulate_cmd->add_option("--table", cfg.table_path, "Also write the comparison table as JSON to this file");
  simulate_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  std::string stats_strategy;
  stats_cmd->add_option("-s,--strategy", stats_strategy, "Also count segments under this strategy");
  stats_cmd->add_flag("--skip-bad", cfg.skip_bad, "Report and drop bad records instead of aborting");

  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Generate a seeded synthetic aligned corpus");
  gen_cmd->add_option("--seed", cfg.seed, "Random seed")->required();
  gen_cmd->add_option("-n,--count", cfg.count, "Number of utterances")->capture_default_str();
  gen_cmd->add_option("--topology", cfg.topology, "Comma list of monotone, crossing, many-to-one, sparse")
      ->capture_default_str();
  gen_cmd->add_option("--min-words", cfg.min_words, "Minimum words per side")->capture_default_str();
  gen_cmd->add_option("--max-words", cfg.max_words, "Maximum words per side")->capture_default_str();
  gen_cmd->add_option("--ms-per-word", cfg.ms_per_word, "Source audio per word")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--src-lang", cfg.src_lang)->capture_default_str();
  gen_cmd->add_option("--tgt-lang", cfg.tgt_lang)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (serialize_cmd->parsed()) return cmd_serialize(cfg);
    if (split_cmd->parsed()) return cmd_split(cfg);
    if (validate_cmd->parsed()) return cmd_validate(cfg);
    if (eval_cmd->parsed()) return cmd_eval(cfg);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg);
    if (stats_cmd->parsed()) {
      cfg.strategy = stats_strategy;
      return cmd_stats(cfg);
    }
    if (gen_cmd->parsed()) return cmd_gen_synthetic(cfg);
  } catch (const tsot::Error& e) {
    std::cerr << "tsot: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tsot: unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
