/*
 * Copyright 2026 The assemblies-parser Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "assemblies/lexicon.hpp"
#include "assemblies/parser.hpp"
#include "assemblies/trees.hpp"

namespace assemblies {

struct CorpusCase {
    std::string sentence;
    std::vector<std::string> words;  // tokens without commas; tree indices refer to these
    DependencyTree expected_dependency;
    std::optional<ConstituencyTree> expected_constituency;
    nlohmann::json tags = nlohmann::json::object();
};

/// Reference corpus: sentences paired with expected trees. `mode` records
/// the parser modes the references were written for.
struct Corpus {
    bool constituency = false;
    bool embedding = false;
    std::vector<CorpusCase> cases;

    static Corpus from_json(const nlohmann::json& doc);
    static Corpus load(const std::string& path);
    nlohmann::json to_json() const;
};

struct CaseResult {
    std::size_t index = 0;
    std::string sentence;
    bool passed = false;
    std::string error;  // parse or readout failure; empty otherwise
    std::optional<DependencyTree> dependency;
    std::optional<ConstituencyTree> constituency;
    std::vector<DependencyEdge> missing_edges;  // expected but not read out
    std::vector<DependencyEdge> extra_edges;    // read out but not expected
    bool root_matches = true;
    bool constituency_matches = true;
    PhaseCounters parse;
    PhaseCounters touch;
    PhaseCounters link;

    nlohmann::json to_json() const;
};

struct RunReport {
    ParserConfig config;
    std::vector<CaseResult> cases;
    std::size_t passed = 0;
    PhaseCounters parse;  // summed over cases
    PhaseCounters touch;
    PhaseCounters link;
    double seconds = 0.0;  // wall clock for the whole run

    bool all_passed() const noexcept { return passed == cases.size(); }
    /// Timing fields are omitted when `timing` is false so the JSON is
    /// reproducible byte for byte for a given seed.
    nlohmann::json to_json(bool timing = true) const;
};

/// Parses every case with its own Brain. Cases run on `threads` workers
/// (0: hardware concurrency); results are ordered by case index and do not
/// depend on the thread count. The lexicon must match config.lex_params().
RunReport run_corpus(const Corpus& corpus, const Lexicon& lexicon, const ParserConfig& config,
                     unsigned threads = 0);

/// Structural and wall-clock comparison of the parser's phases.
struct BenchReport {
    RunReport dependency;    // constituency off
    RunReport constituency;  // constituency on
    double parse_rounds_per_word = 0;   // dependency-only mode
    double touch_rounds_per_word = 0;   // 0 when nothing was touched
    double touch_round_ratio = 0;       // parse / touch rounds per word
    double parse_seconds_per_word = 0;
    double touch_seconds_per_word = 0;
    double touch_speedup = 0;           // wall clock, parse / touch per word
    double dependency_ops_per_word = 0;
    double constituency_ops_per_word = 0;
    double constituency_seconds_per_word = 0;
    double constituency_slowdown = 0;   // wall clock, constituency / dependency per word
    bool rounds_exact = false;          // parse rounds == config.rounds, touch rounds == 1
    bool constituency_more_work = false;

    nlohmann::json to_json() const;
};

BenchReport run_bench(const Corpus& corpus, const Lexicon& lexicon, const ParserConfig& config,
                      unsigned threads = 0);

}  // namespace assemblies
