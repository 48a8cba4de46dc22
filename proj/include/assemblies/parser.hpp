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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "assemblies/brain.hpp"
#include "assemblies/lexicon.hpp"
#include "assemblies/trees.hpp"

namespace assemblies {

struct ParserConfig {
    bool constituency = false;
    bool embedding = false;
    unsigned rounds = kDefaultRounds;
    std::uint32_t n = 10000;
    std::uint32_t k = 100;
    double p = 0.05;
    double beta = 0.1;
    // Rates for recurrent synapses, for fibers touching LEX and for the other
    // fibers; unset means `beta`.
    std::optional<double> recurrent_beta = 0.05;
    std::optional<double> lex_beta = 0.1;
    std::optional<double> interarea_beta = 0.05;
    std::uint64_t seed = 0;
    // Minimum overlap, as a fraction of k, for a probe to match a stored assembly.
    double readout_threshold = 0.75;
    // Rounds a readout probe runs in the target area (recurrent completion).
    unsigned readout_rounds = 3;

    void validate() const;
    BrainConfig brain_config() const;
    LexAssemblyParams lex_params() const;

    static ParserConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

/// Clause structure of a sentence, recovered from commas and clause markers.
/// Word indices skip commas.
struct Segmentation {
    std::vector<std::string> words;
    std::vector<std::size_t> depth;
    // A clause one level deeper starts right after word i.
    std::vector<bool> opens_after;
    // Word i is the first word of its clause (depth > 0).
    std::vector<bool> begins_clause;
    // Word i follows a closing comma; the value is the depth parsing returns to.
    std::vector<std::optional<std::size_t>> resumes;
    // clauses[d] lists the words at depth d, ascending. One clause per depth.
    std::vector<std::vector<std::size_t>> clauses;

    std::size_t max_depth() const { return clauses.empty() ? 0 : clauses.size() - 1; }
    nlohmann::json to_json() const;
};

/// Throws ErrorCode::Structure on ill-formed clause markup and
/// ErrorCode::OutOfVocabulary on unknown words. Without embedding every word
/// is at depth 0 and commas are rejected.
Segmentation segment(const std::vector<std::string>& tokens, const Lexicon& lexicon, bool embedding);

struct MemoryItem {
    std::string surface;
    std::size_t depth = 0;
};

/// Words processed so far, in order, with the clause boundaries.
struct WorkingMemory {
    std::vector<MemoryItem> words;
    std::vector<std::vector<std::size_t>> clauses;
};

struct WordRecord {
    std::size_t index = 0;
    std::string surface;
    std::size_t depth = 0;
    // The assembly formed in each free area that received from LEX.
    std::vector<Assembly> assemblies;

    /// Area of the first assembly, empty when none formed.
    std::string area() const;
    const Assembly* in(std::string_view area) const;
};

struct SignatureLink {
    std::size_t depth = 0;  // of the inner clause
    std::size_t signature = 0;
    std::string signature_area;
    Assembly ds;
    std::optional<std::size_t> inner_verb;
};

struct PhaseCounters {
    std::uint64_t words = 0;
    std::uint64_t rounds = 0;
    std::uint64_t synaptic_ops = 0;
    double seconds = 0.0;

    nlohmann::json to_json() const;
};

/// One inhibition change with its provenance.
struct InhibitionEvent {
    std::size_t word = 0;
    std::string phase;  // pre, post, link, inner-verb, constituency, slate, start
    std::string change;
};

struct ParseRecord {
    ParserConfig config;
    Segmentation segmentation;
    WorkingMemory memory;
    std::vector<WordRecord> words;
    std::vector<WordRecord> touches;
    std::vector<SignatureLink> links;
    Assembly final_vp;
    Assembly final_s;
    PhaseCounters parse;
    PhaseCounters touch;
    PhaseCounters link;
    std::vector<double> word_seconds;
    std::vector<InhibitionEvent> audit;
    std::shared_ptr<const Brain> brain;

    nlohmann::json to_json() const;
};

/// Word-level control of one parse. Parser::parse drives it; it is public so
/// touching and slate clearing can be exercised on their own.
class ParseSession {
public:
    ParseSession(const Lexicon& lexicon, const ParserConfig& config);

    /// Parses the next word with project*.
    const WordRecord& parse_word(std::string_view surface, std::size_t depth = 0);
    /// Reactivates word `index` with a single firing round.
    const WordRecord& touch_word(std::size_t index);
    /// Links the signature at or before word `index` to a new DS assembly for
    /// the clause at `inner_depth`.
    const SignatureLink& link_signature(std::size_t index, std::size_t inner_depth);
    void clear_slate();

    Brain& brain() { return brain_; }
    const Brain& brain() const { return brain_; }
    const std::vector<WordRecord>& words() const { return record_.words; }

    /// Ends the session; the brain moves into the record.
    ParseRecord finish();

private:
    enum class Phase { Parse, Touch };

    WordRecord run_word(std::size_t index, std::string_view surface, std::size_t depth,
                        Phase phase);
    void apply(const Action& action, std::size_t word, const char* phase);
    void note(std::size_t word, const char* phase, std::string change);
    void pin_all_except(const std::vector<std::string>& free);
    // Constituency phase of a word: S and VP project from the pinned roles.
    void build_constituents(std::size_t index, unsigned rounds);

    const Lexicon& lexicon_;
    ParserConfig config_;
    Brain brain_;
    ParseRecord record_;
    std::vector<std::string> role_areas_;
};

class Parser {
public:
    /// The lexicon's assemblies must match the LEX area size of `config`.
    Parser(const Lexicon& lexicon, ParserConfig config);

    const ParserConfig& config() const noexcept { return config_; }
    const Lexicon& lexicon() const noexcept { return lexicon_; }

    /// Tokens are words and "," marks.
    ParseRecord parse(const std::vector<std::string>& tokens) const;
    ParseRecord parse(std::string_view sentence) const;

    DependencyTree readout_dependencies(const ParseRecord& record) const;
    ConstituencyTree readout_constituency(const ParseRecord& record) const;

    /// Surface form whose LEX assembly best matches the response of LEX to
    /// `role_assembly`; nullopt below threshold.
    std::optional<std::string> identify(const ParseRecord& record, const Assembly& role_assembly) const;

private:
    std::size_t threshold() const;

    const Lexicon& lexicon_;
    ParserConfig config_;
};

}  // namespace assemblies
