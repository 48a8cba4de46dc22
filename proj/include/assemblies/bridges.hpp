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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "assemblies/fba.hpp"
#include "assemblies/pda.hpp"

namespace assemblies {

/// Subset construction on the seen-typed rules. States of the result are
/// non-empty subsets of the input's states, named "{a,b}". Fresh and marked
/// cells, and the end of the tape, collapse a subset to any one member.
/// Marks store result states (MarkValue::Result).
Fba s_determinize(const Fba& fba);

/// Pushdown automaton simulating an s-deterministic FBA. The stack holds
/// (symbol, mark, state vector) triples; a vector entry is the state reached
/// by replaying the seen cells after that mark from each FBA state, or dead.
/// The stack alphabet is discovered during simulation, so the machine is kept
/// in this symbolic form rather than as a Pda transition table.
class CompiledPda {
public:
    /// Throws InvalidArgument unless `fba` is s-deterministic.
    explicit CompiledPda(Fba fba);

    const Fba& fba() const noexcept { return fba_; }
    std::size_t state_count() const noexcept { return fba_.states().size(); }
    /// |sigma| * |K| * (|K| + 1)^|K|, counting the dead vector entry.
    double stack_alphabet_bound() const;

    /// Default bounds: stack <= |x|, epsilon chains <= |K| * |x|.
    PdaRun run(const std::vector<std::uint32_t>& word, const PdaBounds& bounds = {}) const;
    bool accepts(const std::vector<std::uint32_t>& word, const PdaBounds& bounds = {}) const;

    /// Configurations of one accepting run, first to last; empty when the
    /// word is rejected. Used to check the simulation invariants.
    struct TraceStep {
        std::uint32_t state = 0;
        bool in_fallback_loop = false;
        std::size_t position = 0;
        std::size_t stack_height = 0;
    };
    std::vector<TraceStep> accepting_trace(const std::vector<std::uint32_t>& word) const;

    nlohmann::json to_json() const;

private:
    static constexpr std::uint32_t kDead = 0xffffffffu;
    struct FrameTable;

    PdaMoveFn moves(FrameTable& frames) const;
    bool is_accepting(std::uint32_t pda_state) const;

    Fba fba_;
    // Seen-cell transition table: [symbol][state] -> state or kDead.
    std::vector<std::vector<std::uint32_t>> delta_s_;
};

CompiledPda fba_to_pda(const Fba& fba);

/// Nondeterministic finite automaton without epsilon moves.
struct Nfa {
    std::vector<std::string> sigma;
    std::vector<std::string> states;
    std::vector<std::uint32_t> initial;
    std::vector<std::uint32_t> accepting;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> transitions;  // from, sym, to

    /// One state accepting every string over `sigma`.
    static Nfa universal(std::vector<std::string> sigma);
    static Nfa from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
    void validate() const;
    bool accepts(const std::vector<std::string>& word) const;
};

/// A context-free language given as R ∩ h(D_k).
struct CsInstance {
    // brackets[i] = {open, close} names of kind i; k = brackets.size().
    std::vector<std::pair<std::string, std::string>> brackets;
    std::map<std::string, std::vector<std::string>> h;
    Nfa r;

    std::size_t k() const noexcept { return brackets.size(); }
    /// Alphabet of the language: R's alphabet, then any further image symbols.
    std::vector<std::string> sigma() const;
    void validate() const;

    /// {"k", "brackets": [[open, close], ...], "h": {bracket: image}, "R": NFA}.
    /// Without "brackets" the first k of (), [], {}, <> are used; without
    /// "R" the instance intersects with every string over the images.
    static CsInstance from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

/// Weak FBA for R ∩ h(D_k). States pair recognition progress with an R state;
/// an open bracket marks its image's last cell with a state naming the kind,
/// a close bracket falls back and needs a matching mark. Marks also record
/// whether the bracket opened at depth zero so acceptance can require balance.
Fba cs_weak_fba(const CsInstance& instance);

struct RandomFbaParams {
    std::uint32_t max_states = 3;
    std::uint32_t max_symbols = 2;
    std::uint32_t max_rules = 12;
};

/// Random valid FBA. Machines with no fresh-cell rule from an initial state
/// are redrawn.
Fba random_fba(std::mt19937_64& rng, const RandomFbaParams& params = {});

struct SweepMismatch {
    std::size_t machine = 0;
    std::string word;
    bool fba = false;
    bool pda = false;
    nlohmann::json fba_json;
};

struct SweepReport {
    std::size_t machines = 0;
    std::size_t words = 0;
    std::size_t accepted = 0;  // words the FBAs accept, summed over machines
    std::size_t inconclusive = 0;
    std::size_t max_stack = 0;
    std::size_t max_epsilon_chain = 0;
    bool within_bounds = true;  // stack <= |x| and chains <= |K|*|x| on every run
    std::vector<SweepMismatch> mismatches;
    double seconds = 0.0;

    nlohmann::json to_json() const;
};

/// For `machines` random FBAs and every word of length <= max_len, compares
/// accepts(fba) with the compiled PDA of s_determinize(fba).
SweepReport equivalence_sweep(std::size_t machines, std::size_t max_len, std::uint64_t seed,
                              const RandomFbaParams& params = {});

}  // namespace assemblies
