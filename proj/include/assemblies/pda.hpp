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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace assemblies {

/// Search limits for PDA simulation. Zero picks the default noted per field.
struct PdaBounds {
    std::size_t max_stack = 0;           // default: input length + initial stack size
    std::size_t max_epsilon_chain = 0;   // default: states * (input length + 1)
};

enum class PdaVerdict { Accept, Reject, Inconclusive };

const char* to_string(PdaVerdict v);

struct PdaRun {
    PdaVerdict verdict = PdaVerdict::Reject;
    std::size_t configurations = 0;
    std::size_t max_stack_seen = 0;
    std::size_t max_epsilon_chain_seen = 0;

    nlohmann::json to_json() const;
};

/// One move of a PDA from a configuration: pop `pop` symbols, push `push`
/// (last element ends on top), go to `to`, consuming one input symbol or none.
struct PdaMove {
    std::uint32_t to = 0;
    bool consumes = false;
    std::size_t pop = 0;
    std::vector<std::uint32_t> push;
};

/// Moves available in `state` with stack `stack` (top at back) when the next
/// input symbol is `next` (nullopt at end of input). Epsilon and reading
/// moves are both returned.
using PdaMoveFn = std::function<void(std::uint32_t state, std::optional<std::uint32_t> next,
                                     const std::vector<std::uint32_t>& stack,
                                     std::vector<PdaMove>& out)>;

/// Depth-first search over configurations (state, position, stack) with a
/// visited set. Acceptance is by final state with the input consumed. A
/// branch cut by a bound makes a negative answer Inconclusive.
PdaRun bounded_pda_search(const std::vector<std::uint32_t>& initial_states,
                          const std::vector<std::uint32_t>& initial_stack,
                          const std::vector<std::uint32_t>& word,
                          const std::function<bool(std::uint32_t)>& accepting, const PdaMoveFn& moves,
                          std::size_t max_stack, std::size_t max_epsilon_chain);

struct PdaTransition {
    std::uint32_t from = 0;
    std::optional<std::uint32_t> input;  // nullopt: epsilon
    std::vector<std::uint32_t> pop;      // topmost first
    std::vector<std::uint32_t> push;     // bottom first; the last ends on top
    std::uint32_t to = 0;
};

/// Explicit pushdown automaton. Transitions may pop and push strings, which
/// keeps hand-written machines short.
class Pda {
public:
    Pda(std::vector<std::string> states, std::vector<std::string> sigma, std::vector<std::string> gamma,
        std::vector<std::uint32_t> initial, std::vector<std::uint32_t> accepting,
        std::vector<std::uint32_t> initial_stack, std::vector<PdaTransition> transitions);

    static Pda from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& sigma() const noexcept { return sigma_; }
    const std::vector<std::string>& gamma() const noexcept { return gamma_; }
    const std::vector<PdaTransition>& transitions() const noexcept { return transitions_; }

    std::vector<std::uint32_t> encode(std::string_view input) const;
    PdaRun run(const std::vector<std::uint32_t>& word, const PdaBounds& bounds = {}) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> sigma_;
    std::vector<std::string> gamma_;
    std::vector<std::uint32_t> initial_;
    std::vector<std::uint32_t> accepting_;
    std::vector<std::uint32_t> initial_stack_;
    std::vector<PdaTransition> transitions_;
    std::vector<bool> accepting_mask_;
};

/// True on Accept, false on Reject; throws ErrorCode::Inconclusive otherwise.
bool pda_accepts(const Pda& pda, std::string_view input, const PdaBounds& bounds = {});

}  // namespace assemblies
