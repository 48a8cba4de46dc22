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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace assemblies {

/// Type of a tape cell: fresh, seen, or marked with a state.
struct CellType {
    enum class Kind : std::uint8_t { Fresh, Seen, Marked };
    Kind kind = Kind::Fresh;
    std::uint32_t state = 0;  // meaningful for Marked only

    static CellType fresh() { return {}; }
    static CellType seen() { return {Kind::Seen, 0}; }
    static CellType marked(std::uint32_t q) { return {Kind::Marked, q}; }

    friend bool operator==(const CellType&, const CellType&) = default;
};

enum class FbaAction : std::uint8_t { Seen, Mark, Fallback };

struct FbaRule {
    std::uint32_t symbol = 0;
    CellType type;
    std::uint32_t state = 0;
    std::uint32_t next = 0;
    FbaAction action = FbaAction::Seen;

    friend bool operator==(const FbaRule&, const FbaRule&) = default;
};

/// Which state a mark stores.
enum class MarkValue : std::uint8_t {
    Result,   // the state the marking rule enters
    Current,  // the state the machine was in when it read the cell
};

struct FbaOptions {
    MarkValue mark = MarkValue::Result;
    // Accept as soon as an accepting state is reached, consumed input or not.
    bool prefix = false;
    // Stop the search after this many configurations; 0 means unbounded.
    // Reaching the cap throws ErrorCode::Inconclusive.
    std::size_t max_configurations = 0;
};

/// Fallback automaton over named symbols and states. Rules are validated on
/// construction: seen-typed rules only leave the cell seen, marked-typed rules
/// never mark again.
class Fba {
public:
    Fba(std::vector<std::string> sigma, std::vector<std::string> states,
        std::vector<std::uint32_t> initial, std::vector<std::uint32_t> accepting,
        std::vector<FbaRule> rules);

    static Fba from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    const std::vector<std::string>& sigma() const noexcept { return sigma_; }
    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::uint32_t>& initial() const noexcept { return initial_; }
    const std::vector<std::uint32_t>& accepting() const noexcept { return accepting_; }
    const std::vector<FbaRule>& rules() const noexcept { return rules_; }

    bool is_accepting(std::uint32_t q) const { return accepting_mask_[q]; }
    std::optional<std::uint32_t> symbol_index(std::string_view s) const;
    std::optional<std::uint32_t> state_index(std::string_view s) const;
    /// Symbol indices of `input` (see split_symbols); throws InvalidArgument
    /// on a symbol outside sigma.
    std::vector<std::uint32_t> encode(std::string_view input) const;
    std::string decode(const std::vector<std::uint32_t>& word) const;

    /// Rules whose left side is (symbol, type, state).
    const std::vector<FbaRule>& rules_for(std::uint32_t symbol, CellType type, std::uint32_t state) const;

private:
    std::size_t slot(std::uint32_t symbol, CellType type, std::uint32_t state) const;

    std::vector<std::string> sigma_;
    std::vector<std::string> states_;
    std::vector<std::uint32_t> initial_;
    std::vector<std::uint32_t> accepting_;
    std::vector<FbaRule> rules_;
    std::vector<bool> accepting_mask_;
    // Rules grouped by left side; the type index is 0 fresh, 1 seen, 2 + q marked.
    std::vector<std::vector<FbaRule>> index_;
};

/// Tape, state and head position. `position` is 0-based; tape.size() means
/// past the end.
struct FbaConfiguration {
    std::vector<std::uint32_t> symbols;
    std::vector<CellType> tape;
    std::uint32_t state = 0;
    std::size_t position = 0;

    friend bool operator==(const FbaConfiguration&, const FbaConfiguration&) = default;
};

FbaConfiguration initial_configuration(const std::vector<std::uint32_t>& word, std::uint32_t state);

/// Every configuration one legal step away. Empty when stuck or past the end.
std::vector<FbaConfiguration> successors(const Fba& fba, const FbaConfiguration& config,
                                         const FbaOptions& options = {});

struct FbaStep {
    std::uint32_t state = 0;
    std::size_t position = 0;
    std::vector<CellType> tape;
};

struct FbaResult {
    bool accepted = false;
    std::size_t configurations = 0;  // explored
    std::vector<FbaStep> witness;    // shortest accepting run when accepted

    nlohmann::json to_json(const Fba& fba) const;
};

/// Exhaustive search of the configuration graph; always terminates because
/// every cell is marked at most once and each fallback consumes a mark.
FbaResult run(const Fba& fba, const std::vector<std::uint32_t>& word, const FbaOptions& options = {});
bool accepts(const Fba& fba, const std::vector<std::uint32_t>& word, const FbaOptions& options = {});
bool accepts(const Fba& fba, std::string_view input, const FbaOptions& options = {});

/// Seen-typed rules keep the state and marked-typed rules never fall back.
bool is_weak(const Fba& fba);
/// Rules violating is_weak, described for diagnostics.
std::vector<std::string> weak_violations(const Fba& fba);

/// At most one seen-typed rule per (symbol, state).
bool is_s_deterministic(const Fba& fba);

/// All words over sigma of length <= max_len, shortest first.
std::vector<std::vector<std::uint32_t>> all_words(std::size_t alphabet, std::size_t max_len);

}  // namespace assemblies
