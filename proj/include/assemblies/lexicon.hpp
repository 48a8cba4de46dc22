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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "assemblies/brain.hpp"

namespace assemblies {

enum class RoleArea { LEX, SUBJ, VERB, OBJ, DET, ADJ, ADV, PREP, PREP_P, DS, VP, S };

std::string_view to_string(RoleArea area);
std::optional<RoleArea> role_area_from_string(std::string_view name);

/// Fibers of the parser brain. DS fibers exist only with embedding, the
/// VP/S fibers only with constituency.
std::span<const std::pair<RoleArea, RoleArea>> parser_fibers();
std::span<const std::pair<RoleArea, RoleArea>> constituency_fibers();
std::span<const std::pair<RoleArea, RoleArea>> ds_fibers();
bool is_parser_fiber(RoleArea a, RoleArea b);

struct Action {
    enum class Kind { DisinhibitArea, InhibitArea, DisinhibitFiber, InhibitFiber };

    Kind kind = Kind::DisinhibitArea;
    RoleArea a = RoleArea::LEX;
    RoleArea b = RoleArea::LEX;  // second endpoint, fibers only
    unsigned channel = 0;

    bool targets_fiber() const {
        return kind == Kind::DisinhibitFiber || kind == Kind::InhibitFiber;
    }
    void apply(Brain& brain) const;
    std::string describe() const;
    nlohmann::json to_json() const;
    static Action from_json(const nlohmann::json& doc);

    friend bool operator==(const Action&, const Action&) = default;
};

enum class ClauseMarker { None, OpensDependentClause };

struct WordEntry {
    std::string surface;
    std::string pos;
    std::vector<Action> pre_rules;
    std::vector<Action> post_rules;
    ClauseMarker clause_marker = ClauseMarker::None;
    Assembly lex_assembly;

    bool is_verb() const;
};

struct LexAssemblyParams {
    std::uint32_t n = 10000;
    std::uint32_t k = 100;
    std::uint64_t seed = 0;
};

class Lexicon {
public:
    static Lexicon load(const std::string& path, const LexAssemblyParams& params);
    static Lexicon from_json(const nlohmann::json& doc, const LexAssemblyParams& params);
    /// The English lexicon shipped in data/.
    static std::string default_path();

    /// Entry for `word`; throws ErrorCode::OutOfVocabulary when absent.
    const WordEntry& action_set(std::string_view word) const;
    bool contains(std::string_view word) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, WordEntry, std::less<>>& entries() const noexcept { return entries_; }
    const LexAssemblyParams& assembly_params() const noexcept { return params_; }

    /// The file form: entries without their assemblies.
    nlohmann::json to_json() const;

private:
    std::map<std::string, WordEntry, std::less<>> entries_;
    LexAssemblyParams params_;
};

}  // namespace assemblies
