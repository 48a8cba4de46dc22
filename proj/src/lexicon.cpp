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

#include "assemblies/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>

#include "assemblies/error.hpp"

namespace assemblies {

namespace {

using R = RoleArea;

constexpr std::array<std::pair<R, R>, 21> kParserFibers{{
    {R::LEX, R::SUBJ},    {R::LEX, R::VERB},    {R::LEX, R::OBJ},    {R::LEX, R::DET},
    {R::LEX, R::ADJ},     {R::LEX, R::ADV},     {R::LEX, R::PREP},   {R::LEX, R::PREP_P},
    {R::VERB, R::SUBJ},   {R::VERB, R::OBJ},    {R::VERB, R::ADV},   {R::VERB, R::PREP},
    {R::SUBJ, R::DET},    {R::SUBJ, R::ADJ},    {R::SUBJ, R::PREP},  {R::OBJ, R::DET},
    {R::OBJ, R::ADJ},     {R::OBJ, R::PREP},    {R::PREP, R::PREP_P}, {R::PREP_P, R::DET},
    {R::PREP_P, R::ADJ},
}};

constexpr std::array<std::pair<R, R>, 4> kConstituencyFibers{{
    {R::VERB, R::VP}, {R::OBJ, R::VP}, {R::SUBJ, R::S}, {R::VP, R::S},
}};

constexpr std::array<std::pair<R, R>, 4> kDsFibers{{
    {R::DS, R::SUBJ}, {R::DS, R::OBJ}, {R::DS, R::PREP_P}, {R::DS, R::VERB},
}};

constexpr std::array<std::string_view, 12> kAreaNames{
    "LEX", "SUBJ", "VERB", "OBJ", "DET", "ADJ", "ADV", "PREP", "PREP_P", "DS", "VP", "S"};

bool same_pair(const std::pair<R, R>& f, R a, R b) {
    return (f.first == a && f.second == b) || (f.first == b && f.second == a);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Assembly lex_assembly_for(std::string_view surface, const LexAssemblyParams& params) {
    std::mt19937_64 rng(params.seed ^ fnv1a(surface));
    std::vector<Neuron> all(params.n);
    for (Neuron i = 0; i < params.n; ++i) {
        all[i] = i;
    }
    // Partial Fisher-Yates: the first k slots become the sample.
    for (std::uint32_t i = 0; i < params.k; ++i) {
        const std::uint64_t span = params.n - i;
        const auto j = static_cast<std::uint32_t>(i + rng() % span);
        std::swap(all[i], all[j]);
    }
    all.resize(params.k);
    return Assembly(std::string(to_string(R::LEX)), std::move(all));
}

// Disjoint blocks of one seeded permutation when LEX has room for them,
// otherwise an independent sample per word. A word whose LEX assembly shares
// neurons with an earlier word's tends to be captured by that word's role
// assemblies, so disjointness is preferred.
void assign_lex_assemblies(std::map<std::string, WordEntry, std::less<>>& entries,
                           const LexAssemblyParams& params) {
    const std::uint64_t needed = static_cast<std::uint64_t>(params.k) * entries.size();
    if (needed > params.n) {
        for (auto& [surface, entry] : entries) {
            entry.lex_assembly = lex_assembly_for(surface, params);
        }
        return;
    }
    std::mt19937_64 rng(params.seed ^ 0x4c4558ULL);
    std::vector<Neuron> all(params.n);
    for (Neuron i = 0; i < params.n; ++i) {
        all[i] = i;
    }
    for (std::uint64_t i = 0; i < needed; ++i) {
        const auto j = static_cast<std::size_t>(i + rng() % (params.n - i));
        std::swap(all[i], all[j]);
    }
    std::size_t offset = 0;
    for (auto& [surface, entry] : entries) {
        entry.lex_assembly = Assembly(std::string(to_string(R::LEX)),
                                      std::vector<Neuron>(all.begin() + offset,
                                                          all.begin() + offset + params.k));
        offset += params.k;
    }
}

std::vector<Action> parse_rules(const nlohmann::json& doc, const std::string& surface) {
    std::vector<Action> rules;
    for (const auto& r : doc) {
        try {
            rules.push_back(Action::from_json(r));
        } catch (const Error& e) {
            fail(e.code(), "lexicon entry '" + surface + "': " + e.what());
        }
    }
    return rules;
}

}  // namespace

std::string_view to_string(RoleArea area) { return kAreaNames[static_cast<std::size_t>(area)]; }

std::optional<RoleArea> role_area_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kAreaNames.size(); ++i) {
        if (kAreaNames[i] == name) {
            return static_cast<RoleArea>(i);
        }
    }
    return std::nullopt;
}

std::span<const std::pair<RoleArea, RoleArea>> parser_fibers() { return kParserFibers; }
std::span<const std::pair<RoleArea, RoleArea>> constituency_fibers() { return kConstituencyFibers; }
std::span<const std::pair<RoleArea, RoleArea>> ds_fibers() { return kDsFibers; }

bool is_parser_fiber(RoleArea a, RoleArea b) {
    auto match = [&](const auto& f) { return same_pair(f, a, b); };
    return std::any_of(kParserFibers.begin(), kParserFibers.end(), match) ||
           std::any_of(kConstituencyFibers.begin(), kConstituencyFibers.end(), match) ||
           std::any_of(kDsFibers.begin(), kDsFibers.end(), match);
}

// ---------------------------------------------------------------------------

void Action::apply(Brain& brain) const {
    const auto x = to_string(a);
    switch (kind) {
    case Kind::DisinhibitArea:
        brain.disinhibit_area(x, channel);
        break;
    case Kind::InhibitArea:
        brain.inhibit_area(x, channel);
        break;
    case Kind::DisinhibitFiber:
        brain.disinhibit_fiber(x, to_string(b), channel);
        break;
    case Kind::InhibitFiber:
        brain.inhibit_fiber(x, to_string(b), channel);
        break;
    }
}

std::string Action::describe() const {
    std::string out;
    switch (kind) {
    case Kind::DisinhibitArea: out = "disinhibit_area"; break;
    case Kind::InhibitArea: out = "inhibit_area"; break;
    case Kind::DisinhibitFiber: out = "disinhibit_fiber"; break;
    case Kind::InhibitFiber: out = "inhibit_fiber"; break;
    }
    out += "(" + std::string(to_string(a));
    if (targets_fiber()) {
        out += "," + std::string(to_string(b));
    }
    if (channel != 0) {
        out += ";" + std::to_string(channel);
    }
    return out + ")";
}

nlohmann::json Action::to_json() const {
    nlohmann::json doc;
    switch (kind) {
    case Kind::DisinhibitArea: doc["op"] = "disinhibit_area"; break;
    case Kind::InhibitArea: doc["op"] = "inhibit_area"; break;
    case Kind::DisinhibitFiber: doc["op"] = "disinhibit_fiber"; break;
    case Kind::InhibitFiber: doc["op"] = "inhibit_fiber"; break;
    }
    if (targets_fiber()) {
        doc["a"] = to_string(a);
        doc["b"] = to_string(b);
    } else {
        doc["area"] = to_string(a);
    }
    if (channel != 0) {
        doc["channel"] = channel;
    }
    return doc;
}

Action Action::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("op")) {
        fail(ErrorCode::Parse, "rule must be an object with an \"op\"");
    }
    const auto op = doc.at("op").get<std::string>();
    Action action;
    if (op == "disinhibit_area") {
        action.kind = Kind::DisinhibitArea;
    } else if (op == "inhibit_area") {
        action.kind = Kind::InhibitArea;
    } else if (op == "disinhibit_fiber") {
        action.kind = Kind::DisinhibitFiber;
    } else if (op == "inhibit_fiber") {
        action.kind = Kind::InhibitFiber;
    } else {
        fail(ErrorCode::Parse, "unknown rule op '" + op + "'");
    }
    auto area = [&](const char* key) {
        if (!doc.contains(key)) {
            fail(ErrorCode::Parse, "rule '" + op + "' is missing \"" + key + "\"");
        }
        const auto name = doc.at(key).get<std::string>();
        auto role = role_area_from_string(name);
        if (!role) {
            fail(ErrorCode::InvalidArgument, "unknown area '" + name + "' in rule '" + op + "'");
        }
        return *role;
    };
    if (action.targets_fiber()) {
        action.a = area("a");
        action.b = area("b");
        if (!is_parser_fiber(action.a, action.b)) {
            fail(ErrorCode::InvalidArgument, "no fiber " + std::string(to_string(action.a)) + "-" +
                                                 std::string(to_string(action.b)));
        }
    } else {
        action.a = area("area");
    }
    action.channel = doc.value("channel", 0U);
    if (action.channel >= 32) {
        fail(ErrorCode::InvalidArgument, "channel must be < 32");
    }
    return action;
}

bool WordEntry::is_verb() const { return pos == "transitive-verb" || pos == "intransitive-verb"; }

// ---------------------------------------------------------------------------

Lexicon Lexicon::from_json(const nlohmann::json& doc, const LexAssemblyParams& params) {
    if (params.k == 0 || params.k > params.n) {
        fail(ErrorCode::InvalidArgument, "lexicon assemblies need 0 < k <= n");
    }
    if (!doc.is_array()) {
        fail(ErrorCode::Parse, "lexicon must be a JSON array of entries");
    }
    Lexicon lex;
    lex.params_ = params;
    for (const auto& e : doc) {
        WordEntry entry;
        try {
            entry.surface = e.at("surface").get<std::string>();
            entry.pos = e.at("pos").get<std::string>();
            const auto marker = e.value("clause_marker", std::string("none"));
            if (marker == "opens_dependent_clause") {
                entry.clause_marker = ClauseMarker::OpensDependentClause;
            } else if (marker != "none") {
                fail(ErrorCode::Parse, "entry '" + entry.surface + "': unknown clause_marker '" +
                                           marker + "'");
            }
        } catch (const nlohmann::json::exception& ex) {
            fail(ErrorCode::Parse, std::string("lexicon entry: ") + ex.what());
        }
        if (entry.surface.empty() || entry.surface == ",") {
            fail(ErrorCode::Parse, "lexicon entry with invalid surface form");
        }
        entry.pre_rules = parse_rules(e.value("pre_rules", nlohmann::json::array()), entry.surface);
        entry.post_rules = parse_rules(e.value("post_rules", nlohmann::json::array()), entry.surface);
        const auto surface = entry.surface;
        if (!lex.entries_.emplace(surface, std::move(entry)).second) {
            fail(ErrorCode::InvalidArgument, "duplicate surface form '" + surface + "'");
        }
    }
    if (lex.entries_.empty()) {
        fail(ErrorCode::InvalidArgument, "lexicon is empty");
    }
    assign_lex_assemblies(lex.entries_, params);
    for (auto i = lex.entries_.begin(); i != lex.entries_.end(); ++i) {
        for (auto j = std::next(i); j != lex.entries_.end(); ++j) {
            if (2 * overlap(i->second.lex_assembly, j->second.lex_assembly) >= params.k) {
                fail(ErrorCode::Internal, "LEX assemblies of '" + i->first + "' and '" + j->first +
                                              "' overlap too much; choose a larger LEX area");
            }
        }
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path, const LexAssemblyParams& params) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open lexicon '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, "lexicon '" + path + "': " + e.what());
    }
    return from_json(doc, params);
}

std::string Lexicon::default_path() { return std::string(ASSEMBLIES_DATA_DIR) + "/lexicon_en.json"; }

const WordEntry& Lexicon::action_set(std::string_view word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) {
        fail(ErrorCode::OutOfVocabulary, "out of vocabulary: '" + std::string(word) + "'");
    }
    return it->second;
}

bool Lexicon::contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }

nlohmann::json Lexicon::to_json() const {
    auto doc = nlohmann::json::array();
    for (const auto& [surface, e] : entries_) {
        nlohmann::json entry{{"surface", surface}, {"pos", e.pos}};
        entry["pre_rules"] = nlohmann::json::array();
        for (const auto& r : e.pre_rules) {
            entry["pre_rules"].push_back(r.to_json());
        }
        entry["post_rules"] = nlohmann::json::array();
        for (const auto& r : e.post_rules) {
            entry["post_rules"].push_back(r.to_json());
        }
        entry["clause_marker"] =
            e.clause_marker == ClauseMarker::OpensDependentClause ? "opens_dependent_clause" : "none";
        doc.push_back(std::move(entry));
    }
    return doc;
}

}  // namespace assemblies
