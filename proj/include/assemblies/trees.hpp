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
#include <string>
#include <vector>

#include <json.hpp>

namespace assemblies {

struct DependencyEdge {
    std::size_t head = 0;
    std::size_t dependent = 0;
    std::string label;

    friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

/// Word-indexed dependency tree. Indices count words only (commas excluded).
struct DependencyTree {
    std::vector<std::string> words;
    std::size_t root = 0;
    std::vector<DependencyEdge> edges;

    /// Throws ErrorCode::Readout unless this is a tree spanning every word.
    void validate() const;
    std::vector<std::size_t> dependents(std::size_t head) const;
    /// `head` plus everything below it, ascending.
    std::vector<std::size_t> subtree(std::size_t head) const;

    nlohmann::json to_json() const;
    /// Accepts edges as objects or as [head, dependent, label] triples.
    static DependencyTree from_json(const nlohmann::json& doc, std::vector<std::string> words);
    std::string to_dot() const;

    /// Same words, root and edge set (edge order ignored).
    bool same_as(const DependencyTree& other) const;
};

/// The two-level tree (S (Subject) (VP (Verb) (Object))). Leaves hold word
/// indices in sentence order; `object` is empty for intransitive clauses.
struct ConstituencyTree {
    std::vector<std::string> words;
    std::vector<std::size_t> subject;
    std::vector<std::size_t> verb;
    std::vector<std::size_t> object;

    void validate() const;
    nlohmann::json to_json() const;
    static ConstituencyTree from_json(const nlohmann::json& doc, std::vector<std::string> words);
    std::string to_dot() const;
    /// "(S (Subj the dogs) (VP (Verb chase) (Obj cats)))"
    std::string to_bracketed() const;

    friend bool operator==(const ConstituencyTree&, const ConstituencyTree&) = default;
};

}  // namespace assemblies
