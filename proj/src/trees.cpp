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

#include "assemblies/trees.hpp"

#include <algorithm>
#include <sstream>

#include "assemblies/error.hpp"

namespace assemblies {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

std::vector<std::size_t> index_list(const nlohmann::json& doc, const char* key, std::size_t limit) {
    std::vector<std::size_t> out;
    if (!doc.contains(key)) {
        return out;
    }
    for (const auto& v : doc.at(key)) {
        const auto i = v.get<std::size_t>();
        if (i >= limit) {
            fail(ErrorCode::Parse, std::string("constituency leaf '") + key + "' index out of range");
        }
        out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void DependencyTree::validate() const {
    const std::size_t n = words.size();
    if (n == 0) {
        fail(ErrorCode::Readout, "dependency tree has no words");
    }
    if (root >= n) {
        fail(ErrorCode::Readout, "dependency root out of range");
    }
    std::vector<int> heads(n, -1);
    for (const auto& e : edges) {
        if (e.head >= n || e.dependent >= n) {
            fail(ErrorCode::Readout, "dependency edge out of range");
        }
        if (e.dependent == root) {
            fail(ErrorCode::Readout, "root '" + words[root] + "' has a head");
        }
        if (heads[e.dependent] >= 0) {
            fail(ErrorCode::Readout, "word '" + words[e.dependent] + "' has two heads");
        }
        heads[e.dependent] = static_cast<int>(e.head);
    }
    for (std::size_t w = 0; w < n; ++w) {
        std::size_t cur = w;
        std::size_t hops = 0;
        while (cur != root) {
            if (heads[cur] < 0) {
                fail(ErrorCode::Readout, "word '" + words[w] + "' is not connected to the root");
            }
            cur = static_cast<std::size_t>(heads[cur]);
            if (++hops > n) {
                fail(ErrorCode::Readout, "dependency cycle through '" + words[w] + "'");
            }
        }
    }
}

std::vector<std::size_t> DependencyTree::dependents(std::size_t head) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges) {
        if (e.head == head) {
            out.push_back(e.dependent);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> DependencyTree::subtree(std::size_t head) const {
    std::vector<std::size_t> out{head};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t d : dependents(out[i])) {
            if (std::find(out.begin(), out.end(), d) == out.end()) {
                out.push_back(d);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json DependencyTree::to_json() const {
    nlohmann::json doc;
    doc["words"] = words;
    doc["root"] = root;
    doc["edges"] = nlohmann::json::array();
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& e : sorted) {
        doc["edges"].push_back({{"head", e.head}, {"dependent", e.dependent}, {"label", e.label}});
    }
    return doc;
}

DependencyTree DependencyTree::from_json(const nlohmann::json& doc, std::vector<std::string> words) {
    DependencyTree tree;
    try {
        tree.words = std::move(words);
        if (tree.words.empty() && doc.contains("words")) {
            tree.words = doc.at("words").get<std::vector<std::string>>();
        }
        tree.root = doc.at("root").get<std::size_t>();
        for (const auto& e : doc.at("edges")) {
            if (e.is_array()) {
                tree.edges.push_back(
                    {e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<std::string>()});
            } else {
                tree.edges.push_back({e.at("head").get<std::size_t>(),
                                      e.at("dependent").get<std::size_t>(),
                                      e.at("label").get<std::string>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("dependency tree: ") + e.what());
    }
    return tree;
}

std::string DependencyTree::to_dot() const {
    std::ostringstream out;
    out << "digraph dependencies {\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
        out << "  w" << i << " [label=\"" << dot_escape(words[i]) << "\"";
        if (i == root) {
            out << ", shape=box";
        }
        out << "];\n";
    }
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& e : sorted) {
        out << "  w" << e.head << " -> w" << e.dependent << " [label=\"" << dot_escape(e.label)
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

bool DependencyTree::same_as(const DependencyTree& other) const {
    if (words != other.words || root != other.root || edges.size() != other.edges.size()) {
        return false;
    }
    auto a = edges;
    auto b = other.edges;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// ---------------------------------------------------------------------------

void ConstituencyTree::validate() const {
    if (subject.empty() || verb.empty()) {
        fail(ErrorCode::Readout, "constituency tree needs a subject and a verb");
    }
    std::vector<int> seen(words.size(), 0);
    for (const auto* leaf : {&subject, &verb, &object}) {
        for (std::size_t i : *leaf) {
            if (i >= words.size() || seen[i]++) {
                fail(ErrorCode::Readout, "constituency leaves overlap or are out of range");
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        fail(ErrorCode::Readout, "constituency leaves do not cover the clause");
    }
}

nlohmann::json ConstituencyTree::to_json() const {
    nlohmann::json doc;
    doc["words"] = words;
    doc["subject"] = subject;
    doc["verb"] = verb;
    doc["object"] = object;
    doc["tree"] = to_bracketed();
    return doc;
}

ConstituencyTree ConstituencyTree::from_json(const nlohmann::json& doc, std::vector<std::string> words) {
    ConstituencyTree tree;
    try {
        tree.words = std::move(words);
        if (tree.words.empty() && doc.contains("words")) {
            tree.words = doc.at("words").get<std::vector<std::string>>();
        }
        tree.subject = index_list(doc, "subject", tree.words.size());
        tree.verb = index_list(doc, "verb", tree.words.size());
        tree.object = index_list(doc, "object", tree.words.size());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("constituency tree: ") + e.what());
    }
    return tree;
}

std::string ConstituencyTree::to_bracketed() const {
    auto leaf = [&](const char* label, const std::vector<std::size_t>& idx) {
        std::string s = std::string("(") + label;
        for (std::size_t i : idx) {
            s += " " + words.at(i);
        }
        return s + ")";
    };
    std::string vp = "(VP " + leaf("Verb", verb);
    if (!object.empty()) {
        vp += " " + leaf("Obj", object);
    }
    vp += ")";
    return "(S " + leaf("Subj", subject) + " " + vp + ")";
}

std::string ConstituencyTree::to_dot() const {
    std::ostringstream out;
    auto span_label = [&](const std::vector<std::size_t>& idx) {
        std::string s;
        for (std::size_t i : idx) {
            s += (s.empty() ? "" : " ") + words.at(i);
        }
        return dot_escape(s);
    };
    out << "digraph constituency {\n";
    out << "  S [label=\"S\"];\n  VP [label=\"VP\"];\n";
    out << "  Subj [label=\"Subj: " << span_label(subject) << "\", shape=box];\n";
    out << "  Verb [label=\"Verb: " << span_label(verb) << "\", shape=box];\n";
    if (!object.empty()) {
        out << "  Obj [label=\"Obj: " << span_label(object) << "\", shape=box];\n";
    }
    out << "  S -> Subj;\n  S -> VP;\n  VP -> Verb;\n";
    if (!object.empty()) {
        out << "  VP -> Obj;\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace assemblies
