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

#include "assemblies/fba.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "assemblies/error.hpp"
#include "assemblies/symbols.hpp"

namespace assemblies {

namespace {

std::uint32_t index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + name + "'");
    }
    return static_cast<std::uint32_t>(it - names.begin());
}

void check_unique(const std::vector<std::string>& names, const char* what) {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(ErrorCode::InvalidArgument, std::string("duplicate ") + what);
    }
}

const char* action_name(FbaAction a) {
    switch (a) {
    case FbaAction::Seen: return "s";
    case FbaAction::Mark: return "mark";
    case FbaAction::Fallback: return "fallback";
    }
    return "?";
}

FbaAction parse_action(const std::string& s) {
    if (s == "s") {
        return FbaAction::Seen;
    }
    if (s == "mark") {
        return FbaAction::Mark;
    }
    if (s == "fallback") {
        return FbaAction::Fallback;
    }
    fail(ErrorCode::Parse, "unknown FBA action '" + s + "'");
}

std::string type_name(const CellType& t, const std::vector<std::string>& states) {
    switch (t.kind) {
    case CellType::Kind::Fresh: return "f";
    case CellType::Kind::Seen: return "s";
    case CellType::Kind::Marked: return states.at(t.state);
    }
    return "?";
}

// Search key: head, state and the cell types; the symbols never change.
std::string config_key(const FbaConfiguration& c) {
    std::string key;
    key.reserve(8 + 4 * c.tape.size());
    auto put = [&](std::uint32_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(c.state);
    put(static_cast<std::uint32_t>(c.position));
    for (const auto& t : c.tape) {
        put(t.kind == CellType::Kind::Marked ? 2 + t.state : static_cast<std::uint32_t>(t.kind));
    }
    return key;
}

bool is_goal(const Fba& fba, const FbaConfiguration& c, const FbaOptions& options) {
    return fba.is_accepting(c.state) && (options.prefix || c.position == c.tape.size());
}

}  // namespace

Fba::Fba(std::vector<std::string> sigma, std::vector<std::string> states,
         std::vector<std::uint32_t> initial, std::vector<std::uint32_t> accepting,
         std::vector<FbaRule> rules)
    : sigma_(std::move(sigma)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      rules_(std::move(rules)) {
    if (sigma_.empty()) {
        fail(ErrorCode::InvalidArgument, "FBA alphabet is empty");
    }
    if (states_.empty()) {
        fail(ErrorCode::InvalidArgument, "FBA has no states");
    }
    check_unique(sigma_, "FBA symbol");
    check_unique(states_, "FBA state");
    const auto nq = static_cast<std::uint32_t>(states_.size());
    const auto ns = static_cast<std::uint32_t>(sigma_.size());
    accepting_mask_.assign(nq, false);
    for (auto q : initial_) {
        if (q >= nq) {
            fail(ErrorCode::InvalidArgument, "initial state out of range");
        }
    }
    for (auto q : accepting_) {
        if (q >= nq) {
            fail(ErrorCode::InvalidArgument, "accepting state out of range");
        }
        accepting_mask_[q] = true;
    }
    std::sort(rules_.begin(), rules_.end(), [](const FbaRule& a, const FbaRule& b) {
        auto key = [](const FbaRule& r) {
            return std::tuple(r.symbol, static_cast<int>(r.type.kind), r.type.state, r.state, r.next,
                              static_cast<int>(r.action));
        };
        return key(a) < key(b);
    });
    rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
    index_.assign(static_cast<std::size_t>(ns) * (nq + 2) * nq, {});
    for (const auto& r : rules_) {
        if (r.symbol >= ns || r.state >= nq || r.next >= nq ||
            (r.type.kind == CellType::Kind::Marked && r.type.state >= nq)) {
            fail(ErrorCode::InvalidArgument, "FBA rule refers to an unknown symbol or state");
        }
        if (r.type.kind == CellType::Kind::Seen && r.action != FbaAction::Seen) {
            fail(ErrorCode::InvalidArgument, "a rule on a seen cell must leave it seen");
        }
        if (r.type.kind == CellType::Kind::Marked && r.action == FbaAction::Mark) {
            fail(ErrorCode::InvalidArgument, "a rule on a marked cell cannot mark it again");
        }
        index_[slot(r.symbol, r.type, r.state)].push_back(r);
    }
}

std::size_t Fba::slot(std::uint32_t symbol, CellType type, std::uint32_t state) const {
    const std::size_t nq = states_.size();
    const std::size_t t = type.kind == CellType::Kind::Marked ? 2 + type.state
                                                              : static_cast<std::size_t>(type.kind);
    return (static_cast<std::size_t>(symbol) * (nq + 2) + t) * nq + state;
}

const std::vector<FbaRule>& Fba::rules_for(std::uint32_t symbol, CellType type, std::uint32_t state) const {
    return index_[slot(symbol, type, state)];
}

std::optional<std::uint32_t> Fba::symbol_index(std::string_view s) const {
    const auto it = std::find(sigma_.begin(), sigma_.end(), s);
    if (it == sigma_.end()) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - sigma_.begin());
}

std::optional<std::uint32_t> Fba::state_index(std::string_view s) const {
    const auto it = std::find(states_.begin(), states_.end(), s);
    if (it == states_.end()) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - states_.begin());
}

std::vector<std::uint32_t> Fba::encode(std::string_view input) const {
    std::vector<std::uint32_t> word;
    for (const auto& sym : split_symbols(input)) {
        const auto i = symbol_index(sym);
        if (!i) {
            fail(ErrorCode::InvalidArgument, "symbol '" + sym + "' is not in the alphabet");
        }
        word.push_back(*i);
    }
    return word;
}

std::string Fba::decode(const std::vector<std::uint32_t>& word) const {
    std::vector<std::string> syms;
    for (auto s : word) {
        syms.push_back(sigma_.at(s));
    }
    return join_symbols(syms);
}

Fba Fba::from_json(const nlohmann::json& doc) {
    try {
        auto sigma = doc.at("sigma").get<std::vector<std::string>>();
        auto states = doc.at("states").get<std::vector<std::string>>();
        std::vector<std::uint32_t> initial;
        std::vector<std::uint32_t> accepting;
        for (const auto& q : doc.at("initial")) {
            initial.push_back(index_of(states, q.get<std::string>(), "state"));
        }
        for (const auto& q : doc.at("accepting")) {
            accepting.push_back(index_of(states, q.get<std::string>(), "state"));
        }
        std::vector<FbaRule> rules;
        for (const auto& r : doc.at("rules")) {
            FbaRule rule;
            rule.symbol = index_of(sigma, r.at("sym").get<std::string>(), "symbol");
            const auto type = r.at("type").get<std::string>();
            if (type == "f") {
                rule.type = CellType::fresh();
            } else if (type == "s") {
                rule.type = CellType::seen();
            } else {
                rule.type = CellType::marked(index_of(states, type, "state"));
            }
            rule.state = index_of(states, r.at("state").get<std::string>(), "state");
            rule.next = index_of(states, r.at("next").get<std::string>(), "state");
            rule.action = parse_action(r.at("action").get<std::string>());
            rules.push_back(rule);
        }
        return Fba(std::move(sigma), std::move(states), std::move(initial), std::move(accepting),
                   std::move(rules));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("FBA: ") + e.what());
    }
}

nlohmann::json Fba::to_json() const {
    nlohmann::json doc;
    doc["sigma"] = sigma_;
    doc["states"] = states_;
    auto names = [&](const std::vector<std::uint32_t>& qs) {
        std::vector<std::string> out;
        for (auto q : qs) {
            out.push_back(states_[q]);
        }
        return out;
    };
    doc["initial"] = names(initial_);
    doc["accepting"] = names(accepting_);
    doc["rules"] = nlohmann::json::array();
    for (const auto& r : rules_) {
        doc["rules"].push_back({{"sym", sigma_[r.symbol]},
                                {"type", type_name(r.type, states_)},
                                {"state", states_[r.state]},
                                {"next", states_[r.next]},
                                {"action", action_name(r.action)}});
    }
    return doc;
}

FbaConfiguration initial_configuration(const std::vector<std::uint32_t>& word, std::uint32_t state) {
    FbaConfiguration c;
    c.symbols = word;
    c.tape.assign(word.size(), CellType::fresh());
    c.state = state;
    c.position = 0;
    return c;
}

std::vector<FbaConfiguration> successors(const Fba& fba, const FbaConfiguration& config,
                                         const FbaOptions& options) {
    std::vector<FbaConfiguration> out;
    const std::size_t i = config.position;
    if (i >= config.tape.size()) {
        return out;
    }
    const CellType type = config.tape[i];
    for (const auto& rule : fba.rules_for(config.symbols[i], type, config.state)) {
        FbaConfiguration next = config;
        next.state = rule.next;
        switch (rule.action) {
        case FbaAction::Seen:
            next.tape[i] = CellType::seen();
            next.position = i + 1;
            break;
        case FbaAction::Mark:
            // Only fresh cells can be marked; the constructor rejects the rest.
            next.tape[i] = CellType::marked(options.mark == MarkValue::Result ? rule.next : config.state);
            next.position = i + 1;
            break;
        case FbaAction::Fallback: {
            std::size_t j = i;
            while (j > 0 && config.tape[j - 1].kind != CellType::Kind::Marked) {
                --j;
            }
            if (j == 0) {
                continue;  // nothing to fall back to
            }
            next.tape[i] = CellType::seen();
            next.position = j - 1;
            break;
        }
        }
        out.push_back(std::move(next));
    }
    return out;
}

nlohmann::json FbaResult::to_json(const Fba& fba) const {
    nlohmann::json doc{{"accepted", accepted}, {"configurations", configurations}};
    if (accepted) {
        doc["witness"] = nlohmann::json::array();
        for (const auto& step : witness) {
            std::vector<std::string> tape;
            for (const auto& t : step.tape) {
                tape.push_back(type_name(t, fba.states()));
            }
            doc["witness"].push_back(
                {{"state", fba.states()[step.state]}, {"position", step.position}, {"tape", tape}});
        }
    }
    return doc;
}

namespace {

FbaResult search(const Fba& fba, const std::vector<std::uint32_t>& word, const FbaOptions& options,
                 bool want_witness) {
    struct Node {
        FbaConfiguration config;
        std::size_t parent;
    };
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<Node> nodes;
    std::unordered_map<std::string, std::size_t> seen;
    std::deque<std::size_t> frontier;
    FbaResult result;

    auto finish = [&](std::size_t at) {
        result.accepted = true;
        result.configurations = nodes.size();
        if (want_witness) {
            for (std::size_t n = at; n != kNone; n = nodes[n].parent) {
                const auto& c = nodes[n].config;
                result.witness.push_back({c.state, c.position, c.tape});
            }
            std::reverse(result.witness.begin(), result.witness.end());
        }
        return result;
    };
    auto visit = [&](FbaConfiguration c, std::size_t parent) -> std::optional<std::size_t> {
        if (!seen.emplace(config_key(c), nodes.size()).second) {
            return std::nullopt;
        }
        if (options.max_configurations != 0 && nodes.size() >= options.max_configurations) {
            fail(ErrorCode::Inconclusive, "FBA search exceeded " +
                                              std::to_string(options.max_configurations) +
                                              " configurations");
        }
        nodes.push_back({std::move(c), parent});
        frontier.push_back(nodes.size() - 1);
        return nodes.size() - 1;
    };

    for (auto q : fba.initial()) {
        if (auto n = visit(initial_configuration(word, q), kNone); n && is_goal(fba, nodes[*n].config, options)) {
            return finish(*n);
        }
    }
    while (!frontier.empty()) {
        const std::size_t cur = frontier.front();
        frontier.pop_front();
        for (auto& next : successors(fba, nodes[cur].config, options)) {
            if (auto n = visit(std::move(next), cur); n && is_goal(fba, nodes[*n].config, options)) {
                return finish(*n);
            }
        }
    }
    result.configurations = nodes.size();
    return result;
}

}  // namespace

FbaResult run(const Fba& fba, const std::vector<std::uint32_t>& word, const FbaOptions& options) {
    return search(fba, word, options, true);
}

bool accepts(const Fba& fba, const std::vector<std::uint32_t>& word, const FbaOptions& options) {
    return search(fba, word, options, false).accepted;
}

bool accepts(const Fba& fba, std::string_view input, const FbaOptions& options) {
    return accepts(fba, fba.encode(input), options);
}

std::vector<std::string> weak_violations(const Fba& fba) {
    std::vector<std::string> out;
    for (const auto& r : fba.rules()) {
        const auto lhs = "(" + fba.sigma()[r.symbol] + "," + type_name(r.type, fba.states()) + "," +
                         fba.states()[r.state] + ")";
        if (r.type.kind == CellType::Kind::Seen && r.next != r.state) {
            out.push_back(lhs + " changes state on a seen cell");
        }
        if (r.type.kind == CellType::Kind::Marked && r.action != FbaAction::Seen) {
            out.push_back(lhs + " falls back again from a marked cell");
        }
    }
    return out;
}

bool is_weak(const Fba& fba) { return weak_violations(fba).empty(); }

bool is_s_deterministic(const Fba& fba) {
    for (std::uint32_t a = 0; a < fba.sigma().size(); ++a) {
        for (std::uint32_t q = 0; q < fba.states().size(); ++q) {
            if (fba.rules_for(a, CellType::seen(), q).size() > 1) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<std::uint32_t>> all_words(std::size_t alphabet, std::size_t max_len) {
    std::vector<std::vector<std::uint32_t>> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len && alphabet > 0; ++len) {
        const std::size_t end = out.size();
        for (std::size_t w = begin; w < end; ++w) {
            for (std::uint32_t a = 0; a < alphabet; ++a) {
                auto next = out[w];
                next.push_back(a);
                out.push_back(std::move(next));
            }
        }
        begin = end;
    }
    return out;
}

}  // namespace assemblies
