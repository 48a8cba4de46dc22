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

#include "assemblies/pda.hpp"

#include <algorithm>
#include <unordered_set>

#include "assemblies/error.hpp"
#include "assemblies/symbols.hpp"

namespace assemblies {

namespace {

std::uint32_t index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        fail(ErrorCode::InvalidArgument, std::string("unknown PDA ") + what + " '" + name + "'");
    }
    return static_cast<std::uint32_t>(it - names.begin());
}

std::vector<std::uint32_t> indices(const nlohmann::json& list, const std::vector<std::string>& names,
                                   const char* what) {
    std::vector<std::uint32_t> out;
    for (const auto& v : list) {
        out.push_back(index_of(names, v.get<std::string>(), what));
    }
    return out;
}

std::vector<std::string> names_of(const std::vector<std::uint32_t>& idx, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (auto i : idx) {
        out.push_back(names.at(i));
    }
    return out;
}

std::string search_key(std::uint32_t state, std::size_t position, const std::vector<std::uint32_t>& stack) {
    std::string key;
    key.reserve(8 + 4 * stack.size());
    auto put = [&](std::uint32_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(state);
    put(static_cast<std::uint32_t>(position));
    for (auto s : stack) {
        put(s);
    }
    return key;
}

}  // namespace

const char* to_string(PdaVerdict v) {
    switch (v) {
    case PdaVerdict::Accept: return "accept";
    case PdaVerdict::Reject: return "reject";
    case PdaVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::json PdaRun::to_json() const {
    return {{"verdict", to_string(verdict)},
            {"accepted", verdict == PdaVerdict::Accept},
            {"configurations", configurations},
            {"max_stack", max_stack_seen},
            {"max_epsilon_chain", max_epsilon_chain_seen}};
}

PdaRun bounded_pda_search(const std::vector<std::uint32_t>& initial_states,
                          const std::vector<std::uint32_t>& initial_stack,
                          const std::vector<std::uint32_t>& word,
                          const std::function<bool(std::uint32_t)>& accepting, const PdaMoveFn& moves,
                          std::size_t max_stack, std::size_t max_epsilon_chain) {
    struct Config {
        std::uint32_t state;
        std::size_t position;
        std::vector<std::uint32_t> stack;
        std::size_t epsilon_chain;
    };
    PdaRun run;
    bool truncated = false;
    std::unordered_set<std::string> visited;
    std::vector<Config> todo;
    for (auto q : initial_states) {
        todo.push_back({q, 0, initial_stack, 0});
    }
    std::vector<PdaMove> buffer;
    while (!todo.empty()) {
        Config c = std::move(todo.back());
        todo.pop_back();
        if (c.stack.size() > max_stack || c.epsilon_chain > max_epsilon_chain) {
            truncated = true;
            continue;
        }
        if (!visited.insert(search_key(c.state, c.position, c.stack)).second) {
            continue;
        }
        ++run.configurations;
        run.max_stack_seen = std::max(run.max_stack_seen, c.stack.size());
        run.max_epsilon_chain_seen = std::max(run.max_epsilon_chain_seen, c.epsilon_chain);
        if (c.position == word.size() && accepting(c.state)) {
            run.verdict = PdaVerdict::Accept;
            return run;
        }
        buffer.clear();
        const std::optional<std::uint32_t> next =
            c.position < word.size() ? std::optional(word[c.position]) : std::nullopt;
        moves(c.state, next, c.stack, buffer);
        for (auto& m : buffer) {
            if (m.consumes && !next) {
                continue;
            }
            Config n{m.to, c.position + (m.consumes ? 1 : 0), c.stack, m.consumes ? 0 : c.epsilon_chain + 1};
            n.stack.resize(n.stack.size() - m.pop);
            n.stack.insert(n.stack.end(), m.push.begin(), m.push.end());
            todo.push_back(std::move(n));
        }
    }
    run.verdict = truncated ? PdaVerdict::Inconclusive : PdaVerdict::Reject;
    return run;
}

Pda::Pda(std::vector<std::string> states, std::vector<std::string> sigma, std::vector<std::string> gamma,
         std::vector<std::uint32_t> initial, std::vector<std::uint32_t> accepting,
         std::vector<std::uint32_t> initial_stack, std::vector<PdaTransition> transitions)
    : states_(std::move(states)),
      sigma_(std::move(sigma)),
      gamma_(std::move(gamma)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      initial_stack_(std::move(initial_stack)),
      transitions_(std::move(transitions)) {
    if (states_.empty() || sigma_.empty()) {
        fail(ErrorCode::InvalidArgument, "PDA needs states and an input alphabet");
    }
    accepting_mask_.assign(states_.size(), false);
    for (auto q : accepting_) {
        accepting_mask_.at(q) = true;
    }
    for (const auto& t : transitions_) {
        const bool ok = t.from < states_.size() && t.to < states_.size() &&
                        (!t.input || *t.input < sigma_.size()) &&
                        std::all_of(t.pop.begin(), t.pop.end(), [&](auto g) { return g < gamma_.size(); }) &&
                        std::all_of(t.push.begin(), t.push.end(), [&](auto g) { return g < gamma_.size(); });
        if (!ok) {
            fail(ErrorCode::InvalidArgument, "PDA transition refers to an unknown state or symbol");
        }
    }
}

Pda Pda::from_json(const nlohmann::json& doc) {
    try {
        auto states = doc.at("states").get<std::vector<std::string>>();
        auto sigma = doc.at("sigma").get<std::vector<std::string>>();
        auto gamma = doc.at("gamma").get<std::vector<std::string>>();
        auto initial = indices(doc.at("initial"), states, "state");
        auto accepting = indices(doc.at("accepting"), states, "state");
        std::vector<std::uint32_t> initial_stack;
        if (doc.contains("initial_stack")) {
            initial_stack = indices(doc.at("initial_stack"), gamma, "stack symbol");
        }
        std::vector<PdaTransition> transitions;
        for (const auto& t : doc.at("transitions")) {
            PdaTransition tr;
            tr.from = index_of(states, t.at("from").get<std::string>(), "state");
            tr.to = index_of(states, t.at("to").get<std::string>(), "state");
            if (t.contains("input") && !t.at("input").is_null()) {
                tr.input = index_of(sigma, t.at("input").get<std::string>(), "symbol");
            }
            if (t.contains("pop")) {
                tr.pop = indices(t.at("pop"), gamma, "stack symbol");
            }
            if (t.contains("push")) {
                tr.push = indices(t.at("push"), gamma, "stack symbol");
            }
            transitions.push_back(std::move(tr));
        }
        return Pda(std::move(states), std::move(sigma), std::move(gamma), std::move(initial),
                   std::move(accepting), std::move(initial_stack), std::move(transitions));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("PDA: ") + e.what());
    }
}

nlohmann::json Pda::to_json() const {
    nlohmann::json doc;
    doc["states"] = states_;
    doc["sigma"] = sigma_;
    doc["gamma"] = gamma_;
    doc["initial"] = names_of(initial_, states_);
    doc["accepting"] = names_of(accepting_, states_);
    doc["initial_stack"] = names_of(initial_stack_, gamma_);
    doc["transitions"] = nlohmann::json::array();
    for (const auto& t : transitions_) {
        nlohmann::json j{{"from", states_[t.from]}, {"to", states_[t.to]}};
        j["input"] = t.input ? nlohmann::json(sigma_[*t.input]) : nlohmann::json(nullptr);
        j["pop"] = names_of(t.pop, gamma_);
        j["push"] = names_of(t.push, gamma_);
        doc["transitions"].push_back(std::move(j));
    }
    return doc;
}

std::vector<std::uint32_t> Pda::encode(std::string_view input) const {
    std::vector<std::uint32_t> word;
    for (const auto& sym : split_symbols(input)) {
        word.push_back(index_of(sigma_, sym, "symbol"));
    }
    return word;
}

PdaRun Pda::run(const std::vector<std::uint32_t>& word, const PdaBounds& bounds) const {
    const std::size_t max_stack = bounds.max_stack ? bounds.max_stack : word.size() + initial_stack_.size();
    const std::size_t max_eps =
        bounds.max_epsilon_chain ? bounds.max_epsilon_chain : states_.size() * (word.size() + 1);
    auto moves = [this](std::uint32_t state, std::optional<std::uint32_t> next,
                        const std::vector<std::uint32_t>& stack, std::vector<PdaMove>& out) {
        for (const auto& t : transitions_) {
            if (t.from != state || (t.input && t.input != next) || t.pop.size() > stack.size()) {
                continue;
            }
            if (!std::equal(t.pop.begin(), t.pop.end(), stack.rbegin())) {
                continue;
            }
            out.push_back({t.to, t.input.has_value(), t.pop.size(), t.push});
        }
    };
    return bounded_pda_search(initial_, initial_stack_, word,
                              [this](std::uint32_t q) { return bool(accepting_mask_[q]); }, moves,
                              max_stack, max_eps);
}

bool pda_accepts(const Pda& pda, std::string_view input, const PdaBounds& bounds) {
    const auto run = pda.run(pda.encode(input), bounds);
    if (run.verdict == PdaVerdict::Inconclusive) {
        fail(ErrorCode::Inconclusive, "PDA search hit its bounds without accepting");
    }
    return run.verdict == PdaVerdict::Accept;
}

}  // namespace assemblies
