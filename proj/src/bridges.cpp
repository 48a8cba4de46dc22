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

#include "assemblies/bridges.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "assemblies/error.hpp"
#include "assemblies/symbols.hpp"

namespace assemblies {

// ---------------------------------------------------------------------------
// s-determinization

Fba s_determinize(const Fba& fba) {
    const auto nq = fba.states().size();
    if (nq > 20) {
        fail(ErrorCode::InvalidArgument, "s_determinize supports at most 20 states");
    }
    using Set = std::uint32_t;  // bitmask over the original states
    std::map<Set, std::uint32_t> id;
    std::vector<Set> sets;
    std::deque<Set> todo;
    auto intern = [&](Set s) {
        auto [it, inserted] = id.emplace(s, static_cast<std::uint32_t>(sets.size()));
        if (inserted) {
            sets.push_back(s);
            todo.push_back(s);
        }
        return it->second;
    };
    auto single = [](std::uint32_t q) { return Set{1} << q; };

    std::vector<std::uint32_t> initial;
    for (auto q : fba.initial()) {
        initial.push_back(intern(single(q)));
    }
    struct PendingRule {
        std::uint32_t symbol;
        CellType::Kind kind;
        Set mark;
        Set from;
        Set to;
        FbaAction action;
    };
    std::vector<PendingRule> pending;
    while (!todo.empty()) {
        const Set s = todo.front();
        todo.pop_front();
        for (std::uint32_t a = 0; a < fba.sigma().size(); ++a) {
            Set target = 0;
            for (std::uint32_t q = 0; q < nq; ++q) {
                if (s & single(q)) {
                    for (const auto& r : fba.rules_for(a, CellType::seen(), q)) {
                        target |= single(r.next);
                    }
                }
            }
            if (target != 0) {
                intern(target);
                pending.push_back({a, CellType::Kind::Seen, 0, s, target, FbaAction::Seen});
            }
        }
        // Fresh and marked cells: collapse to one member and apply its rule.
        for (const auto& r : fba.rules()) {
            if (r.type.kind == CellType::Kind::Seen || !(s & single(r.state))) {
                continue;
            }
            intern(single(r.next));
            Set mark = 0;
            if (r.type.kind == CellType::Kind::Marked) {
                mark = single(r.type.state);
                intern(mark);
            }
            pending.push_back({r.symbol, r.type.kind, mark, s, single(r.next), r.action});
        }
    }

    std::vector<std::string> names;
    std::vector<std::uint32_t> accepting;
    for (std::uint32_t i = 0; i < sets.size(); ++i) {
        std::string name = "{";
        bool accept = false;
        for (std::uint32_t q = 0; q < nq; ++q) {
            if (sets[i] & single(q)) {
                name += (name.size() > 1 ? "," : "") + fba.states()[q];
                accept = accept || fba.is_accepting(q);
            }
        }
        names.push_back(name + "}");
        if (accept) {
            accepting.push_back(i);
        }
    }
    std::vector<FbaRule> rules;
    for (const auto& p : pending) {
        FbaRule r;
        r.symbol = p.symbol;
        r.type = p.kind == CellType::Kind::Fresh  ? CellType::fresh()
                 : p.kind == CellType::Kind::Seen ? CellType::seen()
                                                  : CellType::marked(id.at(p.mark));
        r.state = id.at(p.from);
        r.next = id.at(p.to);
        r.action = p.action;
        rules.push_back(r);
    }
    return Fba(fba.sigma(), std::move(names), std::move(initial), std::move(accepting), std::move(rules));
}

// ---------------------------------------------------------------------------
// FBA -> PDA

struct CompiledPda::FrameTable {
    struct Frame {
        std::uint32_t symbol;
        std::uint32_t mark;
        std::vector<std::uint32_t> vec;
    };
    std::vector<Frame> frames;
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> ids;

    std::uint32_t intern(std::uint32_t symbol, std::uint32_t mark, std::vector<std::uint32_t> vec) {
        auto key = std::tuple(symbol, mark, vec);
        const auto it = ids.find(key);
        if (it != ids.end()) {
            return it->second;
        }
        const auto n = static_cast<std::uint32_t>(frames.size());
        frames.push_back({symbol, mark, std::move(vec)});
        ids.emplace(std::move(key), n);
        return n;
    }
};

CompiledPda::CompiledPda(Fba fba) : fba_(std::move(fba)) {
    if (!is_s_deterministic(fba_)) {
        fail(ErrorCode::InvalidArgument, "the FBA has two seen-cell rules for one symbol and state; "
                                         "s-determinize it first");
    }
    const auto nq = fba_.states().size();
    delta_s_.assign(fba_.sigma().size(), std::vector<std::uint32_t>(nq, kDead));
    for (std::uint32_t a = 0; a < fba_.sigma().size(); ++a) {
        for (std::uint32_t q = 0; q < nq; ++q) {
            const auto& rules = fba_.rules_for(a, CellType::seen(), q);
            if (!rules.empty()) {
                delta_s_[a][q] = rules.front().next;
            }
        }
    }
}

double CompiledPda::stack_alphabet_bound() const {
    const double nq = static_cast<double>(state_count());
    double vectors = 1.0;
    for (std::size_t i = 0; i < state_count(); ++i) {
        vectors *= nq + 1.0;
    }
    return static_cast<double>(fba_.sigma().size()) * nq * vectors;
}

bool CompiledPda::is_accepting(std::uint32_t pda_state) const {
    return pda_state < state_count() && fba_.is_accepting(pda_state);
}

// PDA states: q < |K| simulates FBA state q on a fresh cell; |K| + q is the
// fallback loop entered in state q.
PdaMoveFn CompiledPda::moves(FrameTable& table) const {
    return [this, &table](std::uint32_t state, std::optional<std::uint32_t> next,
                          const std::vector<std::uint32_t>& stack, std::vector<PdaMove>& out) {
        const auto nq = static_cast<std::uint32_t>(state_count());
        if (state < nq) {
            if (!next) {
                return;
            }
            const std::uint32_t a = *next;
            // Step 3: the top vector absorbs this cell, which ends up seen or marked.
            std::optional<std::uint32_t> top;
            if (!stack.empty()) {
                const auto f = table.frames[stack.back()];
                auto vec = f.vec;
                for (auto& v : vec) {
                    v = v == kDead ? kDead : delta_s_[a][v];
                }
                top = table.intern(f.symbol, f.mark, std::move(vec));
            }
            for (const auto& rule : fba_.rules_for(a, CellType::fresh(), state)) {
                PdaMove m;
                m.consumes = true;
                m.pop = top ? 1 : 0;
                if (top) {
                    m.push.push_back(*top);
                }
                switch (rule.action) {
                case FbaAction::Seen:
                    m.to = rule.next;
                    break;
                case FbaAction::Mark: {
                    std::vector<std::uint32_t> identity(nq);
                    for (std::uint32_t i = 0; i < nq; ++i) {
                        identity[i] = i;
                    }
                    m.push.push_back(table.intern(a, rule.next, std::move(identity)));
                    m.to = rule.next;
                    break;
                }
                case FbaAction::Fallback:
                    m.to = nq + rule.next;
                    break;
                }
                out.push_back(std::move(m));
            }
            return;
        }
        // Step 5: consume the top mark, fold its vector into the one below.
        if (stack.empty()) {
            return;
        }
        const std::uint32_t q = state - nq;
        const auto f = table.frames[stack.back()];
        std::optional<std::uint32_t> below;
        if (stack.size() > 1) {
            const auto g = table.frames[stack[stack.size() - 2]];
            auto vec = g.vec;
            for (auto& v : vec) {
                v = v == kDead ? kDead : f.vec[v];
            }
            below = table.intern(g.symbol, g.mark, std::move(vec));
        }
        for (const auto& rule : fba_.rules_for(f.symbol, CellType::marked(f.mark), q)) {
            PdaMove m;
            m.consumes = false;
            m.pop = below ? 2 : 1;
            if (below) {
                m.push.push_back(*below);
            }
            if (rule.action == FbaAction::Fallback) {
                m.to = nq + rule.next;
            } else {
                const auto r = f.vec[rule.next];
                if (r == kDead) {
                    continue;
                }
                m.to = r;
            }
            out.push_back(std::move(m));
        }
    };
}

PdaRun CompiledPda::run(const std::vector<std::uint32_t>& word, const PdaBounds& bounds) const {
    FrameTable table;
    const std::size_t max_stack = bounds.max_stack ? bounds.max_stack : word.size();
    const std::size_t max_eps = bounds.max_epsilon_chain ? bounds.max_epsilon_chain : state_count() * word.size();
    return bounded_pda_search(fba_.initial(), {}, word, [this](std::uint32_t q) { return is_accepting(q); },
                              moves(table), max_stack, max_eps);
}

bool CompiledPda::accepts(const std::vector<std::uint32_t>& word, const PdaBounds& bounds) const {
    const auto r = run(word, bounds);
    if (r.verdict == PdaVerdict::Inconclusive) {
        fail(ErrorCode::Inconclusive, "compiled PDA search hit its bounds without accepting");
    }
    return r.verdict == PdaVerdict::Accept;
}

std::vector<CompiledPda::TraceStep> CompiledPda::accepting_trace(const std::vector<std::uint32_t>& word) const {
    FrameTable table;
    const auto move = moves(table);
    const auto nq = static_cast<std::uint32_t>(state_count());
    std::vector<TraceStep> path;
    std::set<std::tuple<std::uint32_t, std::size_t, std::vector<std::uint32_t>>> visited;
    std::function<bool(std::uint32_t, std::size_t, const std::vector<std::uint32_t>&)> dfs =
        [&](std::uint32_t state, std::size_t pos, const std::vector<std::uint32_t>& stack) {
            if (stack.size() > word.size() || !visited.emplace(state, pos, stack).second) {
                return false;
            }
            path.push_back({state < nq ? state : state - nq, state >= nq, pos, stack.size()});
            if (pos == word.size() && is_accepting(state)) {
                return true;
            }
            std::vector<PdaMove> out;
            move(state, pos < word.size() ? std::optional(word[pos]) : std::nullopt, stack, out);
            for (const auto& m : out) {
                if (m.consumes && pos >= word.size()) {
                    continue;
                }
                auto next = stack;
                next.resize(next.size() - m.pop);
                next.insert(next.end(), m.push.begin(), m.push.end());
                if (dfs(m.to, pos + (m.consumes ? 1 : 0), next)) {
                    return true;
                }
            }
            path.pop_back();
            return false;
        };
    for (auto q : fba_.initial()) {
        if (dfs(q, 0, {})) {
            return path;
        }
    }
    return {};
}

nlohmann::json CompiledPda::to_json() const {
    const auto& k = fba_.states();
    nlohmann::json doc;
    doc["kind"] = "fba-pda";
    doc["sigma"] = fba_.sigma();
    std::vector<std::string> states = k;
    for (const auto& q : k) {
        states.push_back("back:" + q);
    }
    doc["states"] = states;
    std::vector<std::string> initial;
    for (auto q : fba_.initial()) {
        initial.push_back(k[q]);
    }
    std::vector<std::string> accepting;
    for (auto q : fba_.accepting()) {
        accepting.push_back(k[q]);
    }
    doc["initial"] = initial;
    doc["accepting"] = accepting;
    doc["stack_alphabet"] = "sigma x K x K^|K|";
    doc["stack_alphabet_bound"] = stack_alphabet_bound();
    nlohmann::json seen = nlohmann::json::object();
    for (std::uint32_t a = 0; a < fba_.sigma().size(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (std::uint32_t q = 0; q < k.size(); ++q) {
            row.push_back(delta_s_[a][q] == kDead ? nlohmann::json(nullptr) : nlohmann::json(k[delta_s_[a][q]]));
        }
        seen[fba_.sigma()[a]] = row;
    }
    doc["seen_map"] = seen;
    doc["read"] = nlohmann::json::array();
    doc["loop"] = nlohmann::json::array();
    for (const auto& r : fba_.rules()) {
        if (r.type.kind == CellType::Kind::Fresh) {
            const char* stack = r.action == FbaAction::Mark       ? "update top, push mark"
                                : r.action == FbaAction::Fallback ? "update top, enter loop"
                                                                  : "update top";
            const std::string to = (r.action == FbaAction::Fallback ? "back:" : "") + k[r.next];
            doc["read"].push_back({{"from", k[r.state]}, {"input", fba_.sigma()[r.symbol]}, {"to", to},
                                   {"stack", stack}});
        } else if (r.type.kind == CellType::Kind::Marked) {
            const bool again = r.action == FbaAction::Fallback;
            doc["loop"].push_back({{"from", "back:" + k[r.state]},
                                   {"pop_symbol", fba_.sigma()[r.symbol]},
                                   {"pop_mark", k[r.type.state]},
                                   {"to", again ? "back:" + k[r.next] : "vector[" + k[r.next] + "]"},
                                   {"stack", "pop top, fold its vector into the next"}});
        }
    }
    doc["fba"] = fba_.to_json();
    return doc;
}

CompiledPda fba_to_pda(const Fba& fba) { return CompiledPda(fba); }

// ---------------------------------------------------------------------------
// Chomsky-Schutzenberger construction

namespace {

std::uint32_t find_name(const std::vector<std::string>& names, const std::string& n, const char* what) {
    const auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) {
        fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + n + "'");
    }
    return static_cast<std::uint32_t>(it - names.begin());
}

}  // namespace

Nfa Nfa::universal(std::vector<std::string> sigma) {
    Nfa r;
    r.sigma = std::move(sigma);
    r.states = {"all"};
    r.initial = {0};
    r.accepting = {0};
    for (std::uint32_t a = 0; a < r.sigma.size(); ++a) {
        r.transitions.emplace_back(0, a, 0);
    }
    return r;
}

void Nfa::validate() const {
    if (states.empty()) {
        fail(ErrorCode::InvalidArgument, "automaton R has no states");
    }
    for (auto q : initial) {
        if (q >= states.size()) {
            fail(ErrorCode::InvalidArgument, "R: initial state out of range");
        }
    }
    for (auto q : accepting) {
        if (q >= states.size()) {
            fail(ErrorCode::InvalidArgument, "R: accepting state out of range");
        }
    }
    for (const auto& [from, sym, to] : transitions) {
        if (from >= states.size() || to >= states.size() || sym >= sigma.size()) {
            fail(ErrorCode::InvalidArgument, "R: transition out of range");
        }
    }
}

Nfa Nfa::from_json(const nlohmann::json& doc) {
    try {
        Nfa r;
        r.sigma = doc.at("sigma").get<std::vector<std::string>>();
        r.states = doc.at("states").get<std::vector<std::string>>();
        for (const auto& q : doc.at("initial")) {
            r.initial.push_back(find_name(r.states, q.get<std::string>(), "R state"));
        }
        for (const auto& q : doc.at("accepting")) {
            r.accepting.push_back(find_name(r.states, q.get<std::string>(), "R state"));
        }
        for (const auto& t : doc.at("transitions")) {
            r.transitions.emplace_back(find_name(r.states, t.at(0).get<std::string>(), "R state"),
                                       find_name(r.sigma, t.at(1).get<std::string>(), "R symbol"),
                                       find_name(r.states, t.at(2).get<std::string>(), "R state"));
        }
        r.validate();
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("automaton R: ") + e.what());
    }
}

nlohmann::json Nfa::to_json() const {
    nlohmann::json doc;
    doc["sigma"] = sigma;
    doc["states"] = states;
    std::vector<std::string> init;
    for (auto q : initial) {
        init.push_back(states[q]);
    }
    std::vector<std::string> acc;
    for (auto q : accepting) {
        acc.push_back(states[q]);
    }
    doc["initial"] = init;
    doc["accepting"] = acc;
    doc["transitions"] = nlohmann::json::array();
    for (const auto& [from, sym, to] : transitions) {
        doc["transitions"].push_back({states[from], sigma[sym], states[to]});
    }
    return doc;
}

bool Nfa::accepts(const std::vector<std::string>& word) const {
    std::vector<bool> cur(states.size(), false);
    for (auto q : initial) {
        cur[q] = true;
    }
    for (const auto& sym : word) {
        const auto it = std::find(sigma.begin(), sigma.end(), sym);
        if (it == sigma.end()) {
            return false;
        }
        const auto a = static_cast<std::uint32_t>(it - sigma.begin());
        std::vector<bool> next(states.size(), false);
        for (const auto& [from, s, to] : transitions) {
            if (s == a && cur[from]) {
                next[to] = true;
            }
        }
        cur = std::move(next);
    }
    return std::any_of(accepting.begin(), accepting.end(), [&](auto q) { return bool(cur[q]); });
}

std::vector<std::string> CsInstance::sigma() const {
    std::vector<std::string> out = r.sigma;
    for (const auto& [open, close] : brackets) {
        for (const auto* b : {&open, &close}) {
            const auto it = h.find(*b);
            if (it == h.end()) {
                continue;
            }
            for (const auto& s : it->second) {
                if (std::find(out.begin(), out.end(), s) == out.end()) {
                    out.push_back(s);
                }
            }
        }
    }
    return out;
}

void CsInstance::validate() const {
    if (brackets.empty()) {
        fail(ErrorCode::InvalidArgument, "a CS instance needs at least one bracket kind");
    }
    std::set<std::string> names;
    for (const auto& [open, close] : brackets) {
        for (const auto* b : {&open, &close}) {
            if (!names.insert(*b).second) {
                fail(ErrorCode::InvalidArgument, "bracket '" + *b + "' is listed twice");
            }
            const auto it = h.find(*b);
            if (it == h.end()) {
                fail(ErrorCode::InvalidArgument, "h has no image for bracket '" + *b + "'");
            }
            if (it->second.empty()) {
                fail(ErrorCode::InvalidArgument, "h maps bracket '" + *b + "' to the empty string");
            }
        }
    }
    r.validate();
}

CsInstance CsInstance::from_json(const nlohmann::json& doc) {
    try {
        CsInstance inst;
        if (doc.contains("brackets")) {
            for (const auto& pair : doc.at("brackets")) {
                inst.brackets.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
            }
        } else {
            // Without explicit names, kind i uses the i-th default pair.
            static const std::pair<const char*, const char*> kDefault[] = {{"(", ")"}, {"[", "]"}, {"{", "}"},
                                                                            {"<", ">"}};
            const auto k = doc.at("k").get<std::size_t>();
            if (k == 0 || k > std::size(kDefault)) {
                fail(ErrorCode::InvalidArgument, "k must be 1 to 4 unless brackets are named explicitly");
            }
            for (std::size_t i = 0; i < k; ++i) {
                inst.brackets.emplace_back(kDefault[i].first, kDefault[i].second);
            }
        }
        if (doc.contains("k") && doc.at("k").get<std::size_t>() != inst.brackets.size()) {
            fail(ErrorCode::InvalidArgument, "k does not match the number of bracket pairs");
        }
        for (const auto& [bracket, image] : doc.at("h").items()) {
            inst.h[bracket] = image.is_array() ? image.get<std::vector<std::string>>()
                                               : split_symbols(image.get<std::string>());
        }
        if (doc.contains("R") && !doc.at("R").is_null()) {
            inst.r = Nfa::from_json(doc.at("R"));
        } else {
            CsInstance probe = inst;
            probe.r = Nfa{};
            inst.r = Nfa::universal(probe.sigma());
        }
        inst.validate();
        return inst;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("CS instance: ") + e.what());
    }
}

nlohmann::json CsInstance::to_json() const {
    nlohmann::json doc;
    doc["k"] = k();
    doc["brackets"] = nlohmann::json::array();
    for (const auto& [open, close] : brackets) {
        doc["brackets"].push_back({open, close});
    }
    doc["h"] = nlohmann::json::object();
    for (const auto& [b, image] : h) {
        doc["h"][b] = image;
    }
    doc["R"] = r.to_json();
    return doc;
}

Fba cs_weak_fba(const CsInstance& inst) {
    inst.validate();
    const auto sigma = inst.sigma();
    const auto& rn = inst.r;
    // R's alphabet may be smaller than sigma; such symbols have no R move.
    std::vector<std::optional<std::uint32_t>> r_sym(sigma.size());
    for (std::uint32_t a = 0; a < sigma.size(); ++a) {
        const auto it = std::find(rn.sigma.begin(), rn.sigma.end(), sigma[a]);
        if (it != rn.sigma.end()) {
            r_sym[a] = static_cast<std::uint32_t>(it - rn.sigma.begin());
        }
    }
    auto r_step = [&](std::uint32_t r, std::uint32_t a) {
        std::vector<std::uint32_t> out;
        if (!r_sym[a]) {
            return out;
        }
        for (const auto& [from, s, to] : rn.transitions) {
            if (from == r && s == *r_sym[a]) {
                out.push_back(to);
            }
        }
        return out;
    };
    auto sym_index = [&](const std::string& s) {
        return static_cast<std::uint32_t>(std::find(sigma.begin(), sigma.end(), s) - sigma.begin());
    };

    // Brackets 0..k-1 open, k..2k-1 close.
    const auto k = static_cast<std::uint32_t>(inst.k());
    std::vector<std::vector<std::uint32_t>> image(2 * k);
    std::vector<std::string> bracket_name(2 * k);
    for (std::uint32_t b = 0; b < k; ++b) {
        bracket_name[b] = inst.brackets[b].first;
        bracket_name[k + b] = inst.brackets[b].second;
    }
    for (std::uint32_t x = 0; x < 2 * k; ++x) {
        for (const auto& s : inst.h.at(bracket_name[x])) {
            image[x].push_back(sym_index(s));
        }
    }

    // State kinds. depth0: no bracket is open.
    //   idle(depth0, r)          between bracket images
    //   open(b, bottom, r)       just marked an open image; bottom = opened at depth 0
    //   read(x, j, depth0, r)    j symbols of h(x) consumed, 0 < j < |h(x)|
    //   close(b, r)              fell back after h(close b); needs a mark of kind b
    std::vector<std::string> names;
    std::map<std::string, std::uint32_t> ids;
    std::deque<std::uint32_t> todo;
    struct Info {
        enum Kind { Idle, Open, Read, Close } kind;
        std::uint32_t bracket;
        std::uint32_t progress;
        bool depth0;
        std::uint32_t r;
    };
    std::vector<Info> info;
    auto state = [&](Info in) {
        std::string name;
        const std::string& rname = rn.states[in.r];
        switch (in.kind) {
        case Info::Idle: name = std::string("idle/") + (in.depth0 ? "0" : "+") + "/" + rname; break;
        case Info::Open:
            name = "open " + bracket_name[in.bracket] + "/" + (in.depth0 ? "bottom" : "inner") + "/" + rname;
            break;
        case Info::Read:
            name = "read " + bracket_name[in.bracket] + "." + std::to_string(in.progress) + "/" +
                   (in.depth0 ? "0" : "+") + "/" + rname;
            break;
        case Info::Close: name = "close " + bracket_name[in.bracket] + "/" + rname; break;
        }
        auto [it, inserted] = ids.emplace(name, static_cast<std::uint32_t>(names.size()));
        if (inserted) {
            names.push_back(name);
            info.push_back(in);
            todo.push_back(it->second);
        }
        return it->second;
    };

    std::vector<FbaRule> rules;
    std::vector<std::uint32_t> initial;
    for (auto r0 : rn.initial) {
        initial.push_back(state({Info::Idle, 0, 0, true, r0}));
    }
    // Reading symbol j of h(x) from `from` in context depth0 with R state r.
    auto read_symbol = [&](std::uint32_t from, std::uint32_t x, std::uint32_t j, bool depth0, std::uint32_t r) {
        const std::uint32_t a = image[x][j];
        const bool last = j + 1 == image[x].size();
        for (auto r2 : r_step(r, a)) {
            if (!last) {
                rules.push_back({a, CellType::fresh(), from, state({Info::Read, x, j + 1, depth0, r2}), FbaAction::Seen});
            } else if (x < k) {
                rules.push_back({a, CellType::fresh(), from, state({Info::Open, x, 0, depth0, r2}), FbaAction::Mark});
            } else {
                rules.push_back({a, CellType::fresh(), from, state({Info::Close, x - k, 0, false, r2}),
                                 FbaAction::Fallback});
            }
        }
    };

    // Every (open, close) pair of one kind gets a marked rule, emitted once
    // when the later of the two states is expanded.
    std::vector<std::uint32_t> open_states;
    std::vector<std::uint32_t> close_states;
    auto match = [&](std::uint32_t m, std::uint32_t c) {
        if (info[m].bracket != info[c].bracket) {
            return;
        }
        const std::uint32_t mark_symbol = image[info[m].bracket].back();
        const auto to = state({Info::Idle, 0, 0, info[m].depth0, info[c].r});
        rules.push_back({mark_symbol, CellType::marked(m), c, to, FbaAction::Seen});
    };
    while (!todo.empty()) {
        const std::uint32_t q = todo.front();
        todo.pop_front();
        const Info in = info[q];
        switch (in.kind) {
        case Info::Idle:
        case Info::Open: {
            const bool depth0 = in.kind == Info::Idle && in.depth0;
            for (std::uint32_t x = 0; x < 2 * k; ++x) {
                if (x >= k && depth0) {
                    continue;  // nothing open to close
                }
                read_symbol(q, x, 0, depth0, in.r);
            }
            if (in.kind == Info::Idle) {
                for (std::uint32_t a = 0; a < sigma.size(); ++a) {
                    rules.push_back({a, CellType::seen(), q, q, FbaAction::Seen});
                }
            } else {
                for (auto c : close_states) {
                    match(q, c);
                }
                open_states.push_back(q);
            }
            break;
        }
        case Info::Read:
            read_symbol(q, in.bracket, in.progress, in.depth0, in.r);
            break;
        case Info::Close:
            for (auto m : open_states) {
                match(m, q);
            }
            close_states.push_back(q);
            break;
        }
    }

    std::vector<std::uint32_t> accepting;
    const std::set<std::uint32_t> r_accepting(rn.accepting.begin(), rn.accepting.end());
    for (std::uint32_t q = 0; q < names.size(); ++q) {
        if (info[q].kind == Info::Idle && info[q].depth0 && r_accepting.count(info[q].r)) {
            accepting.push_back(q);
        }
    }
    return Fba(sigma, std::move(names), std::move(initial), std::move(accepting), std::move(rules));
}

}  // namespace assemblies
