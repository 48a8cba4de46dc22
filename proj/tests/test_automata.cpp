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

#include <doctest.h>

#include <fstream>
#include <random>

#include "assemblies/bridges.hpp"
#include "assemblies/error.hpp"
#include "assemblies/fba.hpp"
#include "assemblies/pda.hpp"
#include "assemblies/symbols.hpp"
#include "support/oracles.hpp"

using namespace assemblies;

namespace {

nlohmann::json load_machine(const std::string& name) {
    std::ifstream in(std::string(ASSEMBLIES_DATA_DIR) + "/machines/" + name);
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

std::vector<std::string> names(const Fba& fba, const std::vector<std::uint32_t>& word) {
    std::vector<std::string> out;
    for (auto s : word) {
        out.push_back(fba.sigma()[s]);
    }
    return out;
}

// Two-rule machine that accepts "ab" only when marks store the state the
// machine was in before marking.
Fba mark_value_probe() {
    return Fba::from_json(nlohmann::json::parse(R"({
        "sigma": ["a", "b"], "states": ["q0", "q1", "q2", "q3"],
        "initial": ["q0"], "accepting": ["q3"],
        "rules": [
          {"sym": "a", "type": "f", "state": "q0", "next": "q1", "action": "mark"},
          {"sym": "b", "type": "f", "state": "q1", "next": "q2", "action": "fallback"},
          {"sym": "a", "type": "q0", "state": "q2", "next": "q3", "action": "s"},
          {"sym": "b", "type": "s", "state": "q3", "next": "q3", "action": "s"}
        ]})"));
}

}  // namespace

TEST_CASE("symbols split on whitespace or per character") {
    CHECK(split_symbols("()") == std::vector<std::string>{"(", ")"});
    CHECK(split_symbols("ab c") == std::vector<std::string>{"ab", "c"});
    CHECK(split_symbols("").empty());
}

TEST_CASE("dyck1 FBA agrees with the balance oracle") {
    const Fba fba = Fba::from_json(load_machine("dyck1.json"));
    const std::vector<std::pair<std::string, std::string>> br{{"(", ")"}};
    for (const auto& w : all_words(2, 10)) {
        CHECK(accepts(fba, w) == oracle::is_dyck(names(fba, w), br));
    }
    CHECK(accepts(fba, "(()())"));
    CHECK_FALSE(accepts(fba, ")("));
}

TEST_CASE("FBA JSON round-trips and rejects malformed rules") {
    const Fba fba = Fba::from_json(load_machine("dyck1.json"));
    CHECK(Fba::from_json(fba.to_json()).to_json() == fba.to_json());
    auto bad = load_machine("dyck1.json");
    bad["rules"].push_back({{"sym", "("}, {"type", "s"}, {"state", "I"}, {"next", "I"}, {"action", "mark"}});
    CHECK_THROWS_AS(Fba::from_json(bad), Error);
    auto bad2 = load_machine("dyck1.json");
    bad2["rules"].push_back({{"sym", "("}, {"type", "O"}, {"state", "C"}, {"next", "I"}, {"action", "mark"}});
    CHECK_THROWS_AS(Fba::from_json(bad2), Error);
    auto bad3 = load_machine("dyck1.json");
    bad3["rules"][0]["state"] = "nowhere";
    CHECK_THROWS_AS(Fba::from_json(bad3), Error);
}

TEST_CASE("marks store the result state unless asked otherwise") {
    const Fba fba = mark_value_probe();
    const auto ab = fba.encode("ab");
    CHECK_FALSE(accepts(fba, ab));
    FbaOptions current;
    current.mark = MarkValue::Current;
    CHECK(accepts(fba, ab, current));
}

TEST_CASE("acceptance needs the whole input unless prefix mode is on") {
    const Fba fba = Fba::from_json(nlohmann::json::parse(R"({
        "sigma": ["a"], "states": ["p", "q"], "initial": ["p"], "accepting": ["q"],
        "rules": [{"sym": "a", "type": "f", "state": "p", "next": "q", "action": "s"}]})"));
    CHECK(accepts(fba, "a"));
    CHECK_FALSE(accepts(fba, "aa"));
    FbaOptions prefix;
    prefix.prefix = true;
    CHECK(accepts(fba, "aa", prefix));
}

TEST_CASE("a fallback without any mark kills the branch") {
    const Fba fba = Fba::from_json(nlohmann::json::parse(R"({
        "sigma": ["a"], "states": ["p", "q"], "initial": ["p"], "accepting": ["p", "q"],
        "rules": [{"sym": "a", "type": "f", "state": "p", "next": "q", "action": "fallback"}]})"));
    CHECK(successors(fba, initial_configuration(fba.encode("a"), 0)).empty());
    CHECK_FALSE(accepts(fba, "a"));
}

TEST_CASE("witness runs start initial and end accepting past the input") {
    const Fba fba = Fba::from_json(load_machine("dyck1.json"));
    const auto word = fba.encode("(())");
    const FbaResult r = run(fba, word);
    REQUIRE(r.accepted);
    REQUIRE(!r.witness.empty());
    CHECK(r.witness.front().position == 0);
    CHECK(r.witness.back().position == word.size());
    CHECK(fba.is_accepting(r.witness.back().state));
    CHECK(r.to_json(fba).contains("witness"));
}

TEST_CASE("the configuration cap raises Inconclusive") {
    const Fba fba = Fba::from_json(load_machine("dyck1.json"));
    FbaOptions capped;
    capped.max_configurations = 3;
    try {
        (void)accepts(fba, "((()))", capped);
        FAIL("expected Inconclusive");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inconclusive);
    }
}

TEST_CASE("weakness and s-determinism are syntactic checks") {
    const Fba dyck = Fba::from_json(load_machine("dyck1.json"));
    CHECK(is_weak(dyck));
    CHECK(is_s_deterministic(dyck));
    const Fba axb = Fba::from_json(load_machine("alpha_x_beta.json"));
    CHECK(is_weak(axb));
    const Fba probe = mark_value_probe();
    CHECK(is_weak(probe));
    auto doc = load_machine("dyck1.json");
    doc["rules"].push_back({{"sym", "("}, {"type", "s"}, {"state", "I"}, {"next", "P"}, {"action", "s"}});
    const Fba changed = Fba::from_json(doc);
    CHECK_FALSE(is_weak(changed));
    CHECK_FALSE(is_s_deterministic(changed));
    CHECK(weak_violations(changed).size() == 1);
}

TEST_CASE("all_words lists shortest first") {
    const auto words = all_words(2, 3);
    CHECK(words.size() == 15);
    CHECK(words.front().empty());
    for (std::size_t i = 1; i < words.size(); ++i) {
        CHECK(words[i - 1].size() <= words[i].size());
    }
}

TEST_CASE("hand FBA for a^n x b^n matches its oracle") {
    const Fba fba = Fba::from_json(load_machine("alpha_x_beta.json"));
    for (const auto& w : all_words(fba.sigma().size(), 6)) {
        CHECK(accepts(fba, w) == oracle::alpha_x_beta(names(fba, w)));
    }
}

TEST_CASE("explicit D1 PDA accepts balanced strings within its bounds") {
    const Pda pda = Pda::from_json(load_machine("d1_pda.json"));
    const std::vector<std::pair<std::string, std::string>> br{{"(", ")"}};
    for (const auto& w : oracle::words_up_to({"(", ")"}, 8)) {
        std::string text;
        for (const auto& s : w) {
            text += s;
        }
        CHECK(pda_accepts(pda, text) == oracle::is_dyck(w, br));
    }
    CHECK(Pda::from_json(pda.to_json()).to_json() == pda.to_json());
    const PdaRun cut = pda.run(pda.encode("(())"), PdaBounds{2, 0});
    CHECK(cut.verdict == PdaVerdict::Inconclusive);
    CHECK_THROWS_AS(pda_accepts(pda, "(())", PdaBounds{2, 0}), Error);
}

TEST_CASE("s-determinization is s-deterministic and keeps the language") {
    std::mt19937_64 rng(77);
    for (int m = 0; m < 40; ++m) {
        const Fba fba = random_fba(rng);
        const Fba det = s_determinize(fba);
        CHECK(is_s_deterministic(det));
        for (const auto& w : all_words(fba.sigma().size(), 5)) {
            CHECK(accepts(fba, w) == accepts(det, w));
        }
    }
}

TEST_CASE("compiled PDA needs an s-deterministic machine") {
    auto doc = load_machine("dyck1.json");
    doc["rules"].push_back({{"sym", "("}, {"type", "s"}, {"state", "I"}, {"next", "P"}, {"action", "s"}});
    CHECK_THROWS_AS(CompiledPda(Fba::from_json(doc)), Error);
}

TEST_CASE("compiled PDA traces respect the simulation invariants") {
    std::mt19937_64 rng(91);
    std::size_t traced = 0;
    for (int m = 0; m < 40; ++m) {
        const CompiledPda pda(s_determinize(random_fba(rng)));
        const auto& fba = pda.fba();
        for (const auto& w : all_words(fba.sigma().size(), 5)) {
            const auto trace = pda.accepting_trace(w);
            CHECK(trace.empty() != accepts(fba, w));
            if (trace.empty()) {
                continue;
            }
            ++traced;
            // Starts in an initial state with nothing read and an empty stack.
            CHECK(trace.front().position == 0);
            CHECK(trace.front().stack_height == 0);
            CHECK_FALSE(trace.front().in_fallback_loop);
            for (std::size_t i = 0; i < trace.size(); ++i) {
                // One frame per marked cell, so never more than the cells read.
                CHECK(trace[i].stack_height <= trace[i].position);
                if (i > 0 && trace[i - 1].in_fallback_loop) {
                    // The loop only pops; it reads nothing.
                    CHECK(trace[i].position == trace[i - 1].position);
                    CHECK(trace[i].stack_height < trace[i - 1].stack_height);
                }
            }
            CHECK(trace.back().position == w.size());
            CHECK(fba.is_accepting(trace.back().state));
        }
        const double k = static_cast<double>(fba.states().size());
        CHECK(pda.stack_alphabet_bound() ==
              doctest::Approx(static_cast<double>(fba.sigma().size()) * k * std::pow(k + 1.0, k)));
    }
    CHECK(traced > 0);
}

TEST_CASE("round trip FBA to PDA has no counterexamples") {
    const SweepReport r = equivalence_sweep(50, 6, 1);
    CHECK(r.mismatches.empty());
    CHECK(r.inconclusive == 0);
    CHECK(r.within_bounds);
    CHECK(r.words > 0);
    CHECK(r.accepted > 0);
}

TEST_CASE("CS construction matches the enumeration oracle") {
    struct Case {
        const char* file;
        std::size_t max_len;
    };
    for (const Case c : {Case{"cs_dyck1.json", 10}, Case{"cs_dyck2_h.json", 10}, Case{"cs_anbn.json", 10},
                         Case{"cs_empty.json", 6}}) {
        INFO(c.file);
        const auto doc = load_machine(c.file);
        const CsInstance inst = CsInstance::from_json(doc);
        const Fba fba = cs_weak_fba(inst);
        CHECK(is_weak(fba));
        oracle::Nfa r;
        r.sigma = inst.r.sigma;
        r.states = inst.r.states.size();
        r.initial.insert(inst.r.initial.begin(), inst.r.initial.end());
        r.accepting.insert(inst.r.accepting.begin(), inst.r.accepting.end());
        for (const auto& [from, sym, to] : inst.r.transitions) {
            r.transitions.emplace_back(from, inst.r.sigma[sym], to);
        }
        const auto language = oracle::cs_language(inst.brackets, inst.h, &r, c.max_len);
        std::size_t accepted = 0;
        for (const auto& w : all_words(fba.sigma().size(), c.max_len)) {
            const bool got = accepts(fba, w);
            accepted += got ? 1 : 0;
            CHECK(got == (language.count(names(fba, w)) > 0));
        }
        CHECK(accepted == language.size());
    }
}

TEST_CASE("CS instances with erasing or missing images are rejected") {
    auto doc = load_machine("cs_dyck1.json");
    doc["h"]["("] = "";
    CHECK_THROWS_AS(CsInstance::from_json(doc), Error);
    auto doc2 = load_machine("cs_dyck1.json");
    doc2["h"].erase(")");
    CHECK_THROWS_AS(CsInstance::from_json(doc2), Error);
    auto doc3 = load_machine("cs_anbn.json");
    doc3["R"]["transitions"].push_back({"s0", "z", "s1"});
    CHECK_THROWS_AS(CsInstance::from_json(doc3), Error);
    const auto plain = CsInstance::from_json(nlohmann::json::parse(R"J({"k": 2, "h": {"(": "(", ")": ")", "[": "[", "]": "]"}})J"));
    CHECK(plain.brackets.size() == 2);
    CHECK(CsInstance::from_json(plain.to_json()).to_json() == plain.to_json());
}
