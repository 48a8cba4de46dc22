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

#include <algorithm>
#include <chrono>

#include "assemblies/bridges.hpp"
#include "assemblies/error.hpp"

namespace assemblies {

Fba random_fba(std::mt19937_64& rng, const RandomFbaParams& params) {
    if (params.max_states == 0 || params.max_symbols == 0 || params.max_rules == 0) {
        fail(ErrorCode::InvalidArgument, "random FBA parameters must be positive");
    }
    auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
    };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    for (;;) {
        const std::uint32_t nq = uniform(1, params.max_states);
        const std::uint32_t ns = uniform(1, params.max_symbols);
        std::vector<std::string> sigma;
        for (std::uint32_t a = 0; a < ns; ++a) {
            sigma.push_back(std::string(1, static_cast<char>('a' + a)));
        }
        std::vector<std::string> states;
        for (std::uint32_t q = 0; q < nq; ++q) {
            states.push_back("q" + std::to_string(q));
        }
        std::vector<std::uint32_t> initial;
        std::vector<std::uint32_t> accepting;
        for (std::uint32_t q = 0; q < nq; ++q) {
            if (coin(0.5)) {
                initial.push_back(q);
            }
            if (coin(0.5)) {
                accepting.push_back(q);
            }
        }
        if (initial.empty()) {
            initial.push_back(uniform(0, nq - 1));
        }
        std::vector<FbaRule> rules;
        const std::uint32_t count = uniform(1, params.max_rules);
        for (std::uint32_t i = 0; i < count; ++i) {
            FbaRule r;
            r.symbol = uniform(0, ns - 1);
            r.state = uniform(0, nq - 1);
            r.next = uniform(0, nq - 1);
            const std::uint32_t kind = uniform(0, 9);
            if (kind < 5) {
                r.type = CellType::fresh();
                const std::uint32_t act = uniform(0, 2);
                r.action = act == 0 ? FbaAction::Seen : act == 1 ? FbaAction::Mark : FbaAction::Fallback;
            } else if (kind < 7) {
                r.type = CellType::seen();
                r.action = FbaAction::Seen;
            } else {
                r.type = CellType::marked(uniform(0, nq - 1));
                r.action = coin(0.5) ? FbaAction::Seen : FbaAction::Fallback;
            }
            rules.push_back(r);
        }
        const bool starts = std::any_of(rules.begin(), rules.end(), [&](const FbaRule& r) {
            return r.type.kind == CellType::Kind::Fresh &&
                   std::find(initial.begin(), initial.end(), r.state) != initial.end();
        });
        if (starts) {
            return Fba(std::move(sigma), std::move(states), std::move(initial), std::move(accepting),
                       std::move(rules));
        }
    }
}

nlohmann::json SweepReport::to_json() const {
    nlohmann::json doc{{"machines", machines},
                       {"words", words},
                       {"accepted", accepted},
                       {"inconclusive", inconclusive},
                       {"max_stack", max_stack},
                       {"max_epsilon_chain", max_epsilon_chain},
                       {"within_bounds", within_bounds},
                       {"seconds", seconds}};
    doc["mismatches"] = nlohmann::json::array();
    for (const auto& m : mismatches) {
        doc["mismatches"].push_back(
            {{"machine", m.machine}, {"word", m.word}, {"fba", m.fba}, {"pda", m.pda}, {"fba_json", m.fba_json}});
    }
    return doc;
}

SweepReport equivalence_sweep(std::size_t machines, std::size_t max_len, std::uint64_t seed,
                              const RandomFbaParams& params) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    SweepReport report;
    report.machines = machines;
    for (std::size_t m = 0; m < machines; ++m) {
        const Fba fba = random_fba(rng, params);
        const CompiledPda pda(s_determinize(fba));
        for (const auto& word : all_words(fba.sigma().size(), max_len)) {
            ++report.words;
            const bool expected = accepts(fba, word);
            const PdaRun run = pda.run(word);
            report.max_stack = std::max(report.max_stack, run.max_stack_seen);
            report.max_epsilon_chain = std::max(report.max_epsilon_chain, run.max_epsilon_chain_seen);
            if (expected) {
                ++report.accepted;
            }
            if (run.verdict == PdaVerdict::Inconclusive) {
                // A cut branch means the default bounds were too tight.
                ++report.inconclusive;
                report.within_bounds = false;
            }
            const bool got = run.verdict == PdaVerdict::Accept;
            if (got != expected) {
                report.mismatches.push_back({m, fba.decode(word), expected, got, fba.to_json()});
            }
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace assemblies
