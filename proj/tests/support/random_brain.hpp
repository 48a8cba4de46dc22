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

// Small random brains built twice: once through Brain::with_edges and once
// as an oracle::DenseBrain with identical weights and flags.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "assemblies/brain.hpp"
#include "oracles.hpp"

namespace testing_support {

struct TwinBrains {
    assemblies::Brain brain;
    oracle::DenseBrain dense;
    std::vector<std::string> names;
};

/// At most 8 neurons in total. Weights and rates are dyadic so sums and
/// products are exact and tie-breaking cannot drift between the two.
inline TwinBrains random_twin(std::mt19937_64& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const double weights[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    const double rates[] = {0.0, 0.25, 0.5, 1.0};

    const int count = pick(1, 3);
    std::vector<assemblies::AreaParams> params;
    int budget = 8;
    for (int a = 0; a < count; ++a) {
        const int max_n = budget - (count - a - 1) * 2;
        const int n = pick(2, std::min(4, max_n));
        budget -= n;
        params.push_back({"A" + std::to_string(a), static_cast<std::uint32_t>(n),
                          static_cast<std::uint32_t>(pick(1, n - 1)), rates[pick(0, 3)]});
    }
    std::vector<std::pair<std::string, std::string>> fibers;
    oracle::DenseBrain dense;
    dense.connected.assign(count, std::vector<bool>(count, false));
    dense.fiber_open.assign(count, std::vector<bool>(count, true));
    dense.beta.assign(count, std::vector<double>(count, -1.0));
    for (int a = 0; a < count; ++a) {
        dense.connected[a][a] = true;
        for (int b = a + 1; b < count; ++b) {
            if (pick(0, 3) != 0) {
                fibers.emplace_back(params[a].name, params[b].name);
                dense.connected[a][b] = dense.connected[b][a] = true;
            }
        }
    }
    dense.w.assign(count, std::vector<std::vector<std::vector<double>>>(count));
    std::vector<assemblies::ExplicitEdge> edges;
    for (int a = 0; a < count; ++a) {
        for (int b = 0; b < count; ++b) {
            dense.w[a][b].assign(params[a].n, std::vector<double>(params[b].n, 0.0));
            if (!dense.connected[a][b]) {
                continue;
            }
            for (std::uint32_t i = 0; i < params[a].n; ++i) {
                for (std::uint32_t j = 0; j < params[b].n; ++j) {
                    if ((a == b && i == j) || pick(0, 2) == 0) {
                        continue;
                    }
                    const double w = weights[pick(0, 4)];
                    dense.w[a][b][i][j] = w;
                    edges.push_back({params[a].name, i, params[b].name, j, w});
                }
            }
        }
    }
    auto brain = assemblies::Brain::with_edges(params, fibers, edges);

    for (int a = 0; a < count; ++a) {
        oracle::DenseArea area;
        area.n = params[a].n;
        area.k = params[a].k;
        area.beta = params[a].beta;
        area.inhibited = pick(0, 4) == 0;
        if (!area.inhibited) {
            brain.disinhibit_area(params[a].name);
        }
        // Either silent or exactly k winners, as set_winners requires.
        std::vector<assemblies::Neuron> w;
        if (pick(0, 3) != 0) {
            std::vector<assemblies::Neuron> all(area.n);
            std::iota(all.begin(), all.end(), 0u);
            std::shuffle(all.begin(), all.end(), rng);
            w.assign(all.begin(), all.begin() + area.k);
            std::sort(w.begin(), w.end());
        }
        area.winners = w;
        if (!w.empty()) {
            brain.set_winners(assemblies::Assembly(params[a].name, w));
        }
        area.fixed = pick(0, 5) == 0;
        brain.set_fixed(params[a].name, area.fixed);
        dense.areas.push_back(area);
    }
    for (const auto& [x, y] : fibers) {
        const int a = x[1] - '0';
        const int b = y[1] - '0';
        const bool open = pick(0, 4) != 0;
        dense.fiber_open[a][b] = dense.fiber_open[b][a] = open;
        if (open) {
            brain.disinhibit_fiber(x, y);
        }
    }
    for (int a = 0; a < count; ++a) {
        for (int b = 0; b < count; ++b) {
            if (dense.connected[a][b] && pick(0, 3) == 0) {
                dense.beta[a][b] = rates[pick(0, 3)];
                brain.set_plasticity(params[a].name, params[b].name, dense.beta[a][b]);
            }
        }
    }
    std::vector<std::string> names;
    for (const auto& p : params) {
        names.push_back(p.name);
    }
    return {std::move(brain), std::move(dense), std::move(names)};
}

/// Runs `steps` rounds on both and reports whether winners and every
/// weight agree exactly after each round.
inline bool twins_agree(TwinBrains& t, int steps, std::string* why = nullptr) {
    const std::size_t count = t.names.size();
    for (int s = 0; s < steps; ++s) {
        t.brain.step();
        t.dense.step();
        for (std::size_t a = 0; a < count; ++a) {
            const auto current = t.brain.winners(t.names[a]);
            const auto got = current.neurons();
            const auto& want = t.dense.areas[a].winners;
            if (!std::equal(got.begin(), got.end(), want.begin(), want.end())) {
                if (why) {
                    *why = "winners of " + t.names[a] + " differ at step " + std::to_string(s + 1);
                }
                return false;
            }
        }
        for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b = 0; b < count; ++b) {
                if (!t.dense.connected[a][b]) {
                    continue;
                }
                for (std::uint32_t i = 0; i < t.dense.areas[a].n; ++i) {
                    for (std::uint32_t j = 0; j < t.dense.areas[b].n; ++j) {
                        if (t.brain.weight(t.names[a], i, t.names[b], j) != t.dense.w[a][b][i][j]) {
                            if (why) {
                                *why = "weight " + t.names[a] + ":" + std::to_string(i) + " -> " + t.names[b] +
                                       ":" + std::to_string(j) + " differs at step " + std::to_string(s + 1);
                            }
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace testing_support
