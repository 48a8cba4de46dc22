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

// Independent reference implementations used by the tests. None of them
// calls into the library code they check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Dense brain: full weight matrices, one step by the textbook definition.

struct DenseArea {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double beta = 0.0;
    bool inhibited = false;
    bool fixed = false;
    std::vector<std::uint32_t> winners;  // sorted
};

struct DenseBrain {
    std::vector<DenseArea> areas;
    // w[a][b] is an n_a x n_b matrix; empty when a and b are not connected.
    std::vector<std::vector<std::vector<std::vector<double>>>> w;
    std::vector<std::vector<bool>> connected;   // fiber present, or a == b
    std::vector<std::vector<bool>> fiber_open;  // ignored on the diagonal
    std::vector<std::vector<double>> beta;      // per (from, to); < 0: the target's

    void step() {
        const std::size_t count = areas.size();
        std::vector<bool> fires(count);
        for (std::size_t a = 0; a < count; ++a) {
            fires[a] = !areas[a].inhibited && !areas[a].winners.empty();
        }
        std::vector<std::vector<std::uint32_t>> next(count);
        std::vector<std::vector<std::size_t>> sources(count);
        for (std::size_t b = 0; b < count; ++b) {
            const DenseArea& t = areas[b];
            if (t.inhibited || t.fixed) {
                next[b] = t.winners;
                if (t.fixed && !t.inhibited) {
                    for (std::size_t a = 0; a < count; ++a) {
                        if (a != b && fires[a] && connected[a][b] && fiber_open[a][b]) {
                            sources[b].push_back(a);
                        }
                    }
                }
                continue;
            }
            for (std::size_t a = 0; a < count; ++a) {
                if (fires[a] && connected[a][b] && (a == b || fiber_open[a][b])) {
                    sources[b].push_back(a);
                }
            }
            if (sources[b].empty()) {
                continue;  // a free area with no input goes silent
            }
            std::vector<double> input(t.n, 0.0);
            for (auto a : sources[b]) {
                for (auto i : areas[a].winners) {
                    for (std::uint32_t j = 0; j < t.n; ++j) {
                        input[j] += w[a][b][i][j];
                    }
                }
            }
            // Positive inputs by value, ties to the lower index; zero-input
            // neurons only pad, lowest index first.
            std::vector<std::uint32_t> order(t.n);
            std::iota(order.begin(), order.end(), 0u);
            std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return input[x] > input[y]; });
            if (input[order[0]] <= 0.0) {
                continue;
            }
            std::vector<std::uint32_t> chosen(order.begin(), order.begin() + std::min<std::size_t>(t.k, t.n));
            std::sort(chosen.begin(), chosen.end());
            next[b] = chosen;
        }
        for (std::size_t b = 0; b < count; ++b) {
            if (areas[b].inhibited || next[b].empty()) {
                continue;
            }
            for (auto a : sources[b]) {
                const double rate = beta[a][b] < 0 ? areas[b].beta : beta[a][b];
                for (auto i : areas[a].winners) {
                    for (auto j : next[b]) {
                        if (w[a][b][i][j] != 0.0) {
                            w[a][b][i][j] *= 1.0 + rate;
                        }
                    }
                }
            }
        }
        for (std::size_t b = 0; b < count; ++b) {
            areas[b].winners = next[b];
        }
    }
};

// ---------------------------------------------------------------------------
// Languages

/// Balanced over brackets (open_i, close_i).
inline bool is_dyck(const std::vector<std::string>& word,
                    const std::vector<std::pair<std::string, std::string>>& brackets) {
    std::vector<std::size_t> stack;
    for (const auto& s : word) {
        bool matched = false;
        for (std::size_t i = 0; i < brackets.size(); ++i) {
            if (s == brackets[i].first) {
                stack.push_back(i);
                matched = true;
                break;
            }
            if (s == brackets[i].second) {
                if (stack.empty() || stack.back() != i) {
                    return false;
                }
                stack.pop_back();
                matched = true;
                break;
            }
        }
        if (!matched) {
            return false;
        }
    }
    return stack.empty();
}

/// Plain NFA simulation by state sets.
struct Nfa {
    std::vector<std::string> sigma;
    std::size_t states = 0;
    std::set<std::size_t> initial;
    std::set<std::size_t> accepting;
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> transitions;

    bool accepts(const std::vector<std::string>& word) const {
        std::set<std::size_t> cur = initial;
        for (const auto& s : word) {
            std::set<std::size_t> next;
            for (const auto& [from, sym, to] : transitions) {
                if (sym == s && cur.count(from)) {
                    next.insert(to);
                }
            }
            cur = std::move(next);
        }
        for (auto q : cur) {
            if (accepting.count(q)) {
                return true;
            }
        }
        return false;
    }
};

/// {h(w) : w in D_k, |h(w)| <= max_len} intersected with L(r), by
/// enumerating Dyck words bracket by bracket.
inline std::set<std::vector<std::string>> cs_language(
    const std::vector<std::pair<std::string, std::string>>& brackets,
    const std::map<std::string, std::vector<std::string>>& h, const Nfa* r, std::size_t max_len) {
    std::set<std::vector<std::string>> out;
    std::vector<std::string> image;
    std::vector<std::size_t> open;
    std::function<void()> grow = [&] {
        if (open.empty() && (r == nullptr || r->accepts(image))) {
            out.insert(image);
        }
        auto extend = [&](const std::string& bracket, auto&& then) {
            const auto& piece = h.at(bracket);
            if (image.size() + piece.size() > max_len) {
                return;
            }
            image.insert(image.end(), piece.begin(), piece.end());
            then();
            image.resize(image.size() - piece.size());
        };
        for (std::size_t i = 0; i < brackets.size(); ++i) {
            extend(brackets[i].first, [&] {
                open.push_back(i);
                grow();
                open.pop_back();
            });
        }
        if (!open.empty()) {
            const std::size_t i = open.back();
            extend(brackets[i].second, [&] {
                open.pop_back();
                grow();
                open.push_back(i);
            });
        }
    };
    grow();
    return out;
}

/// a^n x b^n with x over {0, 1}.
inline bool alpha_x_beta(const std::vector<std::string>& word) {
    std::size_t i = 0;
    std::size_t n = 0;
    while (i < word.size() && word[i] == "a") {
        ++i;
        ++n;
    }
    while (i < word.size() && (word[i] == "0" || word[i] == "1")) {
        ++i;
    }
    std::size_t m = 0;
    while (i < word.size() && word[i] == "b") {
        ++i;
        ++m;
    }
    return i == word.size() && n == m;
}

/// Every word over `sigma` of length <= max_len.
inline std::vector<std::vector<std::string>> words_up_to(const std::vector<std::string>& sigma,
                                                         std::size_t max_len) {
    std::vector<std::vector<std::string>> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (const auto& s : sigma) {
                auto w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        }
        begin = end;
    }
    return out;
}

}  // namespace oracle
