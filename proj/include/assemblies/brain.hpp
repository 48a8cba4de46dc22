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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace assemblies {

using Neuron = std::uint32_t;

inline constexpr unsigned kDefaultRounds = 20;

struct AreaParams {
    std::string name;
    std::uint32_t n = 10000;
    std::uint32_t k = 100;
    double beta = 0.1;
};

/// Plasticity rate for the synapses from one area into another, replacing
/// the target area's beta. from == to addresses the recurrent synapses.
struct PlasticityOverride {
    std::string from;
    std::string to;
    double beta = 0.0;
};

struct BrainConfig {
    std::vector<AreaParams> areas;
    std::vector<std::pair<std::string, std::string>> fibers;
    std::vector<PlasticityOverride> plasticity;
    double p = 0.05;
    std::uint64_t seed = 0;

    static BrainConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

/// A set of neuron indices in one area, kept sorted and duplicate-free.
class Assembly {
public:
    Assembly() = default;
    Assembly(std::string area, std::vector<Neuron> neurons);

    const std::string& area() const noexcept { return area_; }
    std::span<const Neuron> neurons() const noexcept { return neurons_; }
    std::size_t size() const noexcept { return neurons_.size(); }
    bool empty() const noexcept { return neurons_.empty(); }
    bool contains(Neuron n) const;

    friend bool operator==(const Assembly&, const Assembly&) = default;

private:
    std::string area_;
    std::vector<Neuron> neurons_;
};

/// Number of neurons shared by two assemblies (areas are not compared).
std::size_t overlap(const Assembly& a, const Assembly& b);

struct Synapse {
    Neuron target;
    double weight;
};

/// One synapse given verbatim to Brain::with_edges().
struct ExplicitEdge {
    std::string from_area;
    Neuron from;
    std::string to_area;
    Neuron to;
    double weight = 1.0;
};

struct StepCounters {
    std::uint64_t rounds = 0;
    // Synapses traversed while accumulating synaptic input.
    std::uint64_t synaptic_ops = 0;
};

/// The discrete-time dynamical system: areas with recurrent synapses, fibers
/// between area pairs, k-cap firing and Hebbian plasticity.
///
/// Synapses are sampled lazily, one presynaptic neuron at a time, from a
/// stream keyed by (seed, source area, target area, neuron). The sampled graph
/// therefore does not depend on the order in which neurons first fire, and a
/// brain rebuilt from the same config is bit-identical.
///
/// Inhibition is tracked per channel (0 to 31): a target is inhibited while
/// any of its channels is set. Everything starts inhibited on channel 0.
class Brain {
public:
    static Brain build(const BrainConfig& config);
    /// Brain whose synapses are exactly `edges`; nothing is sampled.
    static Brain with_edges(std::vector<AreaParams> areas,
                            std::vector<std::pair<std::string, std::string>> fibers,
                            std::span<const ExplicitEdge> edges);

    bool has_area(std::string_view name) const;
    bool has_fiber(std::string_view a, std::string_view b) const;
    const AreaParams& params(std::string_view area) const;
    std::vector<std::string> area_names() const;
    std::vector<std::pair<std::string, std::string>> fiber_names() const;
    double p() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }

    void set_winners(const Assembly& assembly);
    Assembly winners(std::string_view area) const;
    void clear_winners(std::string_view area);

    void inhibit_area(std::string_view area, unsigned channel = 0);
    void disinhibit_area(std::string_view area, unsigned channel = 0);
    void inhibit_fiber(std::string_view a, std::string_view b, unsigned channel = 0);
    void disinhibit_fiber(std::string_view a, std::string_view b, unsigned channel = 0);
    bool area_inhibited(std::string_view area) const;
    bool area_inhibited(std::string_view area, unsigned channel) const;
    bool fiber_inhibited(std::string_view a, std::string_view b) const;

    /// A fixed area keeps firing its current winners instead of recomputing
    /// them. Synapses into it from other areas still learn.
    void set_fixed(std::string_view area, bool fixed);
    bool fixed(std::string_view area) const;

    /// Rate used for synapses from `from` into `to`; the target area's beta
    /// unless overridden.
    void set_plasticity(std::string_view from, std::string_view to, double beta);
    double plasticity(std::string_view from, std::string_view to) const;

    void step();
    void project_star(unsigned rounds = kDefaultRounds);

    /// Records the current inhibition flags as the pattern clear_slate()
    /// returns to.
    void save_inhibition_pattern();
    /// Drops all winners and fixed flags and restores the saved inhibition
    /// pattern. Weights are left alone.
    void clear_slate();

    /// Top-k response of `to` when `firing` alone fires through the synapses
    /// from its area into `to`. With rounds > 1 the response also fires back
    /// into `to` through its recurrent synapses on each later round, which
    /// completes a partially recalled assembly. Ignores inhibition and learns
    /// nothing.
    Assembly probe(const Assembly& firing, std::string_view to, unsigned rounds = 1) const;

    std::vector<Synapse> out_synapses(std::string_view from_area, Neuron from,
                                      std::string_view to_area) const;
    /// Weight of from->to, 0 when the synapse does not exist.
    double weight(std::string_view from_area, Neuron from, std::string_view to_area, Neuron to) const;

    const StepCounters& counters() const noexcept { return counters_; }

    /// Winners, flags and every potentiated synapse (weight != 1).
    nlohmann::json snapshot() const;

private:
    struct OutList {
        std::vector<Neuron> targets;
        std::vector<double> weights;
        bool ready = false;
    };

    struct Connection {
        std::size_t from = 0;
        std::size_t to = 0;
        std::uint64_t stream = 0;
        double beta = -1.0;  // < 0: the target area's beta
        std::vector<OutList> lists;
    };

    struct AreaState {
        AreaParams params;
        std::vector<Neuron> winners;
        std::uint32_t inhibit_mask = 1;
        std::uint32_t saved_mask = 1;
        bool fixed = false;
    };

    struct FiberState {
        std::size_t a = 0;
        std::size_t b = 0;
        std::uint32_t inhibit_mask = 1;
        std::uint32_t saved_mask = 1;
    };

    Brain() = default;
    void init_topology(std::vector<AreaParams> areas,
                       const std::vector<std::pair<std::string, std::string>>& fibers);

    std::size_t area_index(std::string_view name) const;
    std::size_t fiber_index(std::string_view a, std::string_view b) const;
    long fiber_between(std::size_t a, std::size_t b) const;
    const Connection& connection(std::size_t from, std::size_t to) const;
    Connection& connection(std::size_t from, std::size_t to);

    void sample(const Connection& conn, Neuron from, OutList& out) const;
    OutList& materialize(Connection& conn, Neuron from);

    std::vector<AreaState> areas_;
    std::vector<FiberState> fibers_;
    std::vector<Connection> connections_;
    std::vector<long> connection_of_;  // [from * areas + to] -> index or -1
    double p_ = 0.05;
    std::uint64_t seed_ = 0;
    bool explicit_ = false;
    StepCounters counters_;
    std::vector<double> scratch_;
};

/// Top-k of `input` by value, ties to the lowest index. Entries with zero
/// input only pad the set when fewer than k are positive; all-zero input
/// selects nothing. Result is sorted ascending.
std::vector<Neuron> select_top_k(std::span<const double> input, std::uint32_t k);

}  // namespace assemblies
