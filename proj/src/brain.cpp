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

#include "assemblies/brain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "assemblies/error.hpp"

namespace assemblies {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on (0, 1].
double unit_interval(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

std::uint32_t channel_bit(unsigned channel) {
    if (channel >= 32) {
        fail(ErrorCode::InvalidArgument, "inhibition channel must be < 32");
    }
    return 1U << channel;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

BrainConfig BrainConfig::from_json(const nlohmann::json& doc) {
    BrainConfig cfg;
    try {
        for (const auto& a : doc.at("areas")) {
            AreaParams area;
            area.name = a.at("name").get<std::string>();
            area.n = a.value("n", area.n);
            area.k = a.value("k", area.k);
            area.beta = a.value("beta", area.beta);
            cfg.areas.push_back(std::move(area));
        }
        if (doc.contains("fibers")) {
            for (const auto& f : doc.at("fibers")) {
                cfg.fibers.emplace_back(f.at(0).get<std::string>(), f.at(1).get<std::string>());
            }
        }
        if (doc.contains("plasticity")) {
            for (const auto& o : doc.at("plasticity")) {
                cfg.plasticity.push_back({o.at("from").get<std::string>(), o.at("to").get<std::string>(),
                                          o.at("beta").get<double>()});
            }
        }
        cfg.p = doc.value("p", cfg.p);
        cfg.seed = doc.value("seed", cfg.seed);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("brain config: ") + e.what());
    }
    return cfg;
}

nlohmann::json BrainConfig::to_json() const {
    nlohmann::json doc;
    doc["areas"] = nlohmann::json::array();
    for (const auto& a : areas) {
        doc["areas"].push_back({{"name", a.name}, {"n", a.n}, {"k", a.k}, {"beta", a.beta}});
    }
    doc["fibers"] = nlohmann::json::array();
    for (const auto& [a, b] : fibers) {
        doc["fibers"].push_back({a, b});
    }
    if (!plasticity.empty()) {
        doc["plasticity"] = nlohmann::json::array();
        for (const auto& o : plasticity) {
            doc["plasticity"].push_back({{"from", o.from}, {"to", o.to}, {"beta", o.beta}});
        }
    }
    doc["p"] = p;
    doc["seed"] = seed;
    return doc;
}

// ---------------------------------------------------------------------------
// Assembly

Assembly::Assembly(std::string area, std::vector<Neuron> neurons)
    : area_(std::move(area)), neurons_(std::move(neurons)) {
    std::sort(neurons_.begin(), neurons_.end());
    neurons_.erase(std::unique(neurons_.begin(), neurons_.end()), neurons_.end());
}

bool Assembly::contains(Neuron n) const {
    return std::binary_search(neurons_.begin(), neurons_.end(), n);
}

std::size_t overlap(const Assembly& a, const Assembly& b) {
    std::size_t count = 0;
    auto x = a.neurons();
    auto y = b.neurons();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::vector<Neuron> select_top_k(std::span<const double> input, std::uint32_t k) {
    std::vector<Neuron> positive;
    for (Neuron i = 0; i < input.size(); ++i) {
        if (input[i] > 0.0) {
            positive.push_back(i);
        }
    }
    if (positive.empty()) {
        return {};
    }
    auto better = [&](Neuron a, Neuron b) {
        return input[a] != input[b] ? input[a] > input[b] : a < b;
    };
    std::vector<Neuron> chosen;
    if (positive.size() >= k) {
        std::nth_element(positive.begin(), positive.begin() + (k - 1), positive.end(), better);
        chosen.assign(positive.begin(), positive.begin() + k);
    } else {
        chosen = positive;
        for (Neuron i = 0; i < input.size() && chosen.size() < k; ++i) {
            if (input[i] <= 0.0) {
                chosen.push_back(i);
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// ---------------------------------------------------------------------------
// Construction

void Brain::init_topology(std::vector<AreaParams> areas,
                          const std::vector<std::pair<std::string, std::string>>& fibers) {
    std::set<std::string> names;
    for (auto& a : areas) {
        if (a.name.empty()) {
            fail(ErrorCode::InvalidArgument, "area name must not be empty");
        }
        if (!names.insert(a.name).second) {
            fail(ErrorCode::InvalidArgument, "duplicate area name '" + a.name + "'");
        }
        if (a.n == 0 || a.k == 0 || a.k > a.n) {
            fail(ErrorCode::InvalidArgument, "area '" + a.name + "' needs 0 < k <= n");
        }
        if (!(a.beta >= 0.0)) {
            fail(ErrorCode::InvalidArgument, "area '" + a.name + "' needs beta >= 0");
        }
        AreaState st;
        st.params = std::move(a);
        areas_.push_back(std::move(st));
    }
    const std::size_t count = areas_.size();
    connection_of_.assign(count * count, -1);

    auto add_connection = [&](std::size_t from, std::size_t to) {
        Connection c;
        c.from = from;
        c.to = to;
        c.stream = splitmix64(seed_ ^ splitmix64((from << 20) ^ (to << 4) ^ 0x5bd1e995ULL));
        c.lists.resize(areas_[from].params.n);
        connection_of_[from * count + to] = static_cast<long>(connections_.size());
        connections_.push_back(std::move(c));
    };
    for (std::size_t a = 0; a < count; ++a) {
        add_connection(a, a);
    }
    for (const auto& [x, y] : fibers) {
        const std::size_t a = area_index(x);
        const std::size_t b = area_index(y);
        if (a == b) {
            fail(ErrorCode::InvalidArgument, "fiber endpoints must differ: '" + x + "'");
        }
        if (fiber_between(a, b) >= 0) {
            fail(ErrorCode::InvalidArgument, "duplicate fiber " + x + "-" + y);
        }
        fibers_.push_back(FiberState{a, b});
        add_connection(a, b);
        add_connection(b, a);
    }
}

Brain Brain::build(const BrainConfig& config) {
    if (!(config.p > 0.0 && config.p <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "p must lie in (0, 1]");
    }
    Brain brain;
    brain.p_ = config.p;
    brain.seed_ = config.seed;
    brain.init_topology(config.areas, config.fibers);
    for (const auto& o : config.plasticity) {
        brain.set_plasticity(o.from, o.to, o.beta);
    }
    return brain;
}

Brain Brain::with_edges(std::vector<AreaParams> areas,
                        std::vector<std::pair<std::string, std::string>> fibers,
                        std::span<const ExplicitEdge> edges) {
    Brain brain;
    brain.explicit_ = true;
    brain.p_ = 1.0;
    brain.init_topology(std::move(areas), fibers);
    for (auto& c : brain.connections_) {
        for (auto& l : c.lists) {
            l.ready = true;
        }
    }
    for (const auto& e : edges) {
        const std::size_t from = brain.area_index(e.from_area);
        const std::size_t to = brain.area_index(e.to_area);
        if (from != to && brain.fiber_between(from, to) < 0) {
            fail(ErrorCode::InvalidArgument,
                 "edge " + e.from_area + "->" + e.to_area + " has no fiber");
        }
        if (e.from >= brain.areas_[from].params.n || e.to >= brain.areas_[to].params.n) {
            fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
        }
        if (from == to && e.from == e.to) {
            fail(ErrorCode::InvalidArgument, "self-loops are not allowed");
        }
        if (!(e.weight > 0.0)) {
            fail(ErrorCode::InvalidArgument, "edge weights must be positive");
        }
        auto& list = brain.connection(from, to).lists[e.from];
        if (std::find(list.targets.begin(), list.targets.end(), e.to) != list.targets.end()) {
            fail(ErrorCode::InvalidArgument, "duplicate edge");
        }
        list.targets.push_back(e.to);
        list.weights.push_back(e.weight);
    }
    return brain;
}

// ---------------------------------------------------------------------------
// Lookup

std::size_t Brain::area_index(std::string_view name) const {
    for (std::size_t i = 0; i < areas_.size(); ++i) {
        if (areas_[i].params.name == name) {
            return i;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown area '" + std::string(name) + "'");
}

long Brain::fiber_between(std::size_t a, std::size_t b) const {
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
        const auto& f = fibers_[i];
        if ((f.a == a && f.b == b) || (f.a == b && f.b == a)) {
            return static_cast<long>(i);
        }
    }
    return -1;
}

std::size_t Brain::fiber_index(std::string_view a, std::string_view b) const {
    const long idx = fiber_between(area_index(a), area_index(b));
    if (idx < 0) {
        fail(ErrorCode::InvalidArgument, "unknown fiber " + std::string(a) + "-" + std::string(b));
    }
    return static_cast<std::size_t>(idx);
}

const Brain::Connection& Brain::connection(std::size_t from, std::size_t to) const {
    const long idx = connection_of_[from * areas_.size() + to];
    if (idx < 0) {
        fail(ErrorCode::InvalidArgument,
             "no synapses from " + areas_[from].params.name + " to " + areas_[to].params.name);
    }
    return connections_[static_cast<std::size_t>(idx)];
}

Brain::Connection& Brain::connection(std::size_t from, std::size_t to) {
    return const_cast<Connection&>(std::as_const(*this).connection(from, to));
}

bool Brain::has_area(std::string_view name) const {
    return std::any_of(areas_.begin(), areas_.end(),
                       [&](const AreaState& a) { return a.params.name == name; });
}

bool Brain::has_fiber(std::string_view a, std::string_view b) const {
    if (!has_area(a) || !has_area(b)) {
        return false;
    }
    return fiber_between(area_index(a), area_index(b)) >= 0;
}

const AreaParams& Brain::params(std::string_view area) const {
    return areas_[area_index(area)].params;
}

std::vector<std::string> Brain::area_names() const {
    std::vector<std::string> out;
    for (const auto& a : areas_) {
        out.push_back(a.params.name);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> Brain::fiber_names() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fibers_) {
        out.emplace_back(areas_[f.a].params.name, areas_[f.b].params.name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampling

void Brain::sample(const Connection& conn, Neuron from, OutList& out) const {
    out.targets.clear();
    out.weights.clear();
    const std::uint32_t n = areas_[conn.to].params.n;
    const bool recurrent = conn.from == conn.to;
    if (p_ >= 1.0) {
        for (Neuron j = 0; j < n; ++j) {
            if (!(recurrent && j == from)) {
                out.targets.push_back(j);
            }
        }
    } else {
        std::mt19937_64 rng(splitmix64(conn.stream ^ splitmix64(from)));
        const double log_q = std::log1p(-p_);
        // Geometric gaps between successive synapses.
        double j = std::floor(std::log(unit_interval(rng)) / log_q);
        while (j < n) {
            const auto target = static_cast<Neuron>(j);
            if (!(recurrent && target == from)) {
                out.targets.push_back(target);
            }
            j += 1.0 + std::floor(std::log(unit_interval(rng)) / log_q);
        }
    }
    out.weights.assign(out.targets.size(), 1.0);
}

Brain::OutList& Brain::materialize(Connection& conn, Neuron from) {
    OutList& list = conn.lists[from];
    if (!list.ready) {
        sample(conn, from, list);
        list.ready = true;
    }
    return list;
}

std::vector<Synapse> Brain::out_synapses(std::string_view from_area, Neuron from,
                                         std::string_view to_area) const {
    const std::size_t a = area_index(from_area);
    const Connection& conn = connection(a, area_index(to_area));
    if (from >= areas_[a].params.n) {
        fail(ErrorCode::InvalidArgument, "neuron index out of range");
    }
    OutList tmp;
    const OutList* list = &conn.lists[from];
    if (!list->ready) {
        sample(conn, from, tmp);
        list = &tmp;
    }
    std::vector<Synapse> out;
    out.reserve(list->targets.size());
    for (std::size_t i = 0; i < list->targets.size(); ++i) {
        out.push_back({list->targets[i], list->weights[i]});
    }
    return out;
}

double Brain::weight(std::string_view from_area, Neuron from, std::string_view to_area,
                     Neuron to) const {
    for (const auto& s : out_synapses(from_area, from, to_area)) {
        if (s.target == to) {
            return s.weight;
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Control

void Brain::set_winners(const Assembly& assembly) {
    auto& area = areas_[area_index(assembly.area())];
    if (assembly.size() != area.params.k) {
        fail(ErrorCode::InvalidArgument, "assembly in '" + assembly.area() + "' must have exactly " +
                                             std::to_string(area.params.k) + " neurons");
    }
    if (assembly.neurons().back() >= area.params.n) {
        fail(ErrorCode::InvalidArgument, "neuron index out of range in '" + assembly.area() + "'");
    }
    area.winners.assign(assembly.neurons().begin(), assembly.neurons().end());
}

Assembly Brain::winners(std::string_view area) const {
    const auto& a = areas_[area_index(area)];
    return Assembly(a.params.name, a.winners);
}

void Brain::clear_winners(std::string_view area) { areas_[area_index(area)].winners.clear(); }

void Brain::inhibit_area(std::string_view area, unsigned channel) {
    areas_[area_index(area)].inhibit_mask |= channel_bit(channel);
}

void Brain::disinhibit_area(std::string_view area, unsigned channel) {
    areas_[area_index(area)].inhibit_mask &= ~channel_bit(channel);
}

void Brain::inhibit_fiber(std::string_view a, std::string_view b, unsigned channel) {
    fibers_[fiber_index(a, b)].inhibit_mask |= channel_bit(channel);
}

void Brain::disinhibit_fiber(std::string_view a, std::string_view b, unsigned channel) {
    fibers_[fiber_index(a, b)].inhibit_mask &= ~channel_bit(channel);
}

bool Brain::area_inhibited(std::string_view area) const {
    return areas_[area_index(area)].inhibit_mask != 0;
}

bool Brain::area_inhibited(std::string_view area, unsigned channel) const {
    return (areas_[area_index(area)].inhibit_mask & channel_bit(channel)) != 0;
}

bool Brain::fiber_inhibited(std::string_view a, std::string_view b) const {
    return fibers_[fiber_index(a, b)].inhibit_mask != 0;
}

void Brain::set_plasticity(std::string_view from, std::string_view to, double beta) {
    if (!(beta >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "plasticity rate must be non-negative");
    }
    connection(area_index(from), area_index(to)).beta = beta;
}

double Brain::plasticity(std::string_view from, std::string_view to) const {
    const std::size_t b = area_index(to);
    const double beta = connection(area_index(from), b).beta;
    return beta < 0.0 ? areas_[b].params.beta : beta;
}

void Brain::set_fixed(std::string_view area, bool fixed) { areas_[area_index(area)].fixed = fixed; }

bool Brain::fixed(std::string_view area) const { return areas_[area_index(area)].fixed; }

void Brain::save_inhibition_pattern() {
    for (auto& a : areas_) {
        a.saved_mask = a.inhibit_mask;
    }
    for (auto& f : fibers_) {
        f.saved_mask = f.inhibit_mask;
    }
}

void Brain::clear_slate() {
    for (auto& a : areas_) {
        a.winners.clear();
        a.fixed = false;
        a.inhibit_mask = a.saved_mask;
    }
    for (auto& f : fibers_) {
        f.inhibit_mask = f.saved_mask;
    }
}

// ---------------------------------------------------------------------------
// Dynamics

void Brain::step() {
    const std::size_t count = areas_.size();
    std::vector<char> fires(count);
    for (std::size_t a = 0; a < count; ++a) {
        fires[a] = areas_[a].inhibit_mask == 0 && !areas_[a].winners.empty();
    }

    // Sources feeding each target this round, read from the time-t snapshot.
    std::vector<std::vector<std::size_t>> sources(count);
    std::vector<std::vector<Neuron>> next(count);
    for (std::size_t b = 0; b < count; ++b) {
        auto& target = areas_[b];
        if (target.inhibit_mask != 0) {
            next[b] = target.winners;
            continue;
        }
        for (std::size_t a = 0; a < count; ++a) {
            if (!fires[a]) {
                continue;
            }
            if (a == b) {
                if (!target.fixed) {
                    sources[b].push_back(a);
                }
                continue;
            }
            const long f = fiber_between(a, b);
            if (f >= 0 && fibers_[static_cast<std::size_t>(f)].inhibit_mask == 0) {
                sources[b].push_back(a);
            }
        }
        if (target.fixed) {
            next[b] = target.winners;
            continue;
        }
        if (sources[b].empty()) {
            continue;
        }
        scratch_.assign(target.params.n, 0.0);
        for (std::size_t a : sources[b]) {
            Connection& conn = connection(a, b);
            for (Neuron i : areas_[a].winners) {
                const OutList& list = materialize(conn, i);
                for (std::size_t e = 0; e < list.targets.size(); ++e) {
                    scratch_[list.targets[e]] += list.weights[e];
                }
                counters_.synaptic_ops += list.targets.size();
            }
        }
        next[b] = select_top_k(scratch_, target.params.k);
    }

    std::vector<char> in_next;
    for (std::size_t b = 0; b < count; ++b) {
        if (areas_[b].inhibit_mask != 0 || next[b].empty() || sources[b].empty()) {
            continue;
        }
        in_next.assign(areas_[b].params.n, 0);
        for (Neuron j : next[b]) {
            in_next[j] = 1;
        }
        for (std::size_t a : sources[b]) {
            Connection& conn = connection(a, b);
            const double factor = 1.0 + (conn.beta < 0.0 ? areas_[b].params.beta : conn.beta);
            for (Neuron i : areas_[a].winners) {
                OutList& list = materialize(conn, i);
                for (std::size_t e = 0; e < list.targets.size(); ++e) {
                    if (in_next[list.targets[e]]) {
                        list.weights[e] *= factor;
                    }
                }
            }
        }
    }

    for (std::size_t b = 0; b < count; ++b) {
        areas_[b].winners = std::move(next[b]);
    }
    ++counters_.rounds;
}

void Brain::project_star(unsigned rounds) {
    if (rounds == 0) {
        fail(ErrorCode::InvalidArgument, "project* needs at least one round");
    }
    for (unsigned r = 0; r < rounds; ++r) {
        step();
    }
}

Assembly Brain::probe(const Assembly& firing, std::string_view to, unsigned rounds) const {
    if (rounds == 0) {
        fail(ErrorCode::InvalidArgument, "probe needs at least one round");
    }
    const std::size_t a = area_index(firing.area());
    const std::size_t b = area_index(to);
    OutList tmp;
    auto accumulate = [&](const Connection& conn, std::span<const Neuron> from, std::vector<double>& input) {
        for (Neuron i : from) {
            if (i >= areas_[conn.from].params.n) {
                fail(ErrorCode::InvalidArgument, "neuron index out of range");
            }
            const OutList* list = &conn.lists[i];
            if (!list->ready) {
                sample(conn, i, tmp);
                list = &tmp;
            }
            for (std::size_t e = 0; e < list->targets.size(); ++e) {
                input[list->targets[e]] += list->weights[e];
            }
        }
    };
    std::vector<double> feed(areas_[b].params.n, 0.0);
    accumulate(connection(a, b), firing.neurons(), feed);
    std::vector<Neuron> winners = select_top_k(feed, areas_[b].params.k);
    for (unsigned r = 1; r < rounds && a != b; ++r) {
        std::vector<double> input = feed;
        accumulate(connection(b, b), winners, input);
        winners = select_top_k(input, areas_[b].params.k);
    }
    return Assembly(std::string(to), std::move(winners));
}

nlohmann::json Brain::snapshot() const {
    nlohmann::json doc;
    doc["p"] = p_;
    doc["seed"] = seed_;
    doc["areas"] = nlohmann::json::array();
    for (const auto& a : areas_) {
        doc["areas"].push_back({{"name", a.params.name},
                                {"n", a.params.n},
                                {"k", a.params.k},
                                {"beta", a.params.beta},
                                {"inhibited", a.inhibit_mask != 0},
                                {"fixed", a.fixed},
                                {"winners", a.winners}});
    }
    doc["fibers"] = nlohmann::json::array();
    for (const auto& f : fibers_) {
        doc["fibers"].push_back({areas_[f.a].params.name, areas_[f.b].params.name});
    }
    doc["inhibited_fibers"] = nlohmann::json::array();
    for (const auto& f : fibers_) {
        if (f.inhibit_mask != 0) {
            doc["inhibited_fibers"].push_back({areas_[f.a].params.name, areas_[f.b].params.name});
        }
    }
    auto& weights = doc["weights"] = nlohmann::json::array();
    for (const auto& c : connections_) {
        for (Neuron i = 0; i < c.lists.size(); ++i) {
            const auto& l = c.lists[i];
            for (std::size_t e = 0; e < l.targets.size(); ++e) {
                if (l.weights[e] != 1.0) {
                    weights.push_back({areas_[c.from].params.name, i, areas_[c.to].params.name,
                                       l.targets[e], l.weights[e]});
                }
            }
        }
    }
    return doc;
}

}  // namespace assemblies
