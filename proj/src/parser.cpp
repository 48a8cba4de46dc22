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

#include "assemblies/parser.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <set>

#include "assemblies/error.hpp"
#include "assemblies/symbols.hpp"

namespace assemblies {

namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* kLex = "LEX";
constexpr const char* kDs = "DS";
constexpr const char* kVerb = "VERB";
constexpr const char* kVp = "VP";
constexpr const char* kS = "S";
// VP and S sit out the dependency projection on this channel, so constituency
// mode leaves the role assemblies exactly as dependency-only mode forms them.
// Lexicon rules use the low channels.
constexpr unsigned kConstituencyChannel = 31;
// Role areas whose fibers feed the constituency areas.
constexpr const char* kConstituentSources[] = {"SUBJ", "VERB", "OBJ"};

// Areas that may hold a signature and therefore have a DS fiber.
constexpr std::string_view kSignatureAreas[] = {"SUBJ", "OBJ", "PREP_P", "VERB"};

bool is_signature_area(std::string_view area) {
    return std::find(std::begin(kSignatureAreas), std::end(kSignatureAreas), area) !=
           std::end(kSignatureAreas);
}

// Areas a readout fires into from a node in the given area.
std::vector<std::string_view> readout_targets(std::string_view area) {
    if (area == "VERB") {
        return {"SUBJ", "OBJ", "ADV", "PREP"};
    }
    if (area == "SUBJ" || area == "OBJ") {
        return {"DET", "ADJ", "PREP"};
    }
    if (area == "PREP") {
        return {"PREP_P"};
    }
    if (area == "PREP_P") {
        return {"DET", "ADJ"};
    }
    return {};
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CounterDelta {
    const Brain& brain;
    StepCounters before;
    Clock::time_point start = Clock::now();

    explicit CounterDelta(const Brain& b) : brain(b), before(b.counters()) {}

    double finish_into(PhaseCounters& phase) const {
        const double s = seconds_since(start);
        phase.rounds += brain.counters().rounds - before.rounds;
        phase.synaptic_ops += brain.counters().synaptic_ops - before.synaptic_ops;
        phase.seconds += s;
        ++phase.words;
        return s;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Config

void ParserConfig::validate() const {
    if (rounds == 0 || readout_rounds == 0) {
        fail(ErrorCode::InvalidArgument, "rounds and readout_rounds must be at least 1");
    }
    if (k == 0 || k > n) {
        fail(ErrorCode::InvalidArgument, "need 0 < k <= n");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "p must lie in (0, 1]");
    }
    if (!(beta >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "beta must be non-negative");
    }
    for (const auto& b : {recurrent_beta, lex_beta, interarea_beta}) {
        if (b && !(*b >= 0.0)) {
            fail(ErrorCode::InvalidArgument, "plasticity rates must be non-negative");
        }
    }
    if (!(readout_threshold > 0.0 && readout_threshold <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "readout_threshold must lie in (0, 1]");
    }
}

BrainConfig ParserConfig::brain_config() const {
    validate();
    BrainConfig cfg;
    cfg.p = p;
    cfg.seed = seed;
    std::vector<RoleArea> areas{RoleArea::LEX, RoleArea::SUBJ, RoleArea::VERB,
                                RoleArea::OBJ, RoleArea::DET,  RoleArea::ADJ,
                                RoleArea::ADV, RoleArea::PREP, RoleArea::PREP_P};
    if (embedding) {
        areas.push_back(RoleArea::DS);
    }
    if (constituency) {
        areas.push_back(RoleArea::VP);
        areas.push_back(RoleArea::S);
    }
    for (RoleArea a : areas) {
        cfg.areas.push_back({std::string(to_string(a)), n, k, beta});
    }
    auto add = [&](std::span<const std::pair<RoleArea, RoleArea>> fibers) {
        for (const auto& [a, b] : fibers) {
            cfg.fibers.emplace_back(std::string(to_string(a)), std::string(to_string(b)));
        }
    };
    add(parser_fibers());
    if (embedding) {
        add(ds_fibers());
    }
    if (constituency) {
        add(constituency_fibers());
    }
    if (recurrent_beta) {
        for (const auto& a : cfg.areas) {
            cfg.plasticity.push_back({a.name, a.name, *recurrent_beta});
        }
    }
    for (const auto& [a, b] : cfg.fibers) {
        const auto& rate = (a == "LEX" || b == "LEX") ? lex_beta : interarea_beta;
        if (rate) {
            cfg.plasticity.push_back({a, b, *rate});
            cfg.plasticity.push_back({b, a, *rate});
        }
    }
    return cfg;
}

LexAssemblyParams ParserConfig::lex_params() const { return {n, k, seed}; }

ParserConfig ParserConfig::from_json(const nlohmann::json& doc) {
    ParserConfig cfg;
    try {
        cfg.constituency = doc.value("constituency", cfg.constituency);
        cfg.embedding = doc.value("embedding", cfg.embedding);
        cfg.rounds = doc.value("rounds", cfg.rounds);
        cfg.n = doc.value("n", cfg.n);
        cfg.k = doc.value("k", cfg.k);
        cfg.p = doc.value("p", cfg.p);
        cfg.beta = doc.value("beta", cfg.beta);
        cfg.seed = doc.value("seed", cfg.seed);
        auto rate = [&](const char* key, std::optional<double>& field) {
            if (doc.contains(key)) {
                field = doc.at(key).is_null() ? std::nullopt : std::optional(doc.at(key).get<double>());
            }
        };
        rate("recurrent_beta", cfg.recurrent_beta);
        rate("lex_beta", cfg.lex_beta);
        rate("interarea_beta", cfg.interarea_beta);
        cfg.readout_threshold = doc.value("readout_threshold", cfg.readout_threshold);
        cfg.readout_rounds = doc.value("readout_rounds", cfg.readout_rounds);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("parser config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json ParserConfig::to_json() const {
    nlohmann::json doc{{"constituency", constituency}, {"embedding", embedding}, {"rounds", rounds},
                       {"n", n},  {"k", k},  {"p", p},  {"beta", beta},  {"seed", seed},
                       {"readout_threshold", readout_threshold}, {"readout_rounds", readout_rounds}};
    doc["recurrent_beta"] = recurrent_beta ? nlohmann::json(*recurrent_beta) : nlohmann::json(nullptr);
    doc["lex_beta"] = lex_beta ? nlohmann::json(*lex_beta) : nlohmann::json(nullptr);
    doc["interarea_beta"] = interarea_beta ? nlohmann::json(*interarea_beta) : nlohmann::json(nullptr);
    return doc;
}

// ---------------------------------------------------------------------------
// Segmentation

nlohmann::json Segmentation::to_json() const {
    return {{"words", words}, {"depth", depth}, {"clauses", clauses}};
}

Segmentation segment(const std::vector<std::string>& tokens, const Lexicon& lexicon, bool embedding) {
    if (tokens.empty()) {
        fail(ErrorCode::InvalidArgument, "empty sentence");
    }
    struct Open {
        std::size_t depth;
        bool has_verb;
    };
    enum class Pending { None, Open, Close };

    Segmentation seg;
    seg.clauses.emplace_back();
    std::vector<Open> stack{{0, false}};
    Pending pending = Pending::None;

    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const std::string& tok = tokens[t];
        if (tok == ",") {
            if (!embedding) {
                fail(ErrorCode::Structure, "commas mark clauses and need embedding mode");
            }
            if (seg.words.empty()) {
                fail(ErrorCode::Structure, "sentence starts with a comma");
            }
            if (pending != Pending::None) {
                fail(ErrorCode::Structure, "two commas in a row");
            }
            if (t + 1 == tokens.size()) {
                fail(ErrorCode::Structure, "sentence ends with a comma");
            }
            if (tokens[t + 1] != ",") {
                const auto& next = lexicon.action_set(tokens[t + 1]);
                pending = next.clause_marker == ClauseMarker::OpensDependentClause ? Pending::Open
                                                                                   : Pending::Close;
            } else {
                pending = Pending::Open;  // rejected on the next token
            }
            continue;
        }

        const WordEntry& entry = lexicon.action_set(tok);
        const std::size_t i = seg.words.size();
        seg.words.push_back(tok);
        seg.depth.push_back(0);
        seg.opens_after.push_back(false);
        seg.begins_clause.push_back(false);
        seg.resumes.emplace_back();

        const bool marker = embedding && entry.clause_marker == ClauseMarker::OpensDependentClause;
        if (pending == Pending::Close) {
            if (stack.size() == 1) {
                fail(ErrorCode::Structure,
                     "comma before '" + tok + "' closes a clause, but no clause is open");
            }
            // Return to the deepest enclosing clause still waiting for its
            // verb; if all have one, go up a single level.
            std::size_t target = stack.size() - 2;
            for (std::size_t s = stack.size() - 1; s-- > 0;) {
                if (!stack[s].has_verb) {
                    target = s;
                    break;
                }
            }
            stack.resize(target + 1);
            seg.resumes[i] = target;
        } else if (marker) {
            if (i == 0) {
                fail(ErrorCode::Structure, "clause marker '" + tok +
                                               "' starts the sentence; the outer clause needs a "
                                               "word to link from");
            }
            const std::size_t depth = stack.size();
            if (depth < seg.clauses.size()) {
                fail(ErrorCode::Structure,
                     "second clause at depth " + std::to_string(depth) + " (at '" + tok + "')");
            }
            stack.push_back({depth, false});
            seg.clauses.emplace_back();
            seg.begins_clause[i] = true;
            seg.opens_after[i - 1] = true;
        }
        pending = Pending::None;

        if (embedding && entry.is_verb()) {
            if (stack.back().has_verb) {
                fail(ErrorCode::Structure, "clause at depth " + std::to_string(stack.back().depth) +
                                               " has a second verb '" + tok + "'");
            }
            stack.back().has_verb = true;
        }
        seg.depth[i] = stack.back().depth;
        seg.clauses[seg.depth[i]].push_back(i);
    }
    // A clause still open at the end can no longer receive its verb.
    if (seg.clauses.size() > 1) {
        for (const auto& open : stack) {
            if (!open.has_verb) {
                fail(ErrorCode::Structure,
                     "clause at depth " + std::to_string(open.depth) + " ends without a verb");
            }
        }
    }
    return seg;
}

// ---------------------------------------------------------------------------
// Records

std::string WordRecord::area() const { return assemblies.empty() ? std::string() : assemblies.front().area(); }

const Assembly* WordRecord::in(std::string_view area) const {
    for (const auto& a : assemblies) {
        if (a.area() == area) {
            return &a;
        }
    }
    return nullptr;
}

nlohmann::json PhaseCounters::to_json() const {
    return {{"words", words}, {"rounds", rounds}, {"synaptic_ops", synaptic_ops}, {"seconds", seconds}};
}

nlohmann::json ParseRecord::to_json() const {
    nlohmann::json doc;
    doc["config"] = config.to_json();
    doc["words"] = nlohmann::json::array();
    for (const auto& w : words) {
        nlohmann::json areas = nlohmann::json::array();
        for (const auto& a : w.assemblies) {
            areas.push_back(a.area());
        }
        doc["words"].push_back({{"index", w.index}, {"surface", w.surface}, {"depth", w.depth},
                                {"areas", areas}});
    }
    doc["touched"] = nlohmann::json::array();
    for (const auto& w : touches) {
        doc["touched"].push_back(w.index);
    }
    doc["links"] = nlohmann::json::array();
    for (const auto& l : links) {
        nlohmann::json link{{"depth", l.depth}, {"signature", l.signature}, {"area", l.signature_area}};
        link["inner_verb"] = l.inner_verb ? nlohmann::json(*l.inner_verb) : nlohmann::json(nullptr);
        doc["links"].push_back(std::move(link));
    }
    doc["phases"] = {{"parse", parse.to_json()}, {"touch", touch.to_json()}, {"link", link.to_json()}};
    doc["word_seconds"] = word_seconds;
    doc["inhibition_changes"] = audit.size();
    return doc;
}

// ---------------------------------------------------------------------------
// Session

ParseSession::ParseSession(const Lexicon& lexicon, const ParserConfig& config)
    : lexicon_(lexicon), config_(config), brain_(Brain::build(config.brain_config())) {
    record_.config = config_;
    for (auto& name : brain_.area_names()) {
        if (name != kLex) {
            role_areas_.push_back(name);
        }
    }
    // Parse-start pattern; clear_slate() returns here.
    note(0, "start", "disinhibit_area(LEX)");
    brain_.disinhibit_area(kLex);
    note(0, "start", "disinhibit_area(SUBJ)");
    brain_.disinhibit_area("SUBJ");
    if (config_.constituency) {
        for (const char* area : {kVp, kS}) {
            note(0, "start", std::string("disinhibit_area(") + area + ")");
            brain_.disinhibit_area(area);
        }
        for (const auto& [a, b] : constituency_fibers()) {
            note(0, "start", "disinhibit_fiber(" + std::string(to_string(a)) + "," +
                                 std::string(to_string(b)) + ")");
            brain_.disinhibit_fiber(to_string(a), to_string(b));
        }
    }
    brain_.save_inhibition_pattern();
}

void ParseSession::note(std::size_t word, const char* phase, std::string change) {
    record_.audit.push_back({word, phase, std::move(change)});
}

void ParseSession::apply(const Action& action, std::size_t word, const char* phase) {
    action.apply(brain_);
    note(word, phase, action.describe());
}

void ParseSession::pin_all_except(const std::vector<std::string>& free) {
    for (const auto& name : brain_.area_names()) {
        brain_.set_fixed(name, std::find(free.begin(), free.end(), name) == free.end());
    }
}

WordRecord ParseSession::run_word(std::size_t index, std::string_view surface, std::size_t depth,
                                  Phase phase) {
    const WordEntry& entry = lexicon_.action_set(surface);
    const bool touching = phase == Phase::Touch;
    brain_.set_winners(entry.lex_assembly);
    for (const auto& a : entry.pre_rules) {
        apply(a, index, touching ? "touch-pre" : "pre");
    }

    SignatureLink* link = nullptr;
    if (config_.embedding && depth > 0 && entry.is_verb()) {
        for (auto& l : record_.links) {
            if (l.depth == depth) {
                link = &l;
            }
        }
        if (link == nullptr) {
            fail(ErrorCode::Internal, "no DS link for the clause at depth " + std::to_string(depth));
        }
        note(index, "inner-verb", "disinhibit_area(DS)");
        brain_.disinhibit_area(kDs);
        note(index, "inner-verb", "disinhibit_fiber(DS,VERB)");
        brain_.disinhibit_fiber(kDs, kVerb);
        brain_.set_winners(link->ds);
    }

    std::vector<std::string> free;
    for (const auto& area : role_areas_) {
        if (!brain_.area_inhibited(area) && brain_.has_fiber(kLex, area) &&
            !brain_.fiber_inhibited(kLex, area)) {
            free.push_back(area);
            brain_.clear_winners(area);
        }
    }
    const unsigned rounds = touching ? 1 : config_.rounds;
    if (config_.constituency) {
        brain_.inhibit_area(kVp, kConstituencyChannel);
        brain_.inhibit_area(kS, kConstituencyChannel);
    }
    pin_all_except(free);
    brain_.project_star(rounds);

    WordRecord rec{index, std::string(surface), depth, {}};
    for (const auto& area : free) {
        auto w = brain_.winners(area);
        if (!w.empty()) {
            rec.assemblies.push_back(std::move(w));
        }
    }
    if (config_.constituency) {
        build_constituents(index, rounds);
    }

    for (const auto& a : entry.post_rules) {
        apply(a, index, touching ? "touch-post" : "post");
    }
    if (link != nullptr) {
        note(index, "inner-verb", "inhibit_fiber(DS,VERB)");
        brain_.inhibit_fiber(kDs, kVerb);
        note(index, "inner-verb", "inhibit_area(DS)");
        brain_.inhibit_area(kDs);
        if (!touching) {
            link->inner_verb = index;
        }
    }
    return rec;
}

const WordRecord& ParseSession::parse_word(std::string_view surface, std::size_t depth) {
    const std::size_t index = record_.words.size();
    CounterDelta delta(brain_);
    auto rec = run_word(index, surface, depth, Phase::Parse);
    record_.word_seconds.push_back(delta.finish_into(record_.parse));
    record_.words.push_back(std::move(rec));
    record_.memory.words.push_back({std::string(surface), depth});
    return record_.words.back();
}

const WordRecord& ParseSession::touch_word(std::size_t index) {
    const auto& original = record_.words.at(index);
    CounterDelta delta(brain_);
    auto rec = run_word(index, original.surface, original.depth, Phase::Touch);
    delta.finish_into(record_.touch);
    record_.touches.push_back(std::move(rec));
    return record_.touches.back();
}

void ParseSession::build_constituents(std::size_t index, unsigned rounds) {
    brain_.disinhibit_area(kVp, kConstituencyChannel);
    brain_.disinhibit_area(kS, kConstituencyChannel);
    // Only the constituency fibers carry this phase; the others are held shut
    // so no synapse between role areas learns here.
    std::vector<std::pair<std::string, std::string>> held;
    for (auto& [a, b] : brain_.fiber_names()) {
        if (a != kVp && a != kS && b != kVp && b != kS) {
            brain_.inhibit_fiber(a, b, kConstituencyChannel);
            held.emplace_back(std::move(a), std::move(b));
        }
    }
    // The constituency fibers stay open for the whole parse, so SUBJ, VERB and
    // OBJ fire into them even while the dependency rules hold those areas
    // inhibited.
    std::vector<std::pair<const char*, unsigned>> lifted;
    for (const char* area : kConstituentSources) {
        for (unsigned c = 0; c < kConstituencyChannel; ++c) {
            if (brain_.area_inhibited(area, c)) {
                brain_.disinhibit_area(area, c);
                lifted.emplace_back(area, c);
            }
        }
    }
    // VP forms once there is a verb; before that it would only echo S.
    std::vector<std::string> free{kS};
    if (!brain_.winners(kVerb).empty()) {
        free.emplace_back(kVp);
    }
    pin_all_except(free);
    brain_.project_star(rounds);
    for (const auto& [area, c] : lifted) {
        brain_.inhibit_area(area, c);
    }
    for (const auto& [a, b] : held) {
        brain_.disinhibit_fiber(a, b, kConstituencyChannel);
    }
    if (!lifted.empty()) {
        std::string names;
        for (const auto& [area, c] : lifted) {
            if (names.find(area) == std::string::npos) {
                names += (names.empty() ? "" : ",") + std::string(area);
            }
        }
        note(index, "constituency", "fired inhibited " + names + " into VP/S");
    }
}

const SignatureLink& ParseSession::link_signature(std::size_t index, std::size_t inner_depth) {
    if (!config_.embedding) {
        fail(ErrorCode::InvalidArgument, "signature links need embedding mode");
    }
    const auto& words = record_.words;
    if (index >= words.size()) {
        fail(ErrorCode::InvalidArgument, "link requested for a word not yet parsed");
    }
    std::optional<std::size_t> sig;
    for (std::size_t j = index + 1; j-- > 0;) {
        if (words[j].depth == words[index].depth && is_signature_area(words[j].area())) {
            sig = j;
            break;
        }
    }
    if (!sig) {
        fail(ErrorCode::Structure, "no word before '" + words[index].surface +
                                       "' holds an assembly a dependent clause can link to");
    }
    const std::string area = words[*sig].area();
    CounterDelta delta(brain_);

    for (unsigned c = 0; c < 32; ++c) {
        brain_.disinhibit_area(area, c);
    }
    note(index, "link", "disinhibit_area(" + area + ";all)");
    brain_.set_winners(*words[*sig].in(area));
    note(index, "link", "disinhibit_area(DS)");
    brain_.disinhibit_area(kDs);
    note(index, "link", "disinhibit_fiber(DS," + area + ")");
    brain_.disinhibit_fiber(kDs, area);
    brain_.clear_winners(kDs);
    pin_all_except({kDs});
    brain_.project_star(config_.rounds);

    SignatureLink link{inner_depth, *sig, area, brain_.winners(kDs), std::nullopt};
    note(index, "link", "inhibit_fiber(DS," + area + ")");
    brain_.inhibit_fiber(kDs, area);
    note(index, "link", "inhibit_area(DS)");
    brain_.inhibit_area(kDs);
    delta.finish_into(record_.link);

    if (link.ds.empty()) {
        fail(ErrorCode::Internal, "DS formed no assembly for the link");
    }
    record_.links.push_back(std::move(link));
    return record_.links.back();
}

void ParseSession::clear_slate() {
    note(record_.words.size(), "slate", "clear_slate");
    brain_.clear_slate();
}

ParseRecord ParseSession::finish() {
    if (config_.constituency) {
        record_.final_vp = brain_.winners(kVp);
        record_.final_s = brain_.winners(kS);
    }
    record_.memory.clauses.clear();
    for (std::size_t i = 0; i < record_.memory.words.size(); ++i) {
        const std::size_t d = record_.memory.words[i].depth;
        if (record_.memory.clauses.size() <= d) {
            record_.memory.clauses.resize(d + 1);
        }
        record_.memory.clauses[d].push_back(i);
    }
    record_.brain = std::make_shared<const Brain>(std::move(brain_));
    return std::move(record_);
}

// ---------------------------------------------------------------------------
// Parser

Parser::Parser(const Lexicon& lexicon, ParserConfig config) : lexicon_(lexicon), config_(config) {
    config_.validate();
    const auto& lp = lexicon_.assembly_params();
    if (lp.n != config_.n || lp.k != config_.k) {
        fail(ErrorCode::InvalidArgument, "lexicon assemblies were built for a different LEX size");
    }
}

ParseRecord Parser::parse(std::string_view sentence) const { return parse(tokenize_sentence(sentence)); }

ParseRecord Parser::parse(const std::vector<std::string>& tokens) const {
    Segmentation seg = segment(tokens, lexicon_, config_.embedding);
    ParseSession session(lexicon_, config_);
    for (std::size_t i = 0; i < seg.words.size(); ++i) {
        if (seg.resumes[i]) {
            // Only weights and working memory survive the embedded clause.
            session.clear_slate();
            for (std::size_t y : seg.clauses[*seg.resumes[i]]) {
                if (y < i) {
                    session.touch_word(y);
                }
            }
        }
        if (seg.begins_clause[i]) {
            session.clear_slate();
        }
        session.parse_word(seg.words[i], seg.depth[i]);
        if (seg.opens_after[i]) {
            session.link_signature(i, seg.depth[i] + 1);
        }
    }
    ParseRecord record = session.finish();
    record.segmentation = std::move(seg);
    return record;
}

std::size_t Parser::threshold() const {
    return static_cast<std::size_t>(std::ceil(config_.readout_threshold * config_.k));
}

std::optional<std::string> Parser::identify(const ParseRecord& record, const Assembly& role_assembly) const {
    const Assembly lex = record.brain->probe(role_assembly, kLex);
    std::size_t best = 0;
    std::vector<const std::string*> best_words;
    for (const auto& [surface, entry] : lexicon_.entries()) {
        const std::size_t o = overlap(lex, entry.lex_assembly);
        if (o > best) {
            best = o;
            best_words = {&surface};
        } else if (o == best) {
            best_words.push_back(&surface);
        }
    }
    if (best < threshold()) {
        return std::nullopt;
    }
    if (best_words.size() > 1) {
        fail(ErrorCode::Readout, "LEX readback is ambiguous between '" + *best_words[0] + "' and '" +
                                     *best_words[1] + "'");
    }
    return *best_words.front();
}

namespace {

struct ReadoutProbe {
    const Brain& brain;
    unsigned rounds;
    std::size_t threshold;
};

// Record nearest to `head` among the unclaimed records whose assembly in `area`
// matches the response of `area` to `from`. A record also matches when its own
// assembly projects back onto `from`: a dependent formed before its head was
// pinned while the head settled, so its synapses toward the head are the
// better trained ones. Matches of different words are an ambiguity error.
std::optional<std::size_t> match_record(const ParseRecord& record, const ReadoutProbe& rp,
                                        const Assembly& from, std::string_view area,
                                        std::size_t head, const std::vector<bool>& claimed) {
    const Assembly forward = rp.brain.probe(from, area, rp.rounds);
    std::vector<std::size_t> hits;
    for (const auto& w : record.words) {
        const Assembly* a = w.in(area);
        if (a == nullptr) {
            continue;
        }
        if (overlap(forward, *a) >= rp.threshold ||
            overlap(rp.brain.probe(*a, from.area(), rp.rounds), from) >= rp.threshold) {
            hits.push_back(w.index);
        }
    }
    if (hits.empty()) {
        return std::nullopt;
    }
    for (std::size_t h : hits) {
        if (record.words[h].surface != record.words[hits.front()].surface) {
            fail(ErrorCode::Readout, "ambiguous readout in " + std::string(area) + ": '" +
                                         record.words[hits.front()].surface + "' and '" +
                                         record.words[h].surface + "'");
        }
    }
    std::optional<std::size_t> best;
    auto distance = [&](std::size_t i) { return i > head ? i - head : head - i; };
    for (std::size_t h : hits) {
        if (!claimed[h] && (!best || distance(h) < distance(*best))) {
            best = h;
        }
    }
    return best;
}

}  // namespace

DependencyTree Parser::readout_dependencies(const ParseRecord& record) const {
    const Brain& brain = *record.brain;
    const std::size_t thr = threshold();
    const unsigned rounds = config_.readout_rounds;
    const std::size_t n = record.words.size();

    DependencyTree tree;
    tree.words = record.segmentation.words;
    std::optional<std::size_t> root;
    for (const auto& w : record.words) {
        if (w.depth == 0 && lexicon_.action_set(w.surface).is_verb() && w.in(kVerb) != nullptr) {
            root = w.index;
            break;
        }
    }
    if (!root) {
        fail(ErrorCode::Readout, "no verb assembly at depth 0 to root the tree");
    }
    tree.root = *root;

    const ReadoutProbe rp{brain, rounds, thr};
    std::vector<bool> claimed(n, false);
    std::vector<bool> link_used(record.links.size(), false);
    claimed[*root] = true;

    struct Node {
        std::size_t word;
        std::string area;
        Assembly assembly;
    };
    std::deque<Node> queue{{*root, kVerb, *record.words[*root].in(kVerb)}};

    auto attach = [&](const Node& head, std::size_t dep, std::string_view area, std::string label) {
        const Assembly& stored = *record.words[dep].in(area);
        const auto word = identify(record, stored);
        if (word != record.words[dep].surface) {
            fail(ErrorCode::Readout, "LEX readback of the " + std::string(area) + " assembly of '" +
                                         record.words[dep].surface + "' gives '" +
                                         word.value_or("nothing") + "'");
        }
        claimed[dep] = true;
        tree.edges.push_back({head.word, dep, std::move(label)});
        queue.push_back({dep, std::string(area), stored});
    };

    while (!queue.empty()) {
        const Node node = std::move(queue.front());
        queue.pop_front();
        for (std::string_view target : readout_targets(node.area)) {
            if (!brain.has_area(target)) {
                continue;
            }
            const auto hit = match_record(record, rp, node.assembly, target, node.word, claimed);
            if (hit) {
                attach(node, *hit, target, std::string(target));
            }
        }
        if (!brain.has_area(kDs) || !is_signature_area(node.area)) {
            continue;
        }
        const Assembly ds = brain.probe(node.assembly, kDs, rounds);
        std::optional<std::size_t> link;
        for (std::size_t l = 0; l < record.links.size(); ++l) {
            if (!link_used[l] && overlap(ds, record.links[l].ds) >= thr) {
                if (link) {
                    fail(ErrorCode::Readout, "'" + record.words[node.word].surface +
                                                 "' matches two DS links");
                }
                link = l;
            }
        }
        if (!link) {
            continue;
        }
        const auto verb = match_record(record, rp, record.links[*link].ds, kVerb, node.word, claimed);
        if (verb) {
            link_used[*link] = true;
            attach(node, *verb, kVerb, kDs);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!claimed[i]) {
            fail(ErrorCode::Readout, "word '" + record.words[i].surface + "' is not reached by the readout");
        }
    }
    tree.validate();
    return tree;
}

ConstituencyTree Parser::readout_constituency(const ParseRecord& record) const {
    if (!record.config.constituency) {
        fail(ErrorCode::InvalidArgument, "constituency readout needs a parse in constituency mode");
    }
    if (record.final_s.empty()) {
        fail(ErrorCode::Readout, "S is empty; no complete clause was parsed");
    }
    const Brain& brain = *record.brain;
    const std::size_t thr = threshold();
    const unsigned rounds = config_.readout_rounds;
    const DependencyTree dep = readout_dependencies(record);
    const ReadoutProbe rp{brain, rounds, thr};
    const std::vector<bool> none(record.words.size(), false);

    const auto subject = match_record(record, rp, record.final_s, "SUBJ", dep.root, none);
    if (!subject) {
        fail(ErrorCode::Readout, "S does not reactivate a subject");
    }
    const Assembly vp = brain.probe(record.final_s, "VP", rounds);
    if (overlap(vp, record.final_vp) < thr) {
        fail(ErrorCode::Readout, "S does not reactivate the VP assembly");
    }
    const auto verb = match_record(record, rp, record.final_vp, kVerb, dep.root, none);
    if (!verb || *verb != dep.root) {
        fail(ErrorCode::Readout, "VP does not reactivate the root verb");
    }
    const auto object = match_record(record, rp, record.final_vp, "OBJ", dep.root, none);

    ConstituencyTree tree;
    tree.words = record.segmentation.words;
    tree.subject = dep.subtree(*subject);
    if (object) {
        tree.object = dep.subtree(*object);
    }
    for (std::size_t i : dep.subtree(*verb)) {
        const bool taken = std::binary_search(tree.subject.begin(), tree.subject.end(), i) ||
                           std::binary_search(tree.object.begin(), tree.object.end(), i);
        if (!taken) {
            tree.verb.push_back(i);
        }
    }
    tree.validate();
    return tree;
}

}  // namespace assemblies
