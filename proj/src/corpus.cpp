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

#include "assemblies/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "assemblies/error.hpp"
#include "assemblies/symbols.hpp"

namespace assemblies {

namespace {

std::vector<std::string> tree_words(const std::string& sentence) {
    std::vector<std::string> words;
    for (auto& t : tokenize_sentence(sentence)) {
        if (t != ",") {
            words.push_back(std::move(t));
        }
    }
    return words;
}

void add(PhaseCounters& into, const PhaseCounters& c) {
    into.words += c.words;
    into.rounds += c.rounds;
    into.synaptic_ops += c.synaptic_ops;
    into.seconds += c.seconds;
}

double per(double total, std::uint64_t count) { return count ? total / static_cast<double>(count) : 0.0; }

nlohmann::json edges_json(const std::vector<DependencyEdge>& edges) {
    auto out = nlohmann::json::array();
    for (const auto& e : edges) {
        out.push_back({e.head, e.dependent, e.label});
    }
    return out;
}

CaseResult run_case(const Parser& parser, const CorpusCase& c, std::size_t index) {
    CaseResult r;
    r.index = index;
    r.sentence = c.sentence;
    try {
        const ParseRecord record = parser.parse(c.sentence);
        r.parse = record.parse;
        r.touch = record.touch;
        r.link = record.link;
        r.dependency = parser.readout_dependencies(record);
        if (parser.config().constituency && c.expected_constituency) {
            r.constituency = parser.readout_constituency(record);
            r.constituency_matches = *r.constituency == *c.expected_constituency;
        }
    } catch (const Error& e) {
        r.error = e.what();
        return r;
    }
    auto got = r.dependency->edges;
    auto want = c.expected_dependency.edges;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::back_inserter(r.missing_edges));
    std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(r.extra_edges));
    r.root_matches = r.dependency->root == c.expected_dependency.root;
    r.passed = r.root_matches && r.missing_edges.empty() && r.extra_edges.empty() &&
               r.dependency->words == c.expected_dependency.words && r.constituency_matches;
    return r;
}

}  // namespace

Corpus Corpus::from_json(const nlohmann::json& doc) {
    Corpus corpus;
    try {
        if (doc.contains("mode")) {
            corpus.constituency = doc.at("mode").value("constituency", false);
            corpus.embedding = doc.at("mode").value("embedding", false);
        }
        for (const auto& item : doc.at("cases")) {
            CorpusCase c;
            c.sentence = item.at("sentence").get<std::string>();
            c.words = tree_words(c.sentence);
            c.expected_dependency = DependencyTree::from_json(item.at("expected_dependency"), c.words);
            c.expected_dependency.validate();
            if (item.contains("expected_constituency") && !item.at("expected_constituency").is_null()) {
                c.expected_constituency = ConstituencyTree::from_json(item.at("expected_constituency"), c.words);
                c.expected_constituency->validate();
            }
            if (item.contains("tags")) {
                c.tags = item.at("tags");
            }
            corpus.cases.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("corpus: ") + e.what());
    }
    return corpus;
}

Corpus Corpus::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open corpus '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, "corpus '" + path + "': " + e.what());
    }
    return from_json(doc);
}

nlohmann::json Corpus::to_json() const {
    nlohmann::json doc;
    doc["mode"] = {{"constituency", constituency}, {"embedding", embedding}};
    doc["cases"] = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json item{{"sentence", c.sentence}};
        const auto dep = c.expected_dependency.to_json();
        item["expected_dependency"] = {{"root", dep.at("root")}, {"edges", edges_json(c.expected_dependency.edges)}};
        if (c.expected_constituency) {
            const auto ct = c.expected_constituency;
            item["expected_constituency"] = {{"subject", ct->subject}, {"verb", ct->verb}, {"object", ct->object}};
        }
        item["tags"] = c.tags;
        doc["cases"].push_back(std::move(item));
    }
    return doc;
}

nlohmann::json CaseResult::to_json() const {
    nlohmann::json doc{{"index", index}, {"sentence", sentence}, {"passed", passed}};
    if (!error.empty()) {
        doc["error"] = error;
    }
    if (dependency) {
        doc["dependency"] = dependency->to_json();
    }
    if (constituency) {
        doc["constituency"] = constituency->to_bracketed();
    }
    if (!passed && error.empty()) {
        doc["diff"] = {{"missing_edges", edges_json(missing_edges)},
                       {"extra_edges", edges_json(extra_edges)},
                       {"root_matches", root_matches},
                       {"constituency_matches", constituency_matches}};
    }
    return doc;
}

nlohmann::json RunReport::to_json(bool timing) const {
    nlohmann::json doc{{"config", config.to_json()}, {"cases_total", cases.size()}, {"passed", passed},
                       {"all_passed", all_passed()}};
    auto counters = [&](const PhaseCounters& c) {
        auto j = c.to_json();
        if (timing) {
            j["seconds_per_word"] = per(c.seconds, c.words);
        } else {
            j.erase("seconds");
        }
        return j;
    };
    doc["parse"] = counters(parse);
    doc["touch"] = counters(touch);
    doc["link"] = counters(link);
    if (timing) {
        doc["seconds"] = seconds;
    }
    doc["cases"] = nlohmann::json::array();
    for (const auto& c : cases) {
        doc["cases"].push_back(c.to_json());
    }
    return doc;
}

RunReport run_corpus(const Corpus& corpus, const Lexicon& lexicon, const ParserConfig& config,
                     unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    const Parser parser(lexicon, config);
    RunReport report;
    report.config = config;
    report.cases.resize(corpus.cases.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, corpus.cases.size())));
    // Each case owns its Brain, so workers share only the const lexicon.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < corpus.cases.size(); i = next++) {
            report.cases[i] = run_case(parser, corpus.cases[i], i);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& c : report.cases) {
        report.passed += c.passed ? 1 : 0;
        add(report.parse, c.parse);
        add(report.touch, c.touch);
        add(report.link, c.link);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::json BenchReport::to_json() const {
    return {{"parse_rounds_per_word", parse_rounds_per_word},
            {"touch_rounds_per_word", touch_rounds_per_word},
            {"touch_round_ratio", touch_round_ratio},
            {"rounds_exact", rounds_exact},
            {"parse_seconds_per_word", parse_seconds_per_word},
            {"touch_seconds_per_word", touch_seconds_per_word},
            {"touch_speedup", touch_speedup},
            {"dependency_ops_per_word", dependency_ops_per_word},
            {"constituency_ops_per_word", constituency_ops_per_word},
            {"constituency_more_work", constituency_more_work},
            {"dependency_seconds_per_word", parse_seconds_per_word},
            {"constituency_seconds_per_word", constituency_seconds_per_word},
            {"constituency_slowdown", constituency_slowdown},
            {"dependency_passed", dependency.passed},
            {"constituency_passed", constituency.passed},
            {"cases", dependency.cases.size()},
            {"config", dependency.config.to_json()}};
}

BenchReport run_bench(const Corpus& corpus, const Lexicon& lexicon, const ParserConfig& config, unsigned threads) {
    BenchReport b;
    ParserConfig dep = config;
    dep.constituency = false;
    ParserConfig con = config;
    con.constituency = true;
    b.dependency = run_corpus(corpus, lexicon, dep, threads);
    b.constituency = run_corpus(corpus, lexicon, con, threads);

    const auto& p = b.dependency.parse;
    const auto& t = b.dependency.touch;
    b.parse_rounds_per_word = per(static_cast<double>(p.rounds), p.words);
    b.touch_rounds_per_word = per(static_cast<double>(t.rounds), t.words);
    b.touch_round_ratio = b.touch_rounds_per_word > 0 ? b.parse_rounds_per_word / b.touch_rounds_per_word : 0.0;
    b.parse_seconds_per_word = per(p.seconds, p.words);
    b.touch_seconds_per_word = per(t.seconds, t.words);
    b.touch_speedup = b.touch_seconds_per_word > 0 ? b.parse_seconds_per_word / b.touch_seconds_per_word : 0.0;
    b.rounds_exact = p.words > 0 && p.rounds == p.words * dep.rounds && t.rounds == t.words;

    const auto& c = b.constituency.parse;
    b.dependency_ops_per_word = per(static_cast<double>(p.synaptic_ops), p.words);
    b.constituency_ops_per_word = per(static_cast<double>(c.synaptic_ops), c.words);
    b.constituency_more_work = p.words > 0 && c.words == p.words && c.synaptic_ops > p.synaptic_ops &&
                               c.rounds > p.rounds;
    b.constituency_seconds_per_word = per(c.seconds, c.words);
    b.constituency_slowdown =
        b.parse_seconds_per_word > 0 ? b.constituency_seconds_per_word / b.parse_seconds_per_word : 0.0;
    return b;
}

}  // namespace assemblies
