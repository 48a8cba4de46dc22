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

#include "assemblies/corpus.hpp"
#include "assemblies/error.hpp"
#include "assemblies/lexicon.hpp"
#include "assemblies/parser.hpp"
#include "assemblies/symbols.hpp"

using namespace assemblies;

namespace {

struct Fixture {
    ParserConfig config;
    Lexicon lexicon;
    Parser parser;

    explicit Fixture(ParserConfig cfg)
        : config(cfg), lexicon(Lexicon::load(Lexicon::default_path(), cfg.lex_params())), parser(lexicon, cfg) {}
};

ParserConfig with(bool constituency, bool embedding, std::uint64_t seed = 1) {
    ParserConfig cfg;
    cfg.constituency = constituency;
    cfg.embedding = embedding;
    cfg.seed = seed;
    return cfg;
}

std::vector<DependencyEdge> edges(std::initializer_list<DependencyEdge> list) { return list; }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("tokenizer splits commas off words") {
    CHECK(tokenize_sentence("dogs, when they run , chase cats") ==
          std::vector<std::string>{"dogs", ",", "when", "they", "run", ",", "chase", "cats"});
    CHECK(tokenize_sentence("  ").empty());
}

TEST_CASE("segmentation assigns depths and resume points") {
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), {});
    const auto seg = segment(tokenize_sentence("dogs , when they run , chase cats"), lex, true);
    CHECK(seg.words == std::vector<std::string>{"dogs", "when", "they", "run", "chase", "cats"});
    CHECK(seg.depth == std::vector<std::size_t>{0, 1, 1, 1, 0, 0});
    CHECK(seg.max_depth() == 1);
    CHECK(seg.opens_after[0]);
    CHECK(seg.begins_clause[1]);
    CHECK(seg.resumes[4] == std::optional<std::size_t>(0));
    CHECK(seg.clauses.size() == 2);
}

TEST_CASE("ill-nested clauses are structure errors") {
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), {});
    auto seg = [&](const char* s, bool emb) { return segment(tokenize_sentence(s), lex, emb); };
    CHECK(code_of([&] { seg("dogs , chase cats", true); }) == ErrorCode::Structure);
    CHECK(code_of([&] { seg(", dogs chase cats", true); }) == ErrorCode::Structure);
    CHECK(code_of([&] { seg("dogs , when they run , chase cats", false); }) == ErrorCode::Structure);
    CHECK(code_of([&] { seg("dogs , when they run", true); }) == ErrorCode::Structure);
}

TEST_CASE("out-of-vocabulary words name the word") {
    Fixture f(with(false, false));
    try {
        (void)f.parser.parse("dogs chase zebras");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfVocabulary);
        CHECK(std::string(e.what()).find("zebras") != std::string::npos);
    }
}

TEST_CASE("dependency-only regression sentences") {
    Fixture f(with(false, false));
    struct Case {
        const char* sentence;
        std::size_t root;
        std::vector<DependencyEdge> edges;
    };
    const std::vector<Case> cases{
        {"dogs chase cats", 1, edges({{1, 0, "SUBJ"}, {1, 2, "OBJ"}})},
        {"cats sleep", 1, edges({{1, 0, "SUBJ"}})},
        {"the big dogs chase cats", 3, edges({{2, 0, "DET"}, {2, 1, "ADJ"}, {3, 2, "SUBJ"}, {3, 4, "OBJ"}})},
        {"kids run quickly", 1, edges({{1, 0, "SUBJ"}, {1, 2, "ADV"}})},
    };
    for (const auto& c : cases) {
        INFO(c.sentence);
        const auto tree = f.parser.readout_dependencies(f.parser.parse(c.sentence));
        CHECK(tree.root == c.root);
        auto got = tree.edges;
        auto want = c.edges;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        CHECK(got == want);
    }
}

TEST_CASE("constituency mode leaves the dependency side untouched") {
    Fixture dep(with(false, false, 4));
    Fixture con(with(true, false, 4));
    for (const char* s : {"the dogs chase cats", "young kids love the red ball", "birds sing loudly"}) {
        INFO(s);
        const ParseRecord a = dep.parser.parse(s);
        const ParseRecord b = con.parser.parse(s);
        CHECK(dep.parser.readout_dependencies(a).same_as(con.parser.readout_dependencies(b)));
        REQUIRE(a.words.size() == b.words.size());
        for (std::size_t i = 0; i < a.words.size(); ++i) {
            for (const auto& asm_a : a.words[i].assemblies) {
                const Assembly* asm_b = b.words[i].in(asm_a.area());
                REQUIRE(asm_b != nullptr);
                CHECK(*asm_b == asm_a);
            }
        }
        CHECK(b.parse.synaptic_ops > a.parse.synaptic_ops);
        CHECK(b.parse.rounds > a.parse.rounds);
    }
}

TEST_CASE("constituency readout splits subject, verb and object") {
    Fixture f(with(true, false, 2));
    const auto tree = f.parser.readout_constituency(f.parser.parse("the big dogs chase small cats"));
    CHECK(tree.subject == std::vector<std::size_t>{0, 1, 2});
    CHECK(tree.verb == std::vector<std::size_t>{3});
    CHECK(tree.object == std::vector<std::size_t>{4, 5});
    CHECK(tree.to_bracketed() == "(S (Subj the big dogs) (VP (Verb chase) (Obj small cats)))");
}

TEST_CASE("touching fires exactly one round per touched word") {
    Fixture f(with(false, true, 3));
    const ParseRecord r = f.parser.parse("dogs , when they run , chase cats");
    CHECK(r.touch.words == 1);
    CHECK(r.touch.rounds == r.touch.words);
    CHECK(r.parse.rounds == r.parse.words * f.config.rounds);
    REQUIRE(r.links.size() == 1);
    CHECK(r.links[0].signature == 0);
    CHECK(r.links[0].inner_verb == std::optional<std::size_t>(3));
}

TEST_CASE("clear_slate leaves no winners and a touch restores the subject") {
    ParserConfig cfg = with(false, true, 5);
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), cfg.lex_params());
    ParseSession session(lex, cfg);
    session.parse_word("dogs");
    const Assembly before = session.brain().winners("SUBJ");
    REQUIRE(before.size() == cfg.k);
    session.clear_slate();
    for (const auto& area : session.brain().area_names()) {
        CHECK(session.brain().winners(area).empty());
    }
    const auto once = session.brain().snapshot();
    session.clear_slate();
    CHECK(session.brain().snapshot() == once);
    session.touch_word(0);
    CHECK(overlap(session.brain().winners("SUBJ"), before) >= 95);
}

TEST_CASE("parses are reproducible for a seed") {
    Fixture f(with(true, false, 9));
    const auto a = f.parser.parse("some cats eat fish");
    const auto b = f.parser.parse("some cats eat fish");
    REQUIRE(a.words.size() == b.words.size());
    for (std::size_t i = 0; i < a.words.size(); ++i) {
        CHECK(a.words[i].assemblies == b.words[i].assemblies);
    }
    CHECK(a.final_s == b.final_s);
    CHECK(a.parse.synaptic_ops == b.parse.synaptic_ops);
}

TEST_CASE("parser config round-trips and validates") {
    ParserConfig cfg = with(true, true, 17);
    cfg.rounds = 12;
    const auto back = ParserConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    ParserConfig bad;
    bad.rounds = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("lexicon entries carry disjoint LEX assemblies") {
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), {});
    CHECK(lex.contains("dogs"));
    CHECK_FALSE(lex.contains("zebras"));
    const auto& a = lex.action_set("dogs").lex_assembly;
    const auto& b = lex.action_set("cats").lex_assembly;
    CHECK(a.size() == 100);
    CHECK(overlap(a, b) == 0);
    CHECK(lex.action_set("chase").is_verb());
    CHECK_THROWS_AS((void)lex.action_set("zebras"), Error);
}

TEST_CASE("trees validate and render") {
    DependencyTree t;
    t.words = {"dogs", "chase", "cats"};
    t.root = 1;
    t.edges = {{1, 0, "SUBJ"}, {1, 2, "OBJ"}};
    CHECK_NOTHROW(t.validate());
    CHECK(t.subtree(1) == std::vector<std::size_t>{0, 1, 2});
    CHECK(DependencyTree::from_json(t.to_json(), t.words).same_as(t));
    const std::string dot = t.to_dot();
    CHECK(dot.find("digraph") != std::string::npos);
    t.edges.push_back({0, 2, "ADJ"});  // two heads for 'cats'
    CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("corpus files load and the empty corpus passes trivially") {
    const auto corpus = Corpus::from_json(nlohmann::json{{"cases", nlohmann::json::array()}});
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), {});
    const auto report = run_corpus(corpus, lex, ParserConfig{});
    CHECK(report.all_passed());
    CHECK(report.cases.empty());
    const auto shipped = Corpus::load(std::string(ASSEMBLIES_DATA_DIR) + "/corpus_constituency.json");
    CHECK(shipped.cases.size() == 40);
    CHECK(shipped.constituency);
}

TEST_CASE("corpus reports flag a wrong reference with a diff") {
    auto doc = nlohmann::json::parse(R"({"cases": [{"sentence": "dogs chase cats",
        "expected_dependency": {"root": 1, "edges": [[1, 0, "OBJ"], [1, 2, "SUBJ"]]}}]})");
    const auto corpus = Corpus::from_json(doc);
    ParserConfig cfg = with(false, false, 1);
    const Lexicon lex = Lexicon::load(Lexicon::default_path(), cfg.lex_params());
    const auto report = run_corpus(corpus, lex, cfg, 1);
    REQUIRE(report.cases.size() == 1);
    CHECK_FALSE(report.cases[0].passed);
    CHECK(report.cases[0].missing_edges.size() == 2);
    CHECK(report.cases[0].extra_edges.size() == 2);
    CHECK(report.to_json(false).dump() == run_corpus(corpus, lex, cfg, 2).to_json(false).dump());
}
