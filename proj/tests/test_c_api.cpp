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

// Exercises libassemblies through its C header only.

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "assemblies/assemblies.h"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string machine(const char* name) { return slurp(std::string(ASSEMBLIES_DATA_DIR) + "/machines/" + name); }

struct Out {
    char* p = nullptr;
    ~Out() { ac_string_free(p); }
    nlohmann::json json() const { return nlohmann::json::parse(p); }
};

}  // namespace

TEST_CASE("parse through the C API") {
    ac_parser* parser = nullptr;
    REQUIRE(ac_parser_new(R"({"seed": 1})", nullptr, &parser) == AC_OK);
    Out out;
    REQUIRE(ac_parse(parser, "dogs chase cats", AC_FORMAT_JSON, &out.p) == AC_OK);
    const auto doc = out.json();
    CHECK(doc.at("dependency").at("edges").size() == 2);
    CHECK(doc.at("counters").at("parse").at("rounds") == 60);

    Out dot;
    REQUIRE(ac_parse(parser, "dogs chase cats", AC_FORMAT_DOT, &dot.p) == AC_OK);
    CHECK(std::string(dot.p).rfind("digraph", 0) == 0);

    Out none;
    CHECK(ac_parse(parser, "dogs chase zebras", AC_FORMAT_JSON, &none.p) == AC_ERR_OUT_OF_VOCABULARY);
    CHECK(std::string(ac_last_error()).find("zebras") != std::string::npos);
    CHECK(none.p == nullptr);
    CHECK(ac_parse(parser, "dogs , chase cats", AC_FORMAT_JSON, &none.p) == AC_ERR_STRUCTURE);
    ac_parser_free(parser);
}

TEST_CASE("bad arguments are reported, not crashed on") {
    ac_parser* parser = nullptr;
    CHECK(ac_parser_new("{not json", nullptr, &parser) == AC_ERR_PARSE);
    CHECK(parser == nullptr);
    CHECK(ac_parser_new(R"({"rounds": 0})", nullptr, &parser) == AC_ERR_INVALID_ARGUMENT);
    CHECK(ac_parser_new(nullptr, "/nonexistent/lexicon.json", &parser) == AC_ERR_IO);
    CHECK(ac_parse(nullptr, "dogs", AC_FORMAT_JSON, nullptr) == AC_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ac_status_name(AC_ERR_INCONCLUSIVE)) == "inconclusive");
    ac_parser_free(nullptr);
    ac_fba_free(nullptr);
    ac_string_free(nullptr);
}

TEST_CASE("the last error is per thread") {
    ac_fba* fba = nullptr;
    CHECK(ac_fba_from_json("[]", &fba) != AC_OK);
    const std::string mine = ac_last_error();
    CHECK_FALSE(mine.empty());
    std::string theirs = "unset";
    std::thread([&] { theirs = ac_last_error(); }).join();
    CHECK(theirs.empty());
    CHECK(std::string(ac_last_error()) == mine);
}

TEST_CASE("FBA entry points") {
    ac_fba* fba = nullptr;
    REQUIRE(ac_fba_from_json(machine("dyck1.json").c_str(), &fba) == AC_OK);
    Out run;
    REQUIRE(ac_fba_run(fba, "(())", R"({"witness": true})", &run.p) == AC_OK);
    CHECK(run.json().at("accepted") == true);
    CHECK(run.json().contains("witness"));
    Out rejected;
    REQUIRE(ac_fba_run(fba, ")(", nullptr, &rejected.p) == AC_OK);
    CHECK(rejected.json().at("accepted") == false);
    Out capped;
    CHECK(ac_fba_run(fba, "((()))", R"({"max_configurations": 2})", &capped.p) == AC_ERR_INCONCLUSIVE);

    Out weak;
    REQUIRE(ac_fba_weak_check(fba, &weak.p) == AC_OK);
    CHECK(weak.json().at("weak") == true);

    Out pda;
    REQUIRE(ac_fba_to_pda(fba, 1, &pda.p) == AC_OK);
    CHECK(pda.json().contains("stack_alphabet_bound"));
    Out via;
    REQUIRE(ac_fba_pda_run(fba, "(()())", &via.p) == AC_OK);
    CHECK(via.json().at("accepted") == true);

    ac_fba* det = nullptr;
    REQUIRE(ac_fba_s_determinize(fba, &det) == AC_OK);
    Out det_json;
    REQUIRE(ac_fba_to_json(det, &det_json.p) == AC_OK);
    CHECK(det_json.json().at("states").size() >= 1);
    ac_fba_free(det);
    ac_fba_free(fba);
}

TEST_CASE("PDA, CS and sweep entry points") {
    Out ok;
    REQUIRE(ac_pda_run(machine("d1_pda.json").c_str(), "(())", 0, 0, &ok.p) == AC_OK);
    CHECK(ok.json().at("verdict") == "accept");
    Out cut;
    CHECK(ac_pda_run(machine("d1_pda.json").c_str(), "(())", 1, 0, &cut.p) == AC_ERR_INCONCLUSIVE);
    REQUIRE(cut.p != nullptr);
    CHECK(cut.json().at("verdict") == "inconclusive");

    ac_fba* cs = nullptr;
    REQUIRE(ac_cs_build(machine("cs_dyck2_h.json").c_str(), &cs) == AC_OK);
    Out weak;
    REQUIRE(ac_fba_weak_check(cs, &weak.p) == AC_OK);
    CHECK(weak.json().at("weak") == true);
    Out run;
    REQUIRE(ac_fba_run(cs, "ababc", nullptr, &run.p) == AC_OK);  // h(< ( ) >)
    CHECK(run.json().at("accepted") == true);
    ac_fba_free(cs);

    Out sweep;
    REQUIRE(ac_equiv_sweep(10, 4, 3, 3, 2, 12, &sweep.p) == AC_OK);
    CHECK(sweep.json().at("mismatches").empty());
}
