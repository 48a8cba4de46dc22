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

// Command-line front end. Talks to the library only through assemblies.h.
//
// Exit codes: 0 success, 1 other failure (including failing corpus cases
// or sweep counterexamples), 2 out-of-vocabulary word, 3 ill-nested
// clauses, 4 inconclusive search.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "assemblies/assemblies.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitOov = 2;
constexpr int kExitStructure = 3;
constexpr int kExitInconclusive = 4;

int exit_code(ac_status s) {
    switch (s) {
    case AC_OK: return 0;
    case AC_ERR_OUT_OF_VOCABULARY: return kExitOov;
    case AC_ERR_STRUCTURE: return kExitStructure;
    case AC_ERR_INCONCLUSIVE: return kExitInconclusive;
    default: return kExitFailure;
    }
}

int report(ac_status s) {
    if (s != AC_OK) {
        std::cerr << "error (" << ac_status_name(s) << "): " << ac_last_error() << "\n";
    }
    return exit_code(s);
}

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { ac_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ParserHandle {
    ac_parser* p = nullptr;
    ~ParserHandle() { ac_parser_free(p); }
};

struct FbaHandle {
    ac_fba* p = nullptr;
    ~FbaHandle() { ac_fba_free(p); }
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error (i/o error): cannot open '" << path << "'\n";
        return std::nullopt;
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error (i/o error): cannot write '" << path << "'\n";
        return false;
    }
    out << text;
    return true;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ASSEMBLIES_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric ASSEMBLIES_SEED '" << env << "'\n";
        }
    }
    return 0;
}

// Options shared by the parser subcommands.
struct ParserFlags {
    std::uint64_t seed = default_seed();
    std::string config_path;
    std::string lexicon_path;
    bool constituency = false;
    bool embedding = false;
    unsigned threads = 0;

    void add_to(CLI::App* cmd, bool modes) {
        cmd->add_option("--seed", seed, "RNG seed (default: $ASSEMBLIES_SEED or 0)");
        cmd->add_option("--config", config_path, "JSON file with parser configuration fields")
            ->check(CLI::ExistingFile);
        cmd->add_option("--lexicon", lexicon_path, "lexicon JSON (default: shipped English lexicon)")
            ->check(CLI::ExistingFile);
        if (modes) {
            cmd->add_flag("--constituency", constituency, "also build VP and S, read out the constituency tree");
            cmd->add_flag("--embedding", embedding, "handle embedded clauses marked by commas");
        }
    }

    // Flags override the config file, which overrides the defaults.
    std::optional<std::string> config_json(std::optional<bool> con, std::optional<bool> emb) const {
        nlohmann::json doc = nlohmann::json::object();
        if (!config_path.empty()) {
            const auto text = read_file(config_path);
            if (!text) {
                return std::nullopt;
            }
            try {
                doc = nlohmann::json::parse(*text);
            } catch (const nlohmann::json::exception& e) {
                std::cerr << "error (parse error): " << config_path << ": " << e.what() << "\n";
                return std::nullopt;
            }
        }
        doc["seed"] = seed;
        if (con) {
            doc["constituency"] = *con;
        }
        if (emb) {
            doc["embedding"] = *emb;
        }
        return doc.dump();
    }

    ac_status make(ParserHandle& h, std::optional<bool> con, std::optional<bool> emb) const {
        const auto cfg = config_json(con, emb);
        if (!cfg) {
            return AC_ERR_IO;
        }
        return ac_parser_new(cfg->c_str(), lexicon_path.empty() ? nullptr : lexicon_path.c_str(), &h.p);
    }
};

int load_fba(const std::string& path, FbaHandle& h) {
    const auto text = read_file(path);
    if (!text) {
        return kExitFailure;
    }
    // CS instances are accepted wherever an FBA is expected.
    bool instance = false;
    try {
        instance = nlohmann::json::parse(*text).contains("h");
    } catch (const nlohmann::json::exception&) {
    }
    return report(instance ? ac_cs_build(text->c_str(), &h.p) : ac_fba_from_json(text->c_str(), &h.p));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assembly Calculus parser and fallback-automata toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ac_version()));

    // parse
    auto* parse = app.add_subcommand("parse", "parse one sentence and print its trees");
    ParserFlags parse_flags;
    std::string sentence;
    std::string format = "json";
    parse->add_option("sentence", sentence, "sentence; commas mark clause boundaries")->required();
    parse->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "dot"}));
    parse_flags.add_to(parse, true);

    // corpus
    auto* corpus = app.add_subcommand("corpus", "run a reference corpus; exit 0 iff every case passes");
    ParserFlags corpus_flags;
    std::string corpus_path;
    std::string corpus_out;
    bool corpus_timing = false;
    corpus->add_option("path", corpus_path, "corpus JSON")->required()->check(CLI::ExistingFile);
    corpus->add_option("--out", corpus_out, "write the report here instead of stdout");
    corpus->add_option("--threads", corpus_flags.threads, "worker threads (0: all cores)");
    corpus->add_flag("--timing", corpus_timing, "include wall-clock fields in the report");
    corpus_flags.add_to(corpus, true);

    // bench
    auto* bench = app.add_subcommand("bench", "time dependency-only against constituency parsing");
    ParserFlags bench_flags;
    std::string bench_path;
    bool bench_json = false;
    bench->add_option("corpus", bench_path, "corpus JSON")->required()->check(CLI::ExistingFile);
    bench->add_option("--threads", bench_flags.threads, "worker threads (0: all cores)");
    bench->add_flag("--json", bench_json, "print the full JSON report instead of a table");
    bench_flags.add_to(bench, false);

    // fba
    auto* fba = app.add_subcommand("fba", "fallback-automata toolkit");
    fba->require_subcommand(1);

    auto* fba_run = fba->add_subcommand("run", "decide membership of one input");
    std::string run_machine;
    std::string run_input;
    std::string run_mark = "result";
    bool run_prefix = false;
    bool run_witness = false;
    bool run_via_pda = false;
    std::size_t run_max_configs = 0;
    fba_run->add_option("machine", run_machine, "FBA, PDA or CS-instance JSON")->required()->check(CLI::ExistingFile);
    fba_run->add_option("input", run_input, "input; whitespace-separated symbols or one character each")
        ->required();
    fba_run->add_option("--mark", run_mark, "state a mark stores")->check(CLI::IsMember({"result", "current"}));
    fba_run->add_flag("--prefix", run_prefix, "accept on reaching an accepting state");
    fba_run->add_flag("--witness", run_witness, "print an accepting run");
    fba_run->add_flag("--via-pda", run_via_pda, "decide with the compiled PDA instead");
    fba_run->add_option("--max-configurations", run_max_configs, "search cap; hitting it exits 4");

    auto* fba_weak = fba->add_subcommand("weak-check", "check the weak-FBA conditions");
    std::string weak_machine;
    fba_weak->add_option("machine", weak_machine, "FBA or CS-instance JSON")->required()->check(CLI::ExistingFile);

    auto* fba_pda = fba->add_subcommand("to-pda", "compile to the stack-vector PDA");
    std::string pda_machine;
    bool pda_no_det = false;
    fba_pda->add_option("machine", pda_machine, "FBA JSON")->required()->check(CLI::ExistingFile);
    fba_pda->add_flag("--no-determinize", pda_no_det, "require an already s-deterministic FBA");

    auto* fba_cs = fba->add_subcommand("cs-build", "build the weak FBA of a CS instance");
    std::string cs_path;
    std::string cs_out;
    fba_cs->add_option("instance", cs_path, "CS-instance JSON")->required()->check(CLI::ExistingFile);
    fba_cs->add_option("--out", cs_out, "write the FBA here instead of stdout");

    auto* fba_sweep = fba->add_subcommand("equiv-sweep", "compare random FBAs with their compiled PDAs");
    std::size_t sweep_machines = 50;
    std::size_t sweep_maxlen = 6;
    std::uint64_t sweep_seed = default_seed();
    unsigned sweep_states = 3;
    unsigned sweep_symbols = 2;
    unsigned sweep_rules = 12;
    fba_sweep->add_option("--machines", sweep_machines, "number of random machines");
    fba_sweep->add_option("--maxlen", sweep_maxlen, "longest input tried");
    fba_sweep->add_option("--seed", sweep_seed, "RNG seed (default: $ASSEMBLIES_SEED or 0)");
    fba_sweep->add_option("--max-states", sweep_states, "states per machine, at most");
    fba_sweep->add_option("--max-symbols", sweep_symbols, "alphabet size, at most");
    fba_sweep->add_option("--max-rules", sweep_rules, "rules per machine, at most");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitFailure;
    }

    if (*parse) {
        ParserHandle h;
        const auto con = parse_flags.constituency ? std::optional(true) : std::nullopt;
        const auto emb = parse_flags.embedding ? std::optional(true) : std::nullopt;
        if (auto s = parse_flags.make(h, con, emb); s != AC_OK) {
            return report(s);
        }
        OwnedString out;
        const auto s = ac_parse(h.p, sentence.c_str(), format == "dot" ? AC_FORMAT_DOT : AC_FORMAT_JSON, &out.p);
        if (s == AC_OK) {
            std::cout << out.str();
        }
        return report(s);
    }

    if (*corpus) {
        int con = 0;
        int emb = 0;
        if (auto s = ac_corpus_mode(corpus_path.c_str(), &con, &emb); s != AC_OK) {
            return report(s);
        }
        // The corpus' own modes apply unless a flag turns one on.
        ParserHandle h;
        if (auto s = corpus_flags.make(h, corpus_flags.constituency || con, corpus_flags.embedding || emb);
            s != AC_OK) {
            return report(s);
        }
        OwnedString out;
        if (auto s = ac_run_corpus(h.p, corpus_path.c_str(), corpus_flags.threads, corpus_timing, &out.p);
            s != AC_OK) {
            return report(s);
        }
        const auto doc = nlohmann::json::parse(out.str());
        if (!write_output(out.str(), corpus_out)) {
            return kExitFailure;
        }
        std::cerr << doc.at("passed").get<std::size_t>() << "/" << doc.at("cases_total").get<std::size_t>()
                  << " cases passed\n";
        return doc.at("all_passed").get<bool>() ? 0 : kExitFailure;
    }

    if (*bench) {
        int con = 0;
        int emb = 0;
        if (auto s = ac_corpus_mode(bench_path.c_str(), &con, &emb); s != AC_OK) {
            return report(s);
        }
        ParserHandle h;
        if (auto s = bench_flags.make(h, std::nullopt, emb != 0); s != AC_OK) {
            return report(s);
        }
        OwnedString out;
        if (auto s = ac_bench(h.p, bench_path.c_str(), bench_flags.threads, &out.p); s != AC_OK) {
            return report(s);
        }
        const auto doc = nlohmann::json::parse(out.str());
        if (bench_json) {
            std::cout << out.str();
        } else {
            auto num = [&](const char* key) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.4g", doc.at(key).get<double>());
                return std::string(buf);
            };
            std::cout << "metric                                value\n"
                      << "parse rounds / word                   " << num("parse_rounds_per_word") << "\n"
                      << "touch rounds / word                   " << num("touch_rounds_per_word") << "\n"
                      << "round ratio parse / touch             " << num("touch_round_ratio") << "\n"
                      << "parse seconds / word                  " << num("parse_seconds_per_word") << "\n"
                      << "touch seconds / word                  " << num("touch_seconds_per_word") << "\n"
                      << "wall-clock ratio parse / touch        " << num("touch_speedup") << "\n"
                      << "dependency synaptic ops / word        " << num("dependency_ops_per_word") << "\n"
                      << "constituency synaptic ops / word      " << num("constituency_ops_per_word") << "\n"
                      << "constituency seconds / word           " << num("constituency_seconds_per_word") << "\n"
                      << "wall-clock ratio constituency / dep   " << num("constituency_slowdown") << "\n";
        }
        const bool ok = doc.at("constituency_more_work").get<bool>() &&
                        (doc.at("touch_rounds_per_word").get<double>() == 0 || doc.at("rounds_exact").get<bool>());
        if (!ok) {
            std::cerr << "structural counter check failed\n";
        }
        return ok ? 0 : kExitFailure;
    }

    // fba subcommands
    if (*fba_run) {
        const auto text = read_file(run_machine);
        if (!text) {
            return kExitFailure;
        }
        bool is_pda = false;
        try {
            is_pda = nlohmann::json::parse(*text).contains("gamma");
        } catch (const nlohmann::json::exception&) {
        }
        OwnedString out;
        ac_status s;
        if (is_pda) {
            s = ac_pda_run(text->c_str(), run_input.c_str(), 0, 0, &out.p);
        } else {
            FbaHandle h;
            if (int rc = load_fba(run_machine, h); rc != 0) {
                return rc;
            }
            if (run_via_pda) {
                s = ac_fba_pda_run(h.p, run_input.c_str(), &out.p);
            } else {
                const nlohmann::json opts{{"mark", run_mark},
                                          {"prefix", run_prefix},
                                          {"witness", run_witness},
                                          {"max_configurations", run_max_configs}};
                s = ac_fba_run(h.p, run_input.c_str(), opts.dump().c_str(), &out.p);
            }
        }
        std::cout << out.str();
        return report(s);
    }
    if (*fba_weak) {
        FbaHandle h;
        if (int rc = load_fba(weak_machine, h); rc != 0) {
            return rc;
        }
        OwnedString out;
        const auto s = ac_fba_weak_check(h.p, &out.p);
        std::cout << out.str();
        return report(s);
    }
    if (*fba_pda) {
        FbaHandle h;
        if (int rc = load_fba(pda_machine, h); rc != 0) {
            return rc;
        }
        OwnedString out;
        const auto s = ac_fba_to_pda(h.p, pda_no_det ? 0 : 1, &out.p);
        std::cout << out.str();
        return report(s);
    }
    if (*fba_cs) {
        const auto text = read_file(cs_path);
        if (!text) {
            return kExitFailure;
        }
        FbaHandle h;
        if (auto s = ac_cs_build(text->c_str(), &h.p); s != AC_OK) {
            return report(s);
        }
        OwnedString out;
        if (auto s = ac_fba_to_json(h.p, &out.p); s != AC_OK) {
            return report(s);
        }
        return write_output(out.str(), cs_out) ? 0 : kExitFailure;
    }
    if (*fba_sweep) {
        OwnedString out;
        const auto s = ac_equiv_sweep(sweep_machines, sweep_maxlen, sweep_seed, sweep_states, sweep_symbols,
                                      sweep_rules, &out.p);
        if (s != AC_OK) {
            return report(s);
        }
        std::cout << out.str();
        const auto doc = nlohmann::json::parse(out.str());
        if (doc.at("inconclusive").get<std::size_t>() > 0) {
            return kExitInconclusive;
        }
        return doc.at("mismatches").empty() ? 0 : kExitFailure;
    }
    return kExitFailure;
}
