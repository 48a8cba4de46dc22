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

#include "assemblies/assemblies.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "assemblies/bridges.hpp"
#include "assemblies/corpus.hpp"
#include "assemblies/error.hpp"
#include "assemblies/fba.hpp"
#include "assemblies/lexicon.hpp"
#include "assemblies/parser.hpp"
#include "assemblies/pda.hpp"

using namespace assemblies;

struct ac_parser {
    Lexicon lexicon;
    Parser parser;

    ac_parser(Lexicon lex, const ParserConfig& config) : lexicon(std::move(lex)), parser(lexicon, config) {}
    ac_parser(const ac_parser&) = delete;
    ac_parser& operator=(const ac_parser&) = delete;
};

struct ac_fba {
    Fba fba;
};

namespace {

thread_local std::string last_error;

ac_status to_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return AC_ERR_INVALID_ARGUMENT;
    case ErrorCode::OutOfVocabulary: return AC_ERR_OUT_OF_VOCABULARY;
    case ErrorCode::Structure: return AC_ERR_STRUCTURE;
    case ErrorCode::Inconclusive: return AC_ERR_INCONCLUSIVE;
    case ErrorCode::Parse: return AC_ERR_PARSE;
    case ErrorCode::Readout: return AC_ERR_READOUT;
    case ErrorCode::Io: return AC_ERR_IO;
    case ErrorCode::Internal: return AC_ERR_INTERNAL;
    }
    return AC_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and last_error.
template <typename F>
ac_status guarded(F&& body) {
    last_error.clear();
    try {
        body();
        return AC_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const nlohmann::json::exception& e) {
        last_error = e.what();
        return AC_ERR_PARSE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return AC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return AC_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) {
        fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json parse_json(const char* text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string(what) + ": " + e.what());
    }
}

FbaOptions fba_options(const nlohmann::json& doc) {
    FbaOptions opts;
    if (doc.contains("mark")) {
        const auto m = doc.at("mark").get<std::string>();
        if (m == "result") {
            opts.mark = MarkValue::Result;
        } else if (m == "current") {
            opts.mark = MarkValue::Current;
        } else {
            fail(ErrorCode::InvalidArgument, "mark must be \"result\" or \"current\"");
        }
    }
    opts.prefix = doc.value("prefix", false);
    opts.max_configurations = doc.value("max_configurations", std::size_t{0});
    return opts;
}

}  // namespace

extern "C" {

const char* ac_version(void) { return "0.1.0"; }

const char* ac_last_error(void) { return last_error.c_str(); }

const char* ac_status_name(ac_status status) {
    switch (status) {
    case AC_OK: return "ok";
    case AC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AC_ERR_OUT_OF_VOCABULARY: return "out of vocabulary";
    case AC_ERR_STRUCTURE: return "structure error";
    case AC_ERR_INCONCLUSIVE: return "inconclusive";
    case AC_ERR_PARSE: return "parse error";
    case AC_ERR_READOUT: return "readout error";
    case AC_ERR_IO: return "i/o error";
    case AC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void ac_string_free(char* s) { std::free(s); }

ac_status ac_parser_new(const char* config_json, const char* lexicon_path, ac_parser** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        const ParserConfig config = ParserConfig::from_json(
            config_json ? parse_json(config_json, "parser config") : nlohmann::json::object());
        config.validate();
        auto lexicon =
            Lexicon::load(lexicon_path ? std::string(lexicon_path) : Lexicon::default_path(), config.lex_params());
        *out = new ac_parser(std::move(lexicon), config);
    });
}

void ac_parser_free(ac_parser* parser) { delete parser; }

ac_status ac_parser_config(const ac_parser* parser, char** out) {
    return guarded([&] {
        require(parser, "parser");
        require(out, "out");
        *out = dup(parser->parser.config().to_json().dump());
    });
}

ac_status ac_parse(const ac_parser* parser, const char* sentence, ac_format format, char** out) {
    return guarded([&] {
        require(parser, "parser");
        require(sentence, "sentence");
        require(out, "out");
        const Parser& p = parser->parser;
        const ParseRecord record = p.parse(std::string_view(sentence));
        const DependencyTree dep = p.readout_dependencies(record);
        std::optional<ConstituencyTree> con;
        if (p.config().constituency) {
            con = p.readout_constituency(record);
        }
        if (format == AC_FORMAT_DOT) {
            std::string text = dep.to_dot();
            if (con) {
                text += con->to_dot();
            }
            *out = dup(text);
            return;
        }
        nlohmann::json doc{{"sentence", sentence}, {"words", dep.words}, {"dependency", dep.to_json()}};
        if (con) {
            doc["constituency"] = con->to_json();
            doc["bracketed"] = con->to_bracketed();
        }
        auto counters = [](const PhaseCounters& c) {
            return nlohmann::json{{"words", c.words}, {"rounds", c.rounds}, {"synaptic_ops", c.synaptic_ops}};
        };
        doc["counters"] = {{"parse", counters(record.parse)},
                           {"touch", counters(record.touch)},
                           {"link", counters(record.link)}};
        doc["config"] = p.config().to_json();
        *out = dup(doc.dump(2) + "\n");
    });
}

ac_status ac_run_corpus(const ac_parser* parser, const char* corpus_path, unsigned threads, int timing,
                        char** out) {
    return guarded([&] {
        require(parser, "parser");
        require(corpus_path, "corpus_path");
        require(out, "out");
        const Corpus corpus = Corpus::load(corpus_path);
        const RunReport report = run_corpus(corpus, parser->lexicon, parser->parser.config(), threads);
        *out = dup(report.to_json(timing != 0).dump(2) + "\n");
    });
}

ac_status ac_corpus_mode(const char* corpus_path, int* constituency, int* embedding) {
    return guarded([&] {
        require(corpus_path, "corpus_path");
        require(constituency, "constituency");
        require(embedding, "embedding");
        const Corpus corpus = Corpus::load(corpus_path);
        *constituency = corpus.constituency ? 1 : 0;
        *embedding = corpus.embedding ? 1 : 0;
    });
}

ac_status ac_bench(const ac_parser* parser, const char* corpus_path, unsigned threads, char** out) {
    return guarded([&] {
        require(parser, "parser");
        require(corpus_path, "corpus_path");
        require(out, "out");
        const Corpus corpus = Corpus::load(corpus_path);
        const BenchReport report = run_bench(corpus, parser->lexicon, parser->parser.config(), threads);
        *out = dup(report.to_json().dump(2) + "\n");
    });
}

ac_status ac_fba_from_json(const char* json, ac_fba** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        *out = new ac_fba{Fba::from_json(parse_json(json, "FBA"))};
    });
}

void ac_fba_free(ac_fba* fba) { delete fba; }

ac_status ac_fba_to_json(const ac_fba* fba, char** out) {
    return guarded([&] {
        require(fba, "fba");
        require(out, "out");
        *out = dup(fba->fba.to_json().dump(2) + "\n");
    });
}

ac_status ac_fba_run(const ac_fba* fba, const char* input, const char* options_json, char** out) {
    return guarded([&] {
        require(fba, "fba");
        require(input, "input");
        require(out, "out");
        const auto opts_doc = options_json ? parse_json(options_json, "options") : nlohmann::json::object();
        const FbaOptions opts = fba_options(opts_doc);
        const FbaResult result = run(fba->fba, fba->fba.encode(input), opts);
        auto doc = result.to_json(fba->fba);
        doc["input"] = input;
        if (!opts_doc.value("witness", false)) {
            doc.erase("witness");
        }
        *out = dup(doc.dump(2) + "\n");
    });
}

ac_status ac_fba_weak_check(const ac_fba* fba, char** out) {
    return guarded([&] {
        require(fba, "fba");
        require(out, "out");
        const nlohmann::json doc{{"weak", is_weak(fba->fba)},
                                 {"s_deterministic", is_s_deterministic(fba->fba)},
                                 {"violations", weak_violations(fba->fba)}};
        *out = dup(doc.dump(2) + "\n");
    });
}

ac_status ac_fba_s_determinize(const ac_fba* fba, ac_fba** out) {
    return guarded([&] {
        require(fba, "fba");
        require(out, "out");
        *out = nullptr;
        *out = new ac_fba{s_determinize(fba->fba)};
    });
}

ac_status ac_fba_to_pda(const ac_fba* fba, int determinize, char** out) {
    return guarded([&] {
        require(fba, "fba");
        require(out, "out");
        const CompiledPda pda = determinize ? fba_to_pda(s_determinize(fba->fba)) : fba_to_pda(fba->fba);
        *out = dup(pda.to_json().dump(2) + "\n");
    });
}

ac_status ac_fba_pda_run(const ac_fba* fba, const char* input, char** out) {
    return guarded([&] {
        require(fba, "fba");
        require(input, "input");
        require(out, "out");
        const CompiledPda pda = fba_to_pda(s_determinize(fba->fba));
        const PdaRun run = pda.run(pda.fba().encode(input));
        auto doc = run.to_json();
        doc["input"] = input;
        *out = dup(doc.dump(2) + "\n");
        if (run.verdict == PdaVerdict::Inconclusive) {
            fail(ErrorCode::Inconclusive, "compiled PDA search hit its bounds");
        }
    });
}

ac_status ac_pda_run(const char* pda_json, const char* input, size_t max_stack, size_t max_epsilon_chain,
                     char** out) {
    return guarded([&] {
        require(pda_json, "pda_json");
        require(input, "input");
        require(out, "out");
        const Pda pda = Pda::from_json(parse_json(pda_json, "PDA"));
        const PdaRun run = pda.run(pda.encode(input), PdaBounds{max_stack, max_epsilon_chain});
        auto doc = run.to_json();
        doc["input"] = input;
        *out = dup(doc.dump(2) + "\n");
        if (run.verdict == PdaVerdict::Inconclusive) {
            fail(ErrorCode::Inconclusive, "PDA search hit its bounds");
        }
    });
}

ac_status ac_cs_build(const char* instance_json, ac_fba** out) {
    return guarded([&] {
        require(instance_json, "instance_json");
        require(out, "out");
        *out = nullptr;
        *out = new ac_fba{cs_weak_fba(CsInstance::from_json(parse_json(instance_json, "CS instance")))};
    });
}

ac_status ac_equiv_sweep(size_t machines, size_t max_len, uint64_t seed, unsigned max_states,
                         unsigned max_symbols, unsigned max_rules, char** out) {
    return guarded([&] {
        require(out, "out");
        RandomFbaParams params;
        params.max_states = max_states;
        params.max_symbols = max_symbols;
        params.max_rules = max_rules;
        const SweepReport report = equivalence_sweep(machines, max_len, seed, params);
        *out = dup(report.to_json().dump(2) + "\n");
    });
}

}  // extern "C"
