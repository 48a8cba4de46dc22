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

#include "assemblies/symbols.hpp"

#include <algorithm>
#include <cctype>

#include "assemblies/error.hpp"

namespace assemblies {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t code_point_length(unsigned char lead) {
    if (lead < 0x80) {
        return 1;
    }
    if ((lead & 0xE0) == 0xC0) {
        return 2;
    }
    if ((lead & 0xF0) == 0xE0) {
        return 3;
    }
    if ((lead & 0xF8) == 0xF0) {
        return 4;
    }
    fail(ErrorCode::InvalidArgument, "input is not valid UTF-8");
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) {
            ++j;
        }
        if (j > i) {
            out.emplace_back(text.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

}  // namespace

std::vector<std::string> split_symbols(std::string_view text) {
    if (std::any_of(text.begin(), text.end(), is_space)) {
        return split_whitespace(text);
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size();) {
        const std::size_t len = code_point_length(static_cast<unsigned char>(text[i]));
        if (i + len > text.size()) {
            fail(ErrorCode::InvalidArgument, "input is not valid UTF-8");
        }
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

std::string join_symbols(const std::vector<std::string>& symbols) {
    const bool compact = std::all_of(symbols.begin(), symbols.end(), [](const std::string& s) {
        return !s.empty() && code_point_length(static_cast<unsigned char>(s[0])) == s.size();
    });
    std::string out;
    for (const auto& s : symbols) {
        if (!compact && !out.empty()) {
            out += ' ';
        }
        out += s;
    }
    return out;
}

std::vector<std::string> tokenize_sentence(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& chunk : split_whitespace(text)) {
        std::string word;
        for (char c : chunk) {
            if (c == ',') {
                if (!word.empty()) {
                    out.push_back(std::move(word));
                    word.clear();
                }
                out.emplace_back(",");
            } else {
                word += c;
            }
        }
        if (!word.empty()) {
            out.push_back(std::move(word));
        }
    }
    return out;
}

}  // namespace assemblies
