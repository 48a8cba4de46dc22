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

#include <string>
#include <string_view>
#include <vector>

namespace assemblies {

/// Splits an automaton input into symbols. Whitespace-separated when the text
/// contains whitespace, otherwise one symbol per UTF-8 code point, so both
/// "ααβ" and "open open close" work.
std::vector<std::string> split_symbols(std::string_view text);

/// Joins symbols back into the compact form when every symbol is a single
/// code point, space-separated otherwise.
std::string join_symbols(const std::vector<std::string>& symbols);

/// Whitespace tokenization with commas split off as their own tokens.
std::vector<std::string> tokenize_sentence(std::string_view text);

}  // namespace assemblies
