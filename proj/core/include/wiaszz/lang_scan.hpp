// Copyright 2026 The wiaszz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wiaszz {

enum class Language { C, Cpp, Java, JavaScript, CSharp, Php, Python, Ruby };

std::string_view to_string(Language lang);

/// Maps a file path to a supported language by extension; nullopt means the
/// file is skipped by method extraction.
std::optional<Language> detect_language(std::string_view path);

/// One function/method definition located in a source image. The span covers
/// the signature through the closing delimiter, 1-based and inclusive.
struct MethodSpan {
  std::string qualified_name;  // enclosing declarations joined with "::"
  int arity = 0;
  int start_line = 0;
  int end_line = 0;
};

struct ScanStats {
  int anonymous_functions = 0;  // lambdas/closures, excluded by design
  bool balanced = true;         // false when delimiters never re-closed
};

/// Best-effort syntax-aware boundary detection. Never throws; returns what
/// could be recognized and reports irregularities through `stats`.
std::vector<MethodSpan> scan_methods(Language lang, std::string_view source,
                                     ScanStats* stats = nullptr);

}  // namespace wiaszz
