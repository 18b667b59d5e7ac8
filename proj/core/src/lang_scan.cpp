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

#include "wiaszz/lang_scan.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace wiaszz {

namespace {

bool iws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string lower_ext(std::string_view path) {
  size_t slash = path.find_last_of('/');
  std::string_view name =
      slash == std::string_view::npos ? path : path.substr(slash + 1);
  size_t dot = name.find_last_of('.');
  if (dot == std::string_view::npos) return {};
  std::string ext(name.substr(dot));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return ext;
}

}  // namespace

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::C: return "c";
    case Language::Cpp: return "cpp";
    case Language::Java: return "java";
    case Language::JavaScript: return "javascript";
    case Language::CSharp: return "csharp";
    case Language::Php: return "php";
    case Language::Python: return "python";
    case Language::Ruby: return "ruby";
  }
  return "unknown";
}

std::optional<Language> detect_language(std::string_view path) {
  std::string ext = lower_ext(path);
  if (ext == ".c") return Language::C;
  if (ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".c++" ||
      ext == ".hpp" || ext == ".hh" || ext == ".hxx" || ext == ".h++" ||
      ext == ".ipp" || ext == ".h") {
    // Headers get the C++ scanner; it recognizes plain C as well.
    return Language::Cpp;
  }
  if (ext == ".java") return Language::Java;
  if (ext == ".js" || ext == ".jsx" || ext == ".mjs" || ext == ".cjs") {
    return Language::JavaScript;
  }
  if (ext == ".cs") return Language::CSharp;
  if (ext == ".php" || ext == ".php3" || ext == ".php4" || ext == ".php5" ||
      ext == ".phtml") {
    return Language::Php;
  }
  if (ext == ".py" || ext == ".pyw") return Language::Python;
  if (ext == ".rb" || ext == ".rake") return Language::Ruby;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sanitizing: comments, literals, and preprocessor lines become spaces so the
// structural scan below only ever sees code. Newlines are preserved.
// ---------------------------------------------------------------------------

namespace {

bool ident_char(char c, bool dollar) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         (dollar && c == '$');
}

// Blanks everything outside <?php ... ?> regions.
void mask_php_html(std::string& text) {
  if (text.find("<?") == std::string::npos) return;
  std::string out(text.size(), ' ');
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') out[i] = '\n';
  }
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find("<?", pos);
    if (open == std::string::npos) break;
    size_t body = open + 2;
    if (text.compare(body, 3, "php") == 0) body += 3;
    else if (body < text.size() && text[body] == '=') body += 1;
    size_t close = text.find("?>", body);
    size_t end = close == std::string::npos ? text.size() : close;
    for (size_t i = body; i < end; ++i) out[i] = text[i];
    pos = close == std::string::npos ? text.size() : close + 2;
  }
  text = std::move(out);
}

std::string sanitize_brace_source(Language lang, std::string_view source) {
  std::string text(source);
  if (lang == Language::Php) mask_php_html(text);

  const bool hash_comment = lang == Language::Php;
  const bool backtick = lang == Language::JavaScript;
  const bool verbatim_at = lang == Language::CSharp;
  const bool raw_string = lang == Language::Cpp;
  const bool triple_quote = lang == Language::Java || lang == Language::CSharp;
  const bool preprocessor =
      lang == Language::C || lang == Language::Cpp || lang == Language::CSharp;
  const bool continuation = lang == Language::C || lang == Language::Cpp;

  std::string out = text;
  auto blank = [&](size_t i) {
    if (out[i] != '\n') out[i] = ' ';
  };

  bool at_line_start = true;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];

    if (at_line_start && preprocessor) {
      size_t j = i;
      while (j < n && (text[j] == ' ' || text[j] == '\t')) ++j;
      if (j < n && text[j] == '#') {
        while (j < n && text[j] != '\n') {
          if (continuation && text[j] == '\\' && j + 1 < n &&
              text[j + 1] == '\n') {
            blank(j);
            j += 2;
            continue;
          }
          blank(j);
          ++j;
        }
        i = j;
        continue;
      }
    }
    at_line_start = c == '\n';

    // Comments.
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') blank(i++);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      blank(i);
      blank(i + 1);
      i += 2;
      while (i < n && !(text[i] == '*' && i + 1 < n && text[i + 1] == '/')) {
        blank(i++);
      }
      if (i < n) {
        blank(i);
        blank(i + 1);
        i += 2;
      }
      continue;
    }
    if (hash_comment && c == '#' && !(i + 1 < n && text[i + 1] == '[')) {
      while (i < n && text[i] != '\n') blank(i++);
      continue;
    }

    // Raw strings: R"delim( ... )delim"
    if (raw_string && c == '"' && i > 0 && text[i - 1] == 'R') {
      size_t open = text.find('(', i + 1);
      if (open != std::string::npos && open - i <= 18) {
        std::string delim(text, i + 1, open - i - 1);
        std::string closer = ")" + delim + "\"";
        size_t close = text.find(closer, open + 1);
        size_t end = close == std::string::npos ? n : close + closer.size();
        while (i < end) blank(i++);
        continue;
      }
    }

    // Verbatim strings: @"..." with "" escapes.
    if (verbatim_at && c == '@' && i + 1 < n && text[i + 1] == '"') {
      blank(i);
      blank(i + 1);
      i += 2;
      while (i < n) {
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            blank(i);
            blank(i + 1);
            i += 2;
            continue;
          }
          blank(i++);
          break;
        }
        blank(i++);
      }
      continue;
    }

    // Triple-quoted text blocks.
    if (triple_quote && c == '"' && i + 2 < n && text[i + 1] == '"' &&
        text[i + 2] == '"') {
      blank(i);
      blank(i + 1);
      blank(i + 2);
      i += 3;
      while (i < n && !(text[i] == '"' && i + 1 < n && text[i + 1] == '"' &&
                        i + 2 < n && text[i + 2] == '"')) {
        blank(i++);
      }
      if (i < n) {
        blank(i);
        blank(i + 1);
        blank(i + 2);
        i += 3;
      }
      continue;
    }

    // Plain string/char literals.
    if (c == '"' || c == '\'' || (backtick && c == '`')) {
      char quote = c;
      blank(i++);
      while (i < n && text[i] != quote) {
        if (text[i] == '\\' && i + 1 < n) {
          blank(i);
          blank(i + 1);
          i += 2;
          continue;
        }
        if (text[i] == '\n' && quote != '`') break;  // unterminated
        blank(i++);
      }
      if (i < n && text[i] == quote) blank(i++);
      continue;
    }

    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brace-family structural scan.
// ---------------------------------------------------------------------------

const std::unordered_set<std::string_view>& name_blacklist(Language lang) {
  static const std::unordered_set<std::string_view> c_like = {
      "if", "for", "while", "switch", "catch", "return", "sizeof", "do",
      "else", "try", "throw", "new", "delete", "using", "typedef", "case",
      "default", "goto", "asm", "void", "int", "char", "long", "short",
      "float", "double", "unsigned", "signed", "bool", "volatile", "register",
      "decltype", "alignof", "alignas", "noexcept", "static_assert",
      "_Static_assert", "typeid", "defined", "__attribute__", "__declspec",
      "__asm__", "requires", "static_cast", "dynamic_cast", "const_cast",
      "reinterpret_cast", "co_await", "co_return", "co_yield", "constexpr",
      "consteval", "constinit"};
  static const std::unordered_set<std::string_view> java = {
      "if", "for", "while", "switch", "catch", "return", "do", "else", "try",
      "throw", "new", "assert", "synchronized", "super", "this", "instanceof",
      "case", "default"};
  static const std::unordered_set<std::string_view> csharp = {
      "if", "for", "foreach", "while", "switch", "catch", "return", "do",
      "else", "try", "throw", "new", "using", "lock", "checked", "unchecked",
      "fixed", "typeof", "nameof", "when", "base", "this", "case", "default",
      "sizeof", "stackalloc"};
  static const std::unordered_set<std::string_view> js = {
      "if", "for", "while", "switch", "catch", "return", "do", "else", "try",
      "throw", "new", "function", "typeof", "in", "of", "instanceof", "await",
      "yield", "delete", "case", "default", "void", "with"};
  static const std::unordered_set<std::string_view> php = {
      "if", "for", "foreach", "while", "switch", "catch", "return", "do",
      "else", "elseif", "try", "throw", "new", "function", "fn", "use",
      "echo", "print", "isset", "unset", "empty", "list", "array", "match",
      "case", "default"};
  switch (lang) {
    case Language::C:
    case Language::Cpp: return c_like;
    case Language::Java: return java;
    case Language::CSharp: return csharp;
    case Language::JavaScript: return js;
    case Language::Php: return php;
    default: return c_like;
  }
}

const std::unordered_set<std::string_view>& scope_keywords(Language lang) {
  static const std::unordered_set<std::string_view> c = {"struct", "union",
                                                         "enum"};
  static const std::unordered_set<std::string_view> cpp = {
      "namespace", "class", "struct", "union", "enum"};
  static const std::unordered_set<std::string_view> java = {
      "class", "interface", "enum", "record"};
  static const std::unordered_set<std::string_view> csharp = {
      "namespace", "class", "struct", "interface", "enum", "record"};
  static const std::unordered_set<std::string_view> js = {"class"};
  static const std::unordered_set<std::string_view> php = {
      "namespace", "class", "interface", "trait", "enum"};
  switch (lang) {
    case Language::C: return c;
    case Language::Cpp: return cpp;
    case Language::Java: return java;
    case Language::CSharp: return csharp;
    case Language::JavaScript: return js;
    case Language::Php: return php;
    default: return c;
  }
}

// Trailer tokens that may legally separate a parameter list from the body
// brace of a definition.
bool trailer_token_ok(Language lang, std::string_view tok) {
  if (tok.empty()) return true;
  switch (lang) {
    case Language::C:
    case Language::Cpp:
      return tok == "const" || tok == "noexcept" || tok == "override" ||
             tok == "final" || tok == "volatile" || tok == "mutable" ||
             tok == "throw" || tok == "try" || tok == "requires" ||
             tok == "->" || tok == ":" || tok == "&" || tok == "&&" ||
             tok == "[[";
    case Language::Java:
      return tok == "throws";
    case Language::CSharp:
      return tok == "where" || tok == ":";
    case Language::JavaScript:
      return false;
    case Language::Php:
      return tok == ":" || tok == "use";
    default:
      return false;
  }
}

struct Candidate {
  size_t name_begin = 0;   // offset of the qualified name's first char
  size_t simple_begin = 0; // offset of the simple name
  std::string name;        // qualified, "::"-joined
  size_t params_open = 0;  // offset of '('
  size_t params_close = 0; // offset of matching ')'
};

size_t skip_ws_fwd(std::string_view s, size_t i) {
  while (i < s.size() && iws(s[i])) ++i;
  return i;
}

size_t skip_ws_back(std::string_view s, size_t i) {
  // Returns offset of the last non-ws char at or before i, or npos.
  while (i != std::string_view::npos && i < s.size() && iws(s[i])) {
    if (i == 0) return std::string_view::npos;
    --i;
  }
  return i >= s.size() ? std::string_view::npos : i;
}

bool is_operator_symbol(char c) {
  return std::string_view("+-*/%^&|~!=<>").find(c) != std::string_view::npos;
}

int count_params(std::string_view params, Language lang) {
  // params excludes the outer parens.
  size_t b = skip_ws_fwd(params, 0);
  size_t e = params.size();
  while (e > b && iws(params[e - 1])) --e;
  params = params.substr(b, e - b);
  if (params.empty()) return 0;
  if ((lang == Language::C || lang == Language::Cpp) && params == "void") {
    return 0;
  }

  int commas = 0;
  int paren = 0, bracket = 0, brace = 0, angle = 0;
  char prev_nonws = 0;
  for (size_t i = 0; i < params.size(); ++i) {
    char c = params[i];
    switch (c) {
      case '(': ++paren; break;
      case ')': --paren; break;
      case '[': ++bracket; break;
      case ']': --bracket; break;
      case '{': ++brace; break;
      case '}': --brace; break;
      case '<':
        if (ident_char(prev_nonws, false) || prev_nonws == '>' ||
            prev_nonws == ':' || prev_nonws == ']') {
          ++angle;
        }
        break;
      case '>':
        if (prev_nonws == '-') break;  // ->
        if (angle > 0) --angle;
        break;
      case ',':
        if (paren == 0 && bracket == 0 && brace == 0 && angle == 0) ++commas;
        break;
      default: break;
    }
    if (!iws(c)) prev_nonws = c;
  }
  return commas + 1;
}

// Reads the qualified name ending at the identifier starting at `simple`.
// Walks back over `Scope::`-style qualifiers (and `.` chains), dropping any
// template argument lists. Returns the offset where the qualified name
// starts.
size_t qualified_name_start(std::string_view header, size_t simple,
                            Language lang, std::string* out_name,
                            std::string_view simple_name) {
  std::vector<std::string> parts;
  parts.emplace_back(simple_name);
  size_t begin = simple;
  const bool dollar = lang == Language::Php || lang == Language::JavaScript;

  while (true) {
    if (begin == 0) break;
    size_t p = skip_ws_back(header, begin - 1);
    if (p == std::string_view::npos) break;

    bool colon_sep = p >= 1 && header[p] == ':' && header[p - 1] == ':';
    bool dot_sep = header[p] == '.' &&
                   (lang == Language::Java || lang == Language::JavaScript ||
                    lang == Language::CSharp);
    bool backslash_sep = header[p] == '\\' && lang == Language::Php;
    if (!colon_sep && !dot_sep && !backslash_sep) break;

    size_t sep_begin = colon_sep ? p - 1 : p;
    if (sep_begin == 0) break;
    size_t q = skip_ws_back(header, sep_begin - 1);
    if (q == std::string_view::npos) break;

    // Skip a template argument list on the qualifier: Foo<T>::bar
    if (header[q] == '>') {
      int depth = 0;
      size_t r = q;
      while (true) {
        if (header[r] == '>') ++depth;
        if (header[r] == '<') --depth;
        if (depth == 0 || r == 0) break;
        --r;
      }
      if (depth != 0 || r == 0) break;
      q = skip_ws_back(header, r - 1);
      if (q == std::string_view::npos) break;
    }
    if (!ident_char(header[q], dollar)) break;
    size_t id_end = q + 1;
    size_t id_begin = q;
    while (id_begin > 0 && ident_char(header[id_begin - 1], dollar)) {
      --id_begin;
    }
    parts.emplace_back(header.substr(id_begin, id_end - id_begin));
    begin = id_begin;
  }

  std::string joined;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!joined.empty()) joined += "::";
    joined += *it;
  }
  *out_name = std::move(joined);
  return begin;
}

std::vector<Candidate> find_candidates(std::string_view header,
                                       Language lang) {
  std::vector<Candidate> found;
  const auto& blacklist = name_blacklist(lang);
  const bool dollar = lang == Language::Php || lang == Language::JavaScript;
  const bool cppish = lang == Language::C || lang == Language::Cpp;

  size_t i = 0;
  while (i < header.size()) {
    char c = header[i];
    if (!(ident_char(c, dollar) && !std::isdigit(static_cast<unsigned char>(c)))) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < header.size() && ident_char(header[i], dollar)) ++i;
    std::string_view word = header.substr(begin, i - begin);

    size_t after = skip_ws_fwd(header, i);
    size_t params_open = std::string_view::npos;
    std::string operator_tail;

    if (cppish && word == "operator") {
      // operator+(..), operator()(..), operator[](..)
      size_t j = after;
      if (j + 1 < header.size() &&
          ((header[j] == '(' && header[j + 1] == ')') ||
           (header[j] == '[' && header[j + 1] == ']'))) {
        operator_tail = std::string(header.substr(j, 2));
        j = skip_ws_fwd(header, j + 2);
      } else {
        size_t sym_begin = j;
        while (j < header.size() && is_operator_symbol(header[j])) ++j;
        operator_tail = std::string(header.substr(sym_begin, j - sym_begin));
        j = skip_ws_fwd(header, j);
      }
      if (!operator_tail.empty() && j < header.size() && header[j] == '(') {
        params_open = j;
      }
    } else if (after < header.size() && header[after] == '(') {
      params_open = after;
    }

    if (params_open == std::string_view::npos) continue;
    if (blacklist.count(word) > 0) continue;

    size_t name_anchor = begin;
    std::string simple(word);
    if (begin > 0) {
      size_t p = skip_ws_back(header, begin - 1);
      // Annotations (@Test(...)) never name a definition.
      if (p != std::string_view::npos && header[p] == '@') continue;
      // `new Foo(...)` instantiation.
      if (p != std::string_view::npos && ident_char(header[p], dollar)) {
        size_t id_begin = p;
        while (id_begin > 0 && ident_char(header[id_begin - 1], dollar)) {
          --id_begin;
        }
        if (header.substr(id_begin, p - id_begin + 1) == "new") continue;
      }
      // Destructors: Foo::~Foo()
      if (p != std::string_view::npos && header[p] == '~') {
        name_anchor = p;
        simple.insert(0, "~");
      }
    }

    int depth = 0;
    size_t close = std::string_view::npos;
    for (size_t j = params_open; j < header.size(); ++j) {
      if (header[j] == '(') ++depth;
      if (header[j] == ')' && --depth == 0) {
        close = j;
        break;
      }
    }
    if (close == std::string_view::npos) continue;

    Candidate cand;
    cand.simple_begin = begin;
    cand.params_open = params_open;
    cand.params_close = close;
    std::string base;
    cand.name_begin =
        qualified_name_start(header, name_anchor, lang, &base, simple);
    cand.name = base + operator_tail;
    found.push_back(std::move(cand));
  }
  return found;
}

// First token of the text between ')' and '{'.
std::string_view first_trailer_token(std::string_view trailer) {
  size_t i = skip_ws_fwd(trailer, 0);
  if (i >= trailer.size()) return {};
  char c = trailer[i];
  if (ident_char(c, false)) {
    size_t j = i;
    while (j < trailer.size() && ident_char(trailer[j], false)) ++j;
    return trailer.substr(i, j - i);
  }
  if (c == '-' && i + 1 < trailer.size() && trailer[i + 1] == '>') {
    return trailer.substr(i, 2);
  }
  if (c == '&' && i + 1 < trailer.size() && trailer[i + 1] == '&') {
    return trailer.substr(i, 2);
  }
  if (c == '[' && i + 1 < trailer.size() && trailer[i + 1] == '[') {
    return trailer.substr(i, 2);
  }
  return trailer.substr(i, 1);
}

bool trailer_parens_balanced(std::string_view trailer) {
  int depth = 0;
  for (char c : trailer) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return false;
  }
  return depth == 0;
}

struct HeaderClass {
  enum Kind { Func, Named, Anon, CtorInitEntry } kind = Anon;
  std::string name;
  int arity = 0;
  size_t name_offset = 0;  // offset within header of the span anchor
};

// JS-specific fallbacks: `name = function(...)`, `name: function(...)`,
// `name = (...) =>`, `name = arg =>`.
bool js_assigned_function(std::string_view header, HeaderClass* out) {
  // The assignment separator: first top-level '=' or ':' that is not part
  // of a comparison, arrow, or '::'.
  size_t eq = std::string_view::npos;
  int depth = 0;
  for (size_t i = 0; i < header.size(); ++i) {
    char c = header[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    if (depth != 0 || i == 0) continue;
    char next = i + 1 < header.size() ? header[i + 1] : '\0';
    char prev = header[i - 1];
    if (c == '=') {
      if (next == '=' || next == '>' || prev == '=' || prev == '!' ||
          prev == '<' || prev == '>' || prev == '+' || prev == '-' ||
          prev == '*' || prev == '/' || prev == '%' || prev == '&' ||
          prev == '|' || prev == '^') {
        continue;
      }
      eq = i;
      break;
    }
    if (c == ':') {
      if (next == ':' || prev == ':') continue;
      eq = i;
      break;
    }
  }
  if (eq == std::string_view::npos || eq == 0) return false;

  size_t name_end = skip_ws_back(header, eq - 1);
  if (name_end == std::string_view::npos ||
      !ident_char(header[name_end], true)) {
    return false;
  }
  size_t name_begin = name_end;
  while (name_begin > 0 && ident_char(header[name_begin - 1], true)) {
    --name_begin;
  }

  std::string_view rhs = header.substr(eq + 1);
  size_t r = skip_ws_fwd(rhs, 0);
  bool is_function = false;
  int arity = 0;

  auto try_function_kw = [&](std::string_view text, size_t at) {
    if (text.compare(at, 8, "function") != 0) return false;
    size_t open = text.find('(', at + 8);
    if (open == std::string_view::npos) return false;
    int depth = 0;
    size_t close = std::string_view::npos;
    for (size_t j = open; j < text.size(); ++j) {
      if (text[j] == '(') ++depth;
      if (text[j] == ')' && --depth == 0) {
        close = j;
        break;
      }
    }
    if (close == std::string_view::npos) return false;
    arity = count_params(text.substr(open + 1, close - open - 1),
                         Language::JavaScript);
    return true;
  };

  if (rhs.compare(r, 5, "async") == 0) r = skip_ws_fwd(rhs, r + 5);
  if (try_function_kw(rhs, r)) {
    is_function = true;
  } else if (r < rhs.size() && rhs[r] == '(') {
    int depth = 0;
    size_t close = std::string_view::npos;
    for (size_t j = r; j < rhs.size(); ++j) {
      if (rhs[j] == '(') ++depth;
      if (rhs[j] == ')' && --depth == 0) {
        close = j;
        break;
      }
    }
    if (close != std::string_view::npos) {
      size_t arrow = skip_ws_fwd(rhs, close + 1);
      if (rhs.compare(arrow, 2, "=>") == 0) {
        is_function = true;
        arity = count_params(rhs.substr(r + 1, close - r - 1),
                             Language::JavaScript);
      }
    }
  } else if (r < rhs.size() && ident_char(rhs[r], true)) {
    size_t j = r;
    while (j < rhs.size() && ident_char(rhs[j], true)) ++j;
    size_t arrow = skip_ws_fwd(rhs, j);
    if (rhs.compare(arrow, 2, "=>") == 0) {
      is_function = true;
      arity = 1;
    }
  }

  if (!is_function) return false;
  std::string name;
  qualified_name_start(header, name_begin, Language::JavaScript, &name,
                       header.substr(name_begin, name_end - name_begin + 1));
  out->kind = HeaderClass::Func;
  out->name = std::move(name);
  out->arity = arity;
  out->name_offset = name_begin;
  return true;
}

HeaderClass classify_header(std::string_view header, Language lang,
                            ScanStats* stats) {
  HeaderClass result;

  auto candidates = find_candidates(header, lang);
  const bool pick_first = lang == Language::C || lang == Language::Cpp;

  const Candidate* chosen = nullptr;
  bool ctor_init_entry = false;
  auto consider = [&](const Candidate& cand) {
    std::string_view trailer = header.substr(cand.params_close + 1);
    if (!trailer_parens_balanced(trailer)) return false;
    std::string_view tok = first_trailer_token(trailer);
    if (!tok.empty() && !trailer_token_ok(lang, tok)) return false;
    if ((lang == Language::Cpp || lang == Language::C) && tok == ":") {
      // Within a ctor init list, `Base{...}` braces are not the body.
      size_t last = skip_ws_back(trailer, trailer.size() - 1);
      if (last != std::string_view::npos &&
          (ident_char(trailer[last], false) || trailer[last] == '>')) {
        ctor_init_entry = true;
      }
    }
    return true;
  };

  for (const Candidate& cand : candidates) {
    ctor_init_entry = false;
    if (consider(cand)) {
      chosen = &cand;
      if (pick_first) break;
    }
  }

  if (chosen != nullptr) {
    if (ctor_init_entry) {
      result.kind = HeaderClass::CtorInitEntry;
      return result;
    }
    result.kind = HeaderClass::Func;
    result.name = chosen->name;
    result.arity = count_params(
        header.substr(chosen->params_open + 1,
                      chosen->params_close - chosen->params_open - 1),
        lang);
    result.name_offset = chosen->name_begin;
    return result;
  }

  if (lang == Language::JavaScript && js_assigned_function(header, &result)) {
    return result;
  }

  // Anonymous function bodies (function(){, fn() =>, lambdas) get counted
  // but never named.
  if (stats != nullptr) {
    if ((lang == Language::JavaScript || lang == Language::Php) &&
        header.find("function") != std::string_view::npos) {
      stats->anonymous_functions++;
    } else if (lang == Language::JavaScript &&
               header.find("=>") != std::string_view::npos) {
      stats->anonymous_functions++;
    } else if (lang == Language::Cpp) {
      size_t close = header.rfind(']');
      if (close != std::string_view::npos &&
          header.find('[') != std::string_view::npos &&
          header.find('[') < close) {
        stats->anonymous_functions++;
      }
    }
  }

  // Named scope?
  const auto& kws = scope_keywords(lang);
  const bool dollar = lang == Language::Php;
  size_t kw_end = std::string_view::npos;
  std::string_view kw_found;
  size_t i = 0;
  while (i < header.size()) {
    if (!ident_char(header[i], false) ||
        std::isdigit(static_cast<unsigned char>(header[i]))) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < header.size() && ident_char(header[i], false)) ++i;
    std::string_view word = header.substr(begin, i - begin);
    if (kws.count(word) > 0) {
      kw_end = i;
      kw_found = word;
    }
  }
  if (kw_end != std::string_view::npos) {
    size_t j = kw_end;
    while (j < header.size()) {
      j = skip_ws_fwd(header, j);
      if (j >= header.size()) break;
      if (header[j] == '[') {  // attribute block
        int depth = 0;
        while (j < header.size()) {
          if (header[j] == '[') ++depth;
          if (header[j] == ']' && --depth == 0) {
            ++j;
            break;
          }
          ++j;
        }
        continue;
      }
      if (!ident_char(header[j], dollar)) break;
      size_t begin = j;
      while (j < header.size() &&
             (ident_char(header[j], dollar) || header[j] == '\\')) {
        ++j;
      }
      std::string_view word = header.substr(begin, j - begin);
      if (kw_found == "enum" && (word == "class" || word == "struct")) {
        continue;  // enum class X
      }
      std::string name(word);
      std::replace(name.begin(), name.end(), '\\', ':');
      // PHP A\B -> A::B after replacing \ with : twice
      std::string normalized;
      for (char c : name) {
        if (c == ':') normalized += "::";
        else normalized.push_back(c);
      }
      result.kind = HeaderClass::Named;
      result.name = normalized;
      result.name_offset = begin;
      return result;
    }
    // Keyword with no name: anonymous namespace/class.
    result.kind = HeaderClass::Named;
    result.name.clear();
    return result;
  }

  result.kind = HeaderClass::Anon;
  return result;
}

// File-scope `package a.b;` / `namespace A\B;` declarations that never open
// a brace still qualify everything below them.
std::string file_scope_prefix(std::string_view text, Language lang) {
  std::string_view kw;
  if (lang == Language::Java) kw = "package";
  else if (lang == Language::CSharp || lang == Language::Php) kw = "namespace";
  else return {};

  size_t pos = 0;
  while ((pos = text.find(kw, pos)) != std::string_view::npos) {
    bool boundary_ok =
        (pos == 0 || !ident_char(text[pos - 1], false)) &&
        pos + kw.size() < text.size() && iws(text[pos + kw.size()]);
    if (!boundary_ok) {
      pos += kw.size();
      continue;
    }
    size_t i = skip_ws_fwd(text, pos + kw.size());
    size_t begin = i;
    while (i < text.size() &&
           (ident_char(text[i], false) || text[i] == '.' || text[i] == '\\')) {
      ++i;
    }
    size_t after = skip_ws_fwd(text, i);
    if (after < text.size() && text[after] == ';' && i > begin) {
      std::string raw(text.substr(begin, i - begin));
      std::string out;
      for (char c : raw) {
        if (c == '.' || c == '\\') out += "::";
        else out.push_back(c);
      }
      return out;
    }
    pos += kw.size();
  }
  return {};
}

std::vector<MethodSpan> scan_brace_language(Language lang,
                                            std::string_view source,
                                            ScanStats* stats) {
  const std::string text = sanitize_brace_source(lang, source);
  std::vector<MethodSpan> methods;

  struct Scope {
    HeaderClass::Kind kind;
    std::string name;
    int arity = 0;
    int header_line = 0;
    bool preserve_segment = false;
  };
  std::vector<Scope> stack;
  const std::string prefix = file_scope_prefix(text, lang);

  auto chain_name = [&](const std::string& leaf) {
    std::string full = prefix;
    for (const Scope& s : stack) {
      if (s.kind == HeaderClass::Anon || s.name.empty()) continue;
      if (!full.empty()) full += "::";
      full += s.name;
    }
    if (!full.empty()) full += "::";
    full += leaf;
    return full;
  };

  size_t seg_start = 0;
  int seg_line = 1;
  int line = 1;

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == ';') {
      if (stack.empty() || !stack.back().preserve_segment) {
        seg_start = i + 1;
        seg_line = line;
      }
      continue;
    }
    if (c == '{') {
      std::string_view header(text.data() + seg_start, i - seg_start);
      HeaderClass hc = classify_header(header, lang, stats);

      Scope scope;
      scope.kind = hc.kind;
      scope.name = hc.name;
      scope.arity = hc.arity;

      int header_line = seg_line;
      for (size_t j = seg_start; j < seg_start + hc.name_offset; ++j) {
        if (text[j] == '\n') ++header_line;
      }
      // Span anchor: for functions use the start of the header text so
      // return types and modifiers on earlier lines are covered.
      int anchor_line = seg_line;
      size_t first_nonws = skip_ws_fwd(header, 0);
      for (size_t j = seg_start; j < seg_start + first_nonws; ++j) {
        if (text[j] == '\n') ++anchor_line;
      }
      scope.header_line = hc.kind == HeaderClass::Func ? anchor_line
                                                       : header_line;

      if (hc.kind == HeaderClass::CtorInitEntry) {
        scope.kind = HeaderClass::Anon;
        scope.preserve_segment = true;
        stack.push_back(std::move(scope));
        continue;  // keep accumulating the same header
      }
      stack.push_back(std::move(scope));
      seg_start = i + 1;
      seg_line = line;
      continue;
    }
    if (c == '}') {
      if (stack.empty()) {
        if (stats != nullptr) stats->balanced = false;
        seg_start = i + 1;
        seg_line = line;
        continue;
      }
      Scope scope = std::move(stack.back());
      stack.pop_back();
      if (scope.kind == HeaderClass::Func) {
        methods.push_back(
            {chain_name(scope.name), scope.arity, scope.header_line, line});
      }
      if (!scope.preserve_segment) {
        seg_start = i + 1;
        seg_line = line;
      }
      continue;
    }
  }

  if (!stack.empty() && stats != nullptr) stats->balanced = false;
  // Emit still-open functions up to EOF so truncated scans stay useful.
  int last_line = line;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if (it->kind == HeaderClass::Func) {
      methods.push_back(
          {chain_name(it->name), it->arity, it->header_line, last_line});
    }
  }
  return methods;
}

// ---------------------------------------------------------------------------
// Python.
// ---------------------------------------------------------------------------

std::string sanitize_python(std::string_view source) {
  std::string out(source);
  size_t i = 0;
  const size_t n = out.size();
  auto blank = [&](size_t j) {
    if (out[j] != '\n') out[j] = ' ';
  };
  while (i < n) {
    char c = out[i];
    if (c == '#') {
      while (i < n && out[i] != '\n') blank(i++);
      continue;
    }
    if (c == '"' || c == '\'') {
      char q = c;
      bool triple = i + 2 < n && out[i + 1] == q && out[i + 2] == q;
      if (triple) {
        blank(i);
        blank(i + 1);
        blank(i + 2);
        i += 3;
        while (i < n && !(out[i] == q && i + 1 < n && out[i + 1] == q &&
                          i + 2 < n && out[i + 2] == q)) {
          blank(i++);
        }
        if (i < n) {
          blank(i);
          blank(i + 1);
          blank(i + 2);
          i += 3;
        }
      } else {
        blank(i++);
        while (i < n && out[i] != q && out[i] != '\n') {
          if (out[i] == '\\' && i + 1 < n) {
            blank(i);
            blank(i + 1);
            i += 2;
            continue;
          }
          blank(i++);
        }
        if (i < n && out[i] == q) blank(i++);
      }
      continue;
    }
    ++i;
  }
  return out;
}

int python_indent(std::string_view line) {
  int col = 0;
  for (char c : line) {
    if (c == ' ') ++col;
    else if (c == '\t') col += 8 - (col % 8);
    else break;
  }
  return col;
}

std::vector<MethodSpan> scan_python(std::string_view source,
                                    ScanStats* stats) {
  const std::string text = sanitize_python(source);
  if (stats != nullptr) {
    size_t pos = 0;
    while ((pos = text.find("lambda", pos)) != std::string::npos) {
      bool left_ok = pos == 0 || !ident_char(text[pos - 1], false);
      bool right_ok = pos + 6 >= text.size() || !ident_char(text[pos + 6], false);
      if (left_ok && right_ok) stats->anonymous_functions++;
      pos += 6;
    }
  }

  // Physical lines.
  std::vector<std::string_view> lines;
  {
    size_t start = 0;
    while (start <= text.size()) {
      size_t nl = text.find('\n', start);
      if (nl == std::string::npos) {
        lines.push_back(std::string_view(text).substr(start));
        break;
      }
      lines.push_back(std::string_view(text).substr(start, nl - start));
      start = nl + 1;
    }
  }

  struct Scope {
    bool is_def;
    std::string name;
    int arity;
    int indent;
    int header_line;
  };
  std::vector<Scope> stack;
  std::vector<MethodSpan> methods;
  int last_content_line = 0;

  auto chain_name = [&](const std::string& leaf) {
    std::string full;
    for (const Scope& s : stack) {
      if (!full.empty()) full += "::";
      full += s.name;
    }
    if (!full.empty()) full += "::";
    return full + leaf;
  };
  auto close_to_indent = [&](int indent) {
    while (!stack.empty() && indent <= stack.back().indent) {
      Scope s = std::move(stack.back());
      stack.pop_back();
      if (s.is_def) {
        methods.push_back({chain_name(s.name), s.arity, s.header_line,
                           std::max(last_content_line, s.header_line)});
      }
    }
  };

  size_t li = 0;
  while (li < lines.size()) {
    std::string_view first = lines[li];
    int line_no = static_cast<int>(li) + 1;

    // Assemble one logical line (bracket continuation / backslash).
    std::string logical(first);
    size_t consumed = 1;
    {
      long depth = 0;
      auto update = [&](std::string_view piece) {
        for (char c : piece) {
          if (c == '(' || c == '[' || c == '{') ++depth;
          if (c == ')' || c == ']' || c == '}') --depth;
        }
      };
      update(first);
      while (li + consumed < lines.size() &&
             (depth > 0 || (!logical.empty() && logical.back() == '\\'))) {
        if (!logical.empty() && logical.back() == '\\') logical.pop_back();
        std::string_view next = lines[li + consumed];
        update(next);
        logical.push_back(' ');
        logical.append(next);
        ++consumed;
      }
    }

    std::string_view body = logical;
    size_t nonws = body.find_first_not_of(" \t");
    if (nonws == std::string_view::npos) {
      li += consumed;
      continue;  // blank line, scopes stay open
    }
    int indent = python_indent(first);
    close_to_indent(indent);

    std::string_view stmt = body.substr(nonws);
    bool is_async = stmt.substr(0, 6) == "async " ;
    std::string_view after_async =
        is_async ? stmt.substr(6) : stmt;
    after_async = after_async.substr(
        std::min(after_async.size(), after_async.find_first_not_of(" \t")));

    if (after_async.substr(0, 4) == "def " ||
        after_async.substr(0, 4) == "def\t") {
      std::string_view rest = after_async.substr(4);
      size_t nb = rest.find_first_not_of(" \t");
      rest = nb == std::string_view::npos ? std::string_view{} : rest.substr(nb);
      size_t name_end = 0;
      while (name_end < rest.size() && ident_char(rest[name_end], false)) {
        ++name_end;
      }
      if (name_end > 0) {
        std::string name(rest.substr(0, name_end));
        int arity = 0;
        size_t open = rest.find('(', name_end);
        if (open != std::string_view::npos) {
          int depth = 0;
          size_t close = std::string_view::npos;
          for (size_t j = open; j < rest.size(); ++j) {
            if (rest[j] == '(') ++depth;
            if (rest[j] == ')' && --depth == 0) {
              close = j;
              break;
            }
          }
          if (close != std::string_view::npos) {
            arity = count_params(rest.substr(open + 1, close - open - 1),
                                 Language::Python);
          } else if (stats != nullptr) {
            stats->balanced = false;
          }
        }
        stack.push_back({true, std::move(name), arity, indent, line_no});
      }
    } else if (after_async.substr(0, 6) == "class " ||
               after_async.substr(0, 6) == "class\t") {
      std::string_view rest = after_async.substr(6);
      size_t nb = rest.find_first_not_of(" \t");
      rest = nb == std::string_view::npos ? std::string_view{} : rest.substr(nb);
      size_t name_end = 0;
      while (name_end < rest.size() && ident_char(rest[name_end], false)) {
        ++name_end;
      }
      if (name_end > 0) {
        stack.push_back(
            {false, std::string(rest.substr(0, name_end)), 0, indent, line_no});
      }
    }

    last_content_line = static_cast<int>(li + consumed);
    li += consumed;
  }
  close_to_indent(-1);
  return methods;
}

// ---------------------------------------------------------------------------
// Ruby.
// ---------------------------------------------------------------------------

std::string sanitize_ruby(std::string_view source) {
  std::string out(source);
  const size_t n = out.size();
  auto blank = [&](size_t j) {
    if (out[j] != '\n') out[j] = ' ';
  };

  size_t i = 0;
  bool at_line_start = true;
  while (i < n) {
    char c = out[i];
    if (at_line_start && out.compare(i, 6, "=begin") == 0) {
      while (i < n) {
        bool line_start = i == 0 || out[i - 1] == '\n';
        if (line_start && out.compare(i, 4, "=end") == 0) {
          while (i < n && out[i] != '\n') blank(i++);
          break;
        }
        blank(i++);
      }
      continue;
    }
    at_line_start = c == '\n';
    if (c == '#') {
      while (i < n && out[i] != '\n') blank(i++);
      continue;
    }
    if (c == '"' || c == '\'') {
      char q = c;
      blank(i++);
      while (i < n && out[i] != q) {
        if (out[i] == '\\' && i + 1 < n) {
          blank(i);
          blank(i + 1);
          i += 2;
          continue;
        }
        blank(i++);
      }
      if (i < n) blank(i++);
      continue;
    }
    if (out.compare(i, 2, "<<") == 0 && i + 2 < n &&
        (out[i + 2] == '~' || out[i + 2] == '-' ||
         std::isupper(static_cast<unsigned char>(out[i + 2])))) {
      size_t j = i + 2;
      if (j < n && (out[j] == '~' || out[j] == '-')) ++j;
      size_t tag_begin = j;
      while (j < n && (std::isalnum(static_cast<unsigned char>(out[j])) ||
                       out[j] == '_')) {
        ++j;
      }
      if (j > tag_begin) {
        std::string tag(out, tag_begin, j - tag_begin);
        size_t line_end = out.find('\n', j);
        if (line_end == std::string::npos) break;
        size_t body = line_end + 1;
        while (body < n) {
          size_t eol = out.find('\n', body);
          size_t len = (eol == std::string::npos ? n : eol) - body;
          std::string_view lv(out.data() + body, len);
          size_t first = lv.find_first_not_of(" \t");
          std::string_view trimmed =
              first == std::string_view::npos ? std::string_view{}
                                              : lv.substr(first);
          if (trimmed == tag) {
            body = eol == std::string::npos ? n : eol + 1;
            break;
          }
          for (size_t k = body; k < body + len; ++k) blank(k);
          if (eol == std::string::npos) {
            body = n;
            break;
          }
          body = eol + 1;
        }
        i = j;
        // blank the heredoc body only; the tag line stays
        (void)body;
        continue;
      }
    }
    ++i;
  }
  return out;
}

std::vector<std::string> ruby_tokens(std::string_view line) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' ||
        c == '$') {
      size_t begin = i;
      while (i < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[i])) ||
              line[i] == '_' || line[i] == '@' || line[i] == '$' ||
              line[i] == '?' || line[i] == '!')) {
        ++i;
      }
      tokens.emplace_back(line.substr(begin, i - begin));
    } else if (!iws(c)) {
      tokens.emplace_back(1, c);
      ++i;
    } else {
      ++i;
    }
  }
  return tokens;
}

std::vector<MethodSpan> scan_ruby(std::string_view source, ScanStats* stats) {
  const std::string text = sanitize_ruby(source);

  static const std::unordered_set<std::string_view> openers = {
      "module", "class", "def", "if", "unless", "case", "while", "until",
      "for", "begin"};

  struct Scope {
    bool is_def;
    std::string name;
    int arity;
    int header_line;
  };
  std::vector<Scope> stack;
  std::vector<MethodSpan> methods;

  auto chain_name = [&](const std::string& leaf) {
    std::string full;
    for (const Scope& s : stack) {
      if (s.name.empty()) continue;
      if (!full.empty()) full += "::";
      full += s.name;
    }
    if (!full.empty()) full += "::";
    return full + leaf;
  };

  size_t pos = 0;
  int line_no = 0;
  std::string_view tv(text);
  while (pos <= tv.size()) {
    size_t nl = tv.find('\n', pos);
    std::string_view raw =
        tv.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                    : nl - pos);
    pos = nl == std::string_view::npos ? tv.size() + 1 : nl + 1;
    ++line_no;

    auto tokens = ruby_tokens(raw);
    if (tokens.empty()) continue;

    bool line_opened = false;
    for (size_t t = 0; t < tokens.size(); ++t) {
      const std::string& tok = tokens[t];
      bool statement_start = t == 0 || tokens[t - 1] == ";";
      bool after_assign = t > 0 && tokens[t - 1] == "=";

      if (tok == "def" && (statement_start || after_assign)) {
        // def name(args) / def self.name / def obj.name args
        std::string name;
        size_t u = t + 1;
        while (u < tokens.size() &&
               (tokens[u] == "self" || tokens[u] == ".")) {
          ++u;
        }
        if (u < tokens.size()) name = tokens[u];
        int arity = 0;
        size_t open = raw.find('(');
        if (open != std::string_view::npos) {
          size_t close = raw.rfind(')');
          if (close != std::string_view::npos && close > open) {
            arity = count_params(raw.substr(open + 1, close - open - 1),
                                 Language::Ruby);
          }
        } else if (u + 1 < tokens.size() && tokens[u + 1] != ";" &&
                   tokens[u + 1] != "end") {
          arity = 1;
          for (size_t v = u + 1; v < tokens.size(); ++v) {
            if (tokens[v] == ",") ++arity;
            if (tokens[v] == ";") break;
          }
        }
        stack.push_back({true, std::move(name), arity, line_no});
        line_opened = true;
        continue;
      }
      if ((tok == "module" || tok == "class") && statement_start) {
        std::string name;
        if (t + 1 < tokens.size() && tokens[t + 1] != "<") {
          name = tokens[t + 1];
        }
        stack.push_back({false, std::move(name), 0, line_no});
        line_opened = true;
        continue;
      }
      if (openers.count(tok) > 0 && tok != "def" && tok != "module" &&
          tok != "class" && (statement_start || after_assign)) {
        stack.push_back({false, "", 0, line_no});
        line_opened = true;
        continue;
      }
      if (tok == "end") {
        if (stack.empty()) {
          if (stats != nullptr) stats->balanced = false;
          continue;
        }
        Scope s = std::move(stack.back());
        stack.pop_back();
        if (s.is_def) {
          methods.push_back({chain_name(s.name), s.arity, s.header_line,
                             line_no});
        }
        continue;
      }
    }

    // Trailing block: `things.each do |x|`
    if (!line_opened && !tokens.empty()) {
      size_t t = tokens.size();
      // skip a |params| suffix
      if (t >= 2 && tokens[t - 1] == "|") {
        size_t u = t - 2;
        while (u > 0 && tokens[u] != "|") --u;
        if (tokens[u] == "|" && u > 0) t = u;
      }
      if (t >= 1 && tokens[t - 1] == "do") {
        stack.push_back({false, "", 0, line_no});
      }
    }
  }

  if (!stack.empty() && stats != nullptr) stats->balanced = false;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if (it->is_def) {
      methods.push_back({chain_name(it->name), it->arity, it->header_line,
                         line_no});
    }
  }
  return methods;
}

}  // namespace

std::vector<MethodSpan> scan_methods(Language lang, std::string_view source,
                                     ScanStats* stats) {
  switch (lang) {
    case Language::Python:
      return scan_python(source, stats);
    case Language::Ruby:
      return scan_ruby(source, stats);
    default:
      return scan_brace_language(lang, source, stats);
  }
}

}  // namespace wiaszz
