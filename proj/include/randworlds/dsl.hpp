// Copyright 2026 The randworlds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RANDWORLDS_DSL_HPP_
#define RANDWORLDS_DSL_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randworlds/kb.hpp"

namespace randworlds {

// Textual format (.rwkb), one declaration per statement:
//
//   pred NAME;
//   const NAME;
//   fact [not] NAME(CONST);
//   rule forall x: CONJ => CONJ;
//   stat ||CONJ | CONJ||x (~= | <=~ | >=~) RATIONAL [tol INDEX];
//
// with CONJ = `true` | [not] NAME(x) { & [not] NAME(x) }, rationals as
// decimals or fractions (stored exactly), and `#` comments to end of line.

struct SourceSpan {
  std::size_t begin = 0;  // byte offsets, begin <= end
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::string expected;  // token hint, may be empty
};

struct ParseResult {
  std::optional<KnowledgeBase> kb;
  std::vector<ParseError> errors;       // syntax + value-range errors
  ValidationReport validation;          // semantic issues on the parsed KB
  // Source span of each parsed `stat` statement, aligned with
  // kb->constraints; used to report which statement a resolver matched.
  std::vector<SourceSpan> constraint_spans;

  bool ok() const { return kb.has_value() && errors.empty() && validation.ok(); }
};

struct QueryParseResult {
  std::optional<Query> query;
  std::vector<ParseError> errors;
  bool ok() const { return query.has_value() && errors.empty(); }
};

ParseResult parse_kb(const std::string& text);

// Query syntax: [not] NAME(CONST) { & [not] NAME(CONST) }, one constant.
QueryParseResult parse_query(const std::string& text, const KnowledgeBase& kb);

// Canonical text; parse_kb(print_kb(kb)) is structurally equal to kb.
std::string print_kb(const KnowledgeBase& kb);

std::string print_conjunction(const Conjunction& conj);
std::string print_query(const Query& query);

// JSON mirrors the type fields one-to-one; rationals as "num/den" strings.
nlohmann::json kb_to_json(const KnowledgeBase& kb);
KnowledgeBase kb_from_json(const nlohmann::json& j);
nlohmann::json query_to_json(const Query& query);
Query query_from_json(const nlohmann::json& j);

}  // namespace randworlds

#endif  // RANDWORLDS_DSL_HPP_
