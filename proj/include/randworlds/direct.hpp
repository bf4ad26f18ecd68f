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

#ifndef RANDWORLDS_DIRECT_HPP_
#define RANDWORLDS_DIRECT_HPP_

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "randworlds/kb.hpp"

namespace randworlds {

struct SourceSpan;  // dsl.hpp

// Closed-form degree-of-belief resolution by reference-class selection.
// Purely syntactic over the KB; never invokes the enumeration engine, so
// the two paths can check each other.

enum class Justification {
  MostSpecificReferenceClass,
  IntervalCorollary,
  ProductDecomposition,
  LogicalZero,
  EntailedByFacts,
};

enum class ResolveStatus {
  Resolved,
  NotApplicable,               // no matching reference class; fall back
  AmbiguousReferenceClasses,   // incomparable maximal matches
  ConditionsUnmet,             // interval-rule preconditions failed
  MissingRule,                 // product split without query => pivot
};

const char* justification_name(Justification j);
const char* resolve_status_name(ResolveStatus s);

struct DirectInferenceResult {
  ResolveStatus status = ResolveStatus::NotApplicable;
  Justification justification = Justification::MostSpecificReferenceClass;
  Rational lo;  // interval [lo, hi] within [0,1]
  Rational hi;
  int matched_constraint = -1;  // index into kb.constraints, when one matched
  std::string note;

  bool resolved() const { return status == ResolveStatus::Resolved; }
  bool is_point() const { return lo == hi; }

  // Point reading of the result: the proportion an at-most/at-least
  // statistic concentrates on is the interval endpoint nearest 1/2, which
  // is also the exact value for degenerate intervals.
  Rational value() const;
};

// Selects the unique most-specific proportion constraint whose target is
// the query target and whose condition follows from the constant's facts
// under the rules. Specificity is syntactic entailment between conditions;
// incomparable maximal matches yield AmbiguousReferenceClasses. Returns
// value 1 when the facts entail the query and LogicalZero when they refute
// it.
DirectInferenceResult resolve(const KnowledgeBase& kb, const Query& query);

// belief(query) = belief(query | pivot) * belief(pivot), valid when the
// rules give query => pivot (the complementary branch is annihilated).
// Both factors are resolved independently via resolve().
DirectInferenceResult total_probability_split(const KnowledgeBase& kb,
                                              const Query& query,
                                              const Conjunction& pivot);

struct LemmaRoles {
  Conjunction phi0;   // the constant's known class
  Conjunction theta;  // intermediate property, e.g. Access
  Conjunction xi;     // target, e.g. Copy
};

struct LemmaConditionReport {
  std::array<bool, 6> conditions{};
  std::array<std::string, 6> details{};

  bool all() const;
};

// Syntactic check of the six applicability conditions for the interval
// rule: the facts entail phi0, the rules give xi => theta, every
// ||theta|phi|| condition is decided by phi0, every ||xi|theta&psi|| side
// condition is decided by phi0, and the theta/xi symbols occur nowhere
// else in the KB.
LemmaConditionReport check_lemma_conditions(const KnowledgeBase& kb,
                                            const Query& query,
                                            const LemmaRoles& roles);

// When the six conditions hold and the KB constrains ||theta|phi0|| to an
// interval [a,b], the degree of belief in theta(c) lies in [a,b].
DirectInferenceResult resolve_interval(const KnowledgeBase& kb,
                                       const Query& query,
                                       const LemmaRoles& roles);

// Optional constraint spans (from the DSL) attach the matched statement's
// source location.
nlohmann::json result_to_json(const DirectInferenceResult& result,
                              const KnowledgeBase& kb,
                              const std::vector<SourceSpan>* spans = nullptr);

}  // namespace randworlds

#endif  // RANDWORLDS_DIRECT_HPP_
