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

#include "randworlds/direct.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "randworlds/dsl.hpp"

namespace randworlds {

const char* justification_name(Justification j) {
  switch (j) {
    case Justification::MostSpecificReferenceClass:
      return "most_specific_reference_class";
    case Justification::IntervalCorollary: return "interval_corollary";
    case Justification::ProductDecomposition: return "product_decomposition";
    case Justification::LogicalZero: return "logical_zero";
    case Justification::EntailedByFacts: return "entailed_by_facts";
  }
  return "most_specific_reference_class";
}

const char* resolve_status_name(ResolveStatus s) {
  switch (s) {
    case ResolveStatus::Resolved: return "resolved";
    case ResolveStatus::NotApplicable: return "not_applicable";
    case ResolveStatus::AmbiguousReferenceClasses:
      return "ambiguous_reference_classes";
    case ResolveStatus::ConditionsUnmet: return "conditions_unmet";
    case ResolveStatus::MissingRule: return "missing_rule";
  }
  return "not_applicable";
}

Rational DirectInferenceResult::value() const {
  Rational half(1, 2);
  if (half < lo) return lo;
  if (half > hi) return hi;
  if (lo == hi) return lo;
  // A genuine two-sided interval straddling 1/2 has no canonical point;
  // report the midpoint of the attested range.
  return (lo + hi) / 2;
}

namespace {

DirectInferenceResult point_result(ResolveStatus status, Justification just,
                                   const Rational& lo, const Rational& hi,
                                   int matched = -1, std::string note = "") {
  DirectInferenceResult r;
  r.status = status;
  r.justification = just;
  r.lo = lo;
  r.hi = hi;
  r.matched_constraint = matched;
  r.note = std::move(note);
  return r;
}

// Interval reading of a single constraint, for selection and results.
void constraint_interval(const ProportionConstraint& c, Rational& lo,
                         Rational& hi) {
  switch (c.relation) {
    case Relation::Approx:
      lo = hi = c.value;
      break;
    case Relation::AtMost:
      lo = 0;
      hi = c.value;
      break;
    case Relation::AtLeast:
      lo = c.value;
      hi = 1;
      break;
  }
}

}  // namespace

DirectInferenceResult resolve(const KnowledgeBase& kb, const Query& query) {
  LiteralClosure known = close_literals(kb.facts_for(query.constant), kb.rules);
  if (known.contradictory) {
    return point_result(ResolveStatus::NotApplicable,
                        Justification::MostSpecificReferenceClass, 0, 1, -1,
                        "facts and rules are contradictory for constant '" +
                            query.constant + "'");
  }

  bool entailed = std::all_of(
      query.target.literals.begin(), query.target.literals.end(),
      [&](const Literal& l) { return known.contains(l); });
  if (entailed) {
    return point_result(ResolveStatus::Resolved, Justification::EntailedByFacts,
                        1, 1);
  }
  bool refuted = std::any_of(
      query.target.literals.begin(), query.target.literals.end(),
      [&](const Literal& l) {
        return known.contains({l.predicate, !l.negated});
      });
  if (refuted) {
    return point_result(ResolveStatus::Resolved, Justification::LogicalZero, 0,
                        0);
  }

  // Constraints about this target whose condition the constant is known
  // to satisfy.
  std::vector<int> matched;
  for (std::size_t i = 0; i < kb.constraints.size(); ++i) {
    const ProportionConstraint& c = kb.constraints[i];
    if (c.target != query.target) continue;
    bool applies = std::all_of(
        c.condition.literals.begin(), c.condition.literals.end(),
        [&](const Literal& l) { return known.contains(l); });
    if (applies) matched.push_back(static_cast<int>(i));
  }
  if (matched.empty()) {
    return point_result(ResolveStatus::NotApplicable,
                        Justification::MostSpecificReferenceClass, 0, 1, -1,
                        "no proportion constraint matches the query");
  }

  // Most specific class: condition entails every other matched condition.
  std::vector<int> maximal;
  for (int i : matched) {
    bool dominated = false;
    for (int j : matched) {
      if (i == j) continue;
      const Conjunction& ci = kb.constraints[i].condition;
      const Conjunction& cj = kb.constraints[j].condition;
      if (entails(cj, ci, kb.rules) && !entails(ci, cj, kb.rules)) {
        dominated = true;  // j is strictly more specific
        break;
      }
    }
    if (!dominated) maximal.push_back(i);
  }
  // Collapse maximal classes with mutually entailing conditions.
  std::vector<int> distinct;
  for (int i : maximal) {
    bool duplicate = false;
    for (int j : distinct) {
      if (entails(kb.constraints[i].condition, kb.constraints[j].condition,
                  kb.rules) &&
          entails(kb.constraints[j].condition, kb.constraints[i].condition,
                  kb.rules) &&
          kb.constraints[i].value == kb.constraints[j].value &&
          kb.constraints[i].relation == kb.constraints[j].relation) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) distinct.push_back(i);
  }
  if (distinct.size() > 1) {
    return point_result(ResolveStatus::AmbiguousReferenceClasses,
                        Justification::MostSpecificReferenceClass, 0, 1, -1,
                        "incomparable maximal reference classes");
  }

  const ProportionConstraint& chosen = kb.constraints[distinct.front()];
  Rational lo, hi;
  constraint_interval(chosen, lo, hi);
  return point_result(ResolveStatus::Resolved,
                      Justification::MostSpecificReferenceClass, lo, hi,
                      distinct.front());
}

DirectInferenceResult total_probability_split(const KnowledgeBase& kb,
                                              const Query& query,
                                              const Conjunction& pivot) {
  if (!entails(query.target, pivot, kb.rules)) {
    return point_result(ResolveStatus::MissingRule,
                        Justification::ProductDecomposition, 0, 1, -1,
                        "rules do not give query => pivot; the complementary "
                        "branch would not vanish");
  }

  // Factor 1: belief in the query given the pivot class.
  KnowledgeBase conditioned = kb;
  for (const Literal& lit : pivot.literals) {
    conditioned.add_fact(query.constant, lit.predicate, lit.negated);
  }
  conditioned.normalize();
  DirectInferenceResult factor1 = resolve(conditioned, query);
  if (!factor1.resolved()) {
    factor1.note = "conditional factor: " + factor1.note;
    return factor1;
  }

  // Factor 2: belief in the pivot itself.
  DirectInferenceResult factor2 = resolve(kb, Query{query.constant, pivot});
  if (!factor2.resolved()) {
    factor2.note = "pivot factor: " + factor2.note;
    return factor2;
  }

  DirectInferenceResult result;
  result.status = ResolveStatus::Resolved;
  result.justification = Justification::ProductDecomposition;
  result.lo = factor1.lo * factor2.lo;
  result.hi = factor1.hi * factor2.hi;
  result.matched_constraint = factor1.matched_constraint;
  result.note = "factors " + format_rational(factor1.value()) + " x " +
                format_rational(factor2.value());
  return result;
}

bool LemmaConditionReport::all() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](bool b) { return b; });
}

namespace {

std::set<std::string> symbols_of(const Conjunction& conj) {
  std::set<std::string> s;
  for (const Literal& l : conj.literals) s.insert(l.predicate);
  return s;
}

bool mentions_any(const Conjunction& conj, const std::set<std::string>& syms) {
  return std::any_of(conj.literals.begin(), conj.literals.end(),
                     [&](const Literal& l) { return syms.count(l.predicate) > 0; });
}

bool decided_by(const Conjunction& phi0, const Conjunction& phi,
                const std::vector<UniversalRule>& rules) {
  return entails(phi0, phi, rules) || refutes(phi0, phi, rules);
}

}  // namespace

LemmaConditionReport check_lemma_conditions(const KnowledgeBase& kb,
                                            const Query& query,
                                            const LemmaRoles& roles) {
  LemmaConditionReport report;
  const auto theta_syms = symbols_of(roles.theta);
  const auto xi_syms = symbols_of(roles.xi);

  // 1: the constant's facts entail phi0.
  report.conditions[0] = entails(kb.facts_for(query.constant), roles.phi0, kb.rules);
  if (!report.conditions[0]) report.details[0] = "facts do not entail phi0";

  // 2: rules give xi => theta.
  report.conditions[1] = entails(roles.xi, roles.theta, kb.rules);
  if (!report.conditions[1]) report.details[1] = "rules do not give xi => theta";

  // 3: every ||theta | phi|| condition is decided by phi0.
  report.conditions[2] = true;
  for (const ProportionConstraint& c : kb.constraints) {
    if (c.target != roles.theta) continue;
    if (!decided_by(roles.phi0, c.condition, kb.rules)) {
      report.conditions[2] = false;
      report.details[2] =
          "phi0 does not decide condition '" + print_conjunction(c.condition) + "'";
    }
  }

  // 4: every ||xi | theta & psi|| side condition psi is decided by phi0.
  report.conditions[3] = true;
  for (const ProportionConstraint& c : kb.constraints) {
    if (c.target != roles.xi) continue;
    bool has_theta = std::all_of(
        roles.theta.literals.begin(), roles.theta.literals.end(),
        [&](const Literal& l) { return c.condition.contains(l); });
    if (!has_theta) continue;  // shape handled under condition 6
    Conjunction psi = c.condition.minus(roles.theta);
    if (!decided_by(roles.phi0, psi, kb.rules)) {
      report.conditions[3] = false;
      report.details[3] =
          "phi0 does not decide side condition '" + print_conjunction(psi) + "'";
    }
  }

  // 5: theta symbols occur only in the xi => theta rule, as targets of the
  // expressions in 3, and inside the theta part of the conditions in 4.
  report.conditions[4] = true;
  auto flag5 = [&](const std::string& where) {
    report.conditions[4] = false;
    if (report.details[4].empty()) {
      report.details[4] = "theta symbol also occurs in " + where;
    }
  };
  for (const UniversalRule& r : kb.rules) {
    if (r.antecedent == roles.xi && r.consequent == roles.theta) continue;
    if (mentions_any(r.antecedent, theta_syms) ||
        mentions_any(r.consequent, theta_syms)) {
      flag5("a rule other than xi => theta");
    }
  }
  for (const ProportionConstraint& c : kb.constraints) {
    if (c.target == roles.theta) {
      if (mentions_any(c.condition, theta_syms)) flag5("a theta-constraint condition");
      continue;
    }
    bool cond4_shape =
        c.target == roles.xi &&
        std::all_of(roles.theta.literals.begin(), roles.theta.literals.end(),
                    [&](const Literal& l) { return c.condition.contains(l); });
    if (cond4_shape) {
      if (mentions_any(c.condition.minus(roles.theta), theta_syms)) {
        flag5("a side condition of a xi-constraint");
      }
      continue;
    }
    if (mentions_any(c.target, theta_syms) ||
        mentions_any(c.condition, theta_syms)) {
      flag5("an unrelated constraint");
    }
  }
  for (const GroundFact& f : kb.facts) {
    if (theta_syms.count(f.literal.predicate) > 0) flag5("a ground fact");
  }

  // 6: xi symbols occur only in the xi => theta rule and as targets of the
  // expressions in 4.
  report.conditions[5] = true;
  auto flag6 = [&](const std::string& where) {
    report.conditions[5] = false;
    if (report.details[5].empty()) {
      report.details[5] = "xi symbol also occurs in " + where;
    }
  };
  for (const UniversalRule& r : kb.rules) {
    if (r.antecedent == roles.xi && r.consequent == roles.theta) continue;
    if (mentions_any(r.antecedent, xi_syms) || mentions_any(r.consequent, xi_syms)) {
      flag6("a rule other than xi => theta");
    }
  }
  for (const ProportionConstraint& c : kb.constraints) {
    bool cond4_shape =
        c.target == roles.xi &&
        std::all_of(roles.theta.literals.begin(), roles.theta.literals.end(),
                    [&](const Literal& l) { return c.condition.contains(l); });
    if (cond4_shape) {
      if (mentions_any(c.condition, xi_syms)) flag6("a xi-constraint condition");
      continue;
    }
    if (mentions_any(c.target, xi_syms) || mentions_any(c.condition, xi_syms)) {
      flag6("an unrelated constraint");
    }
  }
  for (const GroundFact& f : kb.facts) {
    if (xi_syms.count(f.literal.predicate) > 0) flag6("a ground fact");
  }

  return report;
}

DirectInferenceResult resolve_interval(const KnowledgeBase& kb,
                                       const Query& query,
                                       const LemmaRoles& roles) {
  if (query.target != roles.theta) {
    return point_result(ResolveStatus::ConditionsUnmet,
                        Justification::IntervalCorollary, 0, 1, -1,
                        "query target is not the theta role");
  }
  LemmaConditionReport report = check_lemma_conditions(kb, query, roles);
  if (!report.all()) {
    std::string detail;
    for (std::size_t i = 0; i < 6; ++i) {
      if (!report.conditions[i]) {
        detail = "condition " + std::to_string(i + 1) + ": " + report.details[i];
        break;
      }
    }
    return point_result(ResolveStatus::ConditionsUnmet,
                        Justification::IntervalCorollary, 0, 1, -1, detail);
  }

  // Intersect every ||theta | phi0|| statement (conditions equivalent to
  // phi0 under the rules).
  Rational lo(0), hi(1);
  int matched = -1;
  for (std::size_t i = 0; i < kb.constraints.size(); ++i) {
    const ProportionConstraint& c = kb.constraints[i];
    if (c.target != roles.theta) continue;
    if (!entails(roles.phi0, c.condition, kb.rules) ||
        !entails(c.condition, roles.phi0, kb.rules)) {
      continue;
    }
    Rational clo, chi;
    constraint_interval(c, clo, chi);
    lo = std::max(lo, clo);
    hi = std::min(hi, chi);
    matched = static_cast<int>(i);
  }
  if (matched < 0) {
    return point_result(ResolveStatus::ConditionsUnmet,
                        Justification::IntervalCorollary, 0, 1, -1,
                        "no ||theta | phi0|| constraint present");
  }
  if (lo > hi) {
    return point_result(ResolveStatus::ConditionsUnmet,
                        Justification::IntervalCorollary, 0, 1, -1,
                        "interval constraints are mutually inconsistent");
  }
  return point_result(ResolveStatus::Resolved, Justification::IntervalCorollary,
                      lo, hi, matched);
}

nlohmann::json result_to_json(const DirectInferenceResult& result,
                              const KnowledgeBase& kb,
                              const std::vector<SourceSpan>* spans) {
  nlohmann::json j;
  j["status"] = resolve_status_name(result.status);
  j["justification"] = justification_name(result.justification);
  j["lo"] = format_rational(result.lo);
  j["hi"] = format_rational(result.hi);
  j["value"] = format_rational(result.value());
  j["value_decimal"] = to_double(result.value());
  if (!result.note.empty()) j["note"] = result.note;
  if (result.matched_constraint >= 0) {
    const ProportionConstraint& c =
        kb.constraints[static_cast<std::size_t>(result.matched_constraint)];
    nlohmann::json cj;
    cj["index"] = result.matched_constraint;
    cj["text"] = "||" + print_conjunction(c.target) + " | " +
                 print_conjunction(c.condition) + "||x " +
                 relation_token(c.relation) + " " + format_rational(c.value);
    if (spans &&
        static_cast<std::size_t>(result.matched_constraint) < spans->size()) {
      const SourceSpan& span = (*spans)[result.matched_constraint];
      cj["span"] = {{"begin", span.begin},
                    {"end", span.end},
                    {"line", span.line},
                    {"column", span.column}};
    }
    j["matched_constraint"] = cj;
  }
  return j;
}

}  // namespace randworlds
