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

#include "randworlds/kb.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace randworlds {

Conjunction::Conjunction(std::vector<Literal> lits) : literals(std::move(lits)) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
}

bool Conjunction::contains(const Literal& lit) const {
  return std::binary_search(literals.begin(), literals.end(), lit);
}

bool Conjunction::mentions(const std::string& predicate) const {
  return std::any_of(literals.begin(), literals.end(),
                     [&](const Literal& l) { return l.predicate == predicate; });
}

Conjunction Conjunction::conjoin(const Conjunction& other) const {
  std::vector<Literal> lits = literals;
  lits.insert(lits.end(), other.literals.begin(), other.literals.end());
  return Conjunction(std::move(lits));
}

Conjunction Conjunction::minus(const Conjunction& other) const {
  std::vector<Literal> lits;
  for (const Literal& l : literals) {
    if (!other.mentions(l.predicate)) lits.push_back(l);
  }
  return Conjunction(std::move(lits));
}

const char* relation_token(Relation r) {
  switch (r) {
    case Relation::Approx: return "~=";
    case Relation::AtMost: return "<=~";
    case Relation::AtLeast: return ">=~";
  }
  return "~=";
}

ToleranceSpec ToleranceSpec::uniform(const Rational& tau, std::size_t count) {
  ToleranceSpec spec;
  spec.taus.assign(count == 0 ? 1 : count, tau);
  return spec;
}

const Rational& ToleranceSpec::tau_for(std::size_t index) const {
  if (index >= taus.size()) {
    throw std::out_of_range("tolerance index out of range");
  }
  return taus[index];
}

bool KnowledgeBase::has_predicate(const std::string& name) const {
  return std::any_of(vocabulary.begin(), vocabulary.end(),
                     [&](const PredicateSymbol& p) { return p.name == name; });
}

bool KnowledgeBase::has_constant(const std::string& name) const {
  return std::any_of(constants.begin(), constants.end(),
                     [&](const Constant& c) { return c.name == name; });
}

void KnowledgeBase::add_predicate(const std::string& name,
                                  std::optional<std::string> curried_from) {
  if (!has_predicate(name)) {
    vocabulary.push_back({name, std::move(curried_from)});
  }
}

void KnowledgeBase::add_constant(const std::string& name) {
  if (!has_constant(name)) constants.push_back({name});
}

void KnowledgeBase::add_fact(const std::string& constant,
                             const std::string& predicate, bool negated) {
  facts.push_back({constant, {predicate, negated}});
}

void KnowledgeBase::normalize() {
  std::sort(vocabulary.begin(), vocabulary.end(),
            [](const PredicateSymbol& a, const PredicateSymbol& b) {
              return a.name < b.name;
            });
  std::sort(constants.begin(), constants.end(),
            [](const Constant& a, const Constant& b) { return a.name < b.name; });
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
}

Conjunction KnowledgeBase::facts_for(const std::string& constant) const {
  std::vector<Literal> lits;
  for (const GroundFact& f : facts) {
    if (f.constant == constant) lits.push_back(f.literal);
  }
  return Conjunction(std::move(lits));
}

std::size_t KnowledgeBase::max_tolerance_index() const {
  std::size_t m = 0;
  for (const ProportionConstraint& c : constraints) {
    m = std::max(m, c.tolerance_index);
  }
  return m;
}

bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
  return a.vocabulary == b.vocabulary && a.constants == b.constants &&
         a.rules == b.rules && a.constraints == b.constraints &&
         a.facts == b.facts;
}

namespace {

void check_conjunction(const KnowledgeBase& kb, const Conjunction& conj,
                       const std::string& where, ValidationReport& report) {
  std::unordered_set<std::string> seen;
  for (const Literal& lit : conj.literals) {
    if (!kb.has_predicate(lit.predicate)) {
      report.violations.push_back(
          {"undeclared predicate '" + lit.predicate + "' in " + where});
    }
    if (!seen.insert(lit.predicate).second) {
      report.violations.push_back(
          {"predicate '" + lit.predicate + "' repeated in " + where});
    }
  }
}

}  // namespace

ValidationReport validate_kb(const KnowledgeBase& kb) {
  ValidationReport report;

  std::unordered_set<std::string> names;
  for (const PredicateSymbol& p : kb.vocabulary) {
    if (!names.insert(p.name).second) {
      report.violations.push_back({"duplicate predicate '" + p.name + "'"});
    }
  }
  names.clear();
  for (const Constant& c : kb.constants) {
    if (!names.insert(c.name).second) {
      report.violations.push_back({"duplicate constant '" + c.name + "'"});
    }
  }

  for (const UniversalRule& rule : kb.rules) {
    if (rule.antecedent.empty() && rule.consequent.empty()) {
      report.violations.push_back({"rule with both sides empty"});
    }
    check_conjunction(kb, rule.antecedent, "rule antecedent", report);
    check_conjunction(kb, rule.consequent, "rule consequent", report);
  }

  for (const ProportionConstraint& c : kb.constraints) {
    check_conjunction(kb, c.target, "constraint target", report);
    check_conjunction(kb, c.condition, "constraint condition", report);
    if (c.target.empty()) {
      report.violations.push_back({"constraint with empty target"});
    }
    if (c.value < 0 || c.value > 1) {
      report.violations.push_back(
          {"constraint value " + format_rational(c.value) + " outside [0,1]"});
    }
  }

  for (const GroundFact& f : kb.facts) {
    if (!kb.has_constant(f.constant)) {
      report.violations.push_back({"undeclared constant '" + f.constant + "'"});
    }
    if (!kb.has_predicate(f.literal.predicate)) {
      report.violations.push_back(
          {"undeclared predicate '" + f.literal.predicate + "' in fact"});
    }
  }
  for (std::size_t i = 0; i < kb.facts.size(); ++i) {
    for (std::size_t j = i + 1; j < kb.facts.size(); ++j) {
      const GroundFact& a = kb.facts[i];
      const GroundFact& b = kb.facts[j];
      if (a.constant == b.constant &&
          a.literal.predicate == b.literal.predicate &&
          a.literal.negated != b.literal.negated) {
        report.violations.push_back({"contradictory facts for constant '" +
                                     a.constant + "' on predicate '" +
                                     a.literal.predicate + "'"});
      }
    }
  }
  return report;
}

ValidationReport validate_query(const KnowledgeBase& kb, const Query& query) {
  ValidationReport report;
  if (!kb.has_constant(query.constant)) {
    report.violations.push_back(
        {"unknown constant '" + query.constant + "' in query"});
  }
  check_conjunction(kb, query.target, "query target", report);
  if (query.target.empty()) {
    report.violations.push_back({"empty query target"});
  }
  return report;
}

std::vector<AtomProfile> atom_profiles(
    const std::vector<PredicateSymbol>& vocabulary, int cap) {
  const int k = static_cast<int>(vocabulary.size());
  if (k > cap) {
    throw std::invalid_argument("vocabulary size " + std::to_string(k) +
                                " exceeds profile cap " + std::to_string(cap));
  }
  std::vector<AtomProfile> profiles;
  profiles.reserve(std::size_t{1} << k);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << k); ++bits) {
    profiles.push_back({bits, k});
  }
  return profiles;
}

bool satisfies(const AtomProfile& profile,
               const std::vector<PredicateSymbol>& vocabulary,
               const Conjunction& formula) {
  for (const Literal& lit : formula.literals) {
    auto it = std::find_if(
        vocabulary.begin(), vocabulary.end(),
        [&](const PredicateSymbol& p) { return p.name == lit.predicate; });
    if (it == vocabulary.end()) {
      throw std::invalid_argument("unknown predicate '" + lit.predicate + "'");
    }
    int index = static_cast<int>(it - vocabulary.begin());
    if (profile.holds(index) == lit.negated) return false;
  }
  return true;
}

bool LiteralClosure::contains(const Literal& lit) const {
  return std::binary_search(literals.begin(), literals.end(), lit);
}

LiteralClosure close_literals(const Conjunction& start,
                              const std::vector<UniversalRule>& rules) {
  LiteralClosure closure;
  closure.literals = start.literals;

  auto holds = [&](const Literal& lit) {
    return std::binary_search(closure.literals.begin(), closure.literals.end(),
                              lit);
  };
  auto add = [&](const Literal& lit) {
    if (holds(lit)) return false;
    closure.literals.insert(
        std::lower_bound(closure.literals.begin(), closure.literals.end(), lit),
        lit);
    if (holds({lit.predicate, !lit.negated})) closure.contradictory = true;
    return true;
  };

  for (const Literal& lit : start.literals) {
    if (holds({lit.predicate, !lit.negated})) closure.contradictory = true;
  }

  bool changed = true;
  while (changed && !closure.contradictory) {
    changed = false;
    for (const UniversalRule& rule : rules) {
      bool ante = std::all_of(rule.antecedent.literals.begin(),
                              rule.antecedent.literals.end(), holds);
      if (ante) {
        for (const Literal& lit : rule.consequent.literals) {
          changed |= add(lit);
        }
      }
      // Contrapositive, available only for a single-literal antecedent
      // (negating a larger antecedent would leave the conjunctive fragment).
      if (rule.antecedent.literals.size() == 1) {
        const Literal& a = rule.antecedent.literals[0];
        for (const Literal& lit : rule.consequent.literals) {
          if (holds({lit.predicate, !lit.negated})) {
            changed |= add({a.predicate, !a.negated});
          }
        }
      }
    }
  }
  return closure;
}

bool entails(const Conjunction& a, const Conjunction& b,
             const std::vector<UniversalRule>& rules) {
  LiteralClosure closure = close_literals(a, rules);
  if (closure.contradictory) return true;
  return std::all_of(b.literals.begin(), b.literals.end(),
                     [&](const Literal& l) { return closure.contains(l); });
}

bool refutes(const Conjunction& a, const Conjunction& b,
             const std::vector<UniversalRule>& rules) {
  LiteralClosure closure = close_literals(a, rules);
  if (closure.contradictory) return true;
  return std::any_of(b.literals.begin(), b.literals.end(), [&](const Literal& l) {
    return closure.contains({l.predicate, !l.negated});
  });
}

}  // namespace randworlds
