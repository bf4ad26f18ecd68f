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

#ifndef RANDWORLDS_KB_HPP_
#define RANDWORLDS_KB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randworlds/rational.hpp"

namespace randworlds {

// The knowledge-base fragment: unary predicates over a single implicit
// variable, named constants, universal conjunction-to-conjunction rules,
// and toleranced conditional proportion constraints. Binary predicates
// from source problems are curried against a fixed constant before they
// reach this layer, so arity is always 1.

struct PredicateSymbol {
  std::string name;
  // Documentation-only note when the predicate was curried from a binary
  // one, e.g. "Mistress(., John)".
  std::optional<std::string> curried_from;

  friend bool operator==(const PredicateSymbol& a, const PredicateSymbol& b) {
    return a.name == b.name;
  }
};

struct Constant {
  std::string name;
  friend bool operator==(const Constant& a, const Constant& b) = default;
};

struct Literal {
  std::string predicate;
  bool negated = false;
  friend bool operator==(const Literal& a, const Literal& b) = default;
  friend auto operator<=>(const Literal& a, const Literal& b) = default;
};

// Ordered set of literals; the empty conjunction denotes truth.
// Literals are kept sorted by predicate name; a predicate may appear
// at most once (validated, not silently repaired).
struct Conjunction {
  std::vector<Literal> literals;

  Conjunction() = default;
  explicit Conjunction(std::vector<Literal> lits);

  bool empty() const { return literals.empty(); }
  bool contains(const Literal& lit) const;
  bool mentions(const std::string& predicate) const;

  // Conjunction of the two literal sets (duplicates collapse).
  Conjunction conjoin(const Conjunction& other) const;
  // Literals of *this not present in `other` (by predicate).
  Conjunction minus(const Conjunction& other) const;

  friend bool operator==(const Conjunction& a, const Conjunction& b) = default;
};

struct UniversalRule {
  Conjunction antecedent;
  Conjunction consequent;
  friend bool operator==(const UniversalRule& a, const UniversalRule& b) = default;
};

enum class Relation { Approx, AtMost, AtLeast };

const char* relation_token(Relation r);

// One ||target | condition||_x <rel> value statement.
struct ProportionConstraint {
  Conjunction target;
  Conjunction condition;
  Relation relation = Relation::Approx;
  Rational value;
  std::size_t tolerance_index = 0;
  friend bool operator==(const ProportionConstraint& a,
                         const ProportionConstraint& b) = default;
};

struct GroundFact {
  std::string constant;
  Literal literal;
  friend bool operator==(const GroundFact& a, const GroundFact& b) = default;
  friend auto operator<=>(const GroundFact& a, const GroundFact& b) = default;
};

// Per-index tolerance widths for the approximate relations.
struct ToleranceSpec {
  std::vector<Rational> taus;

  static ToleranceSpec uniform(const Rational& tau, std::size_t count);
  const Rational& tau_for(std::size_t index) const;
  friend bool operator==(const ToleranceSpec& a, const ToleranceSpec& b) = default;
};

struct KnowledgeBase {
  std::vector<PredicateSymbol> vocabulary;  // sorted by name
  std::vector<Constant> constants;          // sorted by name
  std::vector<UniversalRule> rules;
  std::vector<ProportionConstraint> constraints;
  std::vector<GroundFact> facts;            // sorted

  bool has_predicate(const std::string& name) const;
  bool has_constant(const std::string& name) const;
  void add_predicate(const std::string& name,
                     std::optional<std::string> curried_from = std::nullopt);
  void add_constant(const std::string& name);
  void add_fact(const std::string& constant, const std::string& predicate,
                bool negated = false);

  // Restores the sorted-canonical invariants after direct field edits.
  void normalize();

  // All fact literals recorded for `constant`.
  Conjunction facts_for(const std::string& constant) const;

  std::size_t max_tolerance_index() const;

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b);
};

struct Query {
  std::string constant;
  Conjunction target;
  friend bool operator==(const Query& a, const Query& b) = default;
};

struct Violation {
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks declaration closure, contradictory fact pairs, duplicate
// predicates inside conjunctions, constraint values in [0,1], empty rules.
ValidationReport validate_kb(const KnowledgeBase& kb);

ValidationReport validate_query(const KnowledgeBase& kb, const Query& query);

// ---------------------------------------------------------------------------
// Atom profiles: truth assignments over the whole (sorted) vocabulary.

struct AtomProfile {
  std::uint32_t bits = 0;  // bit i = truth value of vocabulary[i]
  int width = 0;

  bool holds(int predicate_index) const {
    return (bits >> predicate_index) & 1u;
  }
  friend bool operator==(const AtomProfile& a, const AtomProfile& b) = default;
};

inline constexpr int kDefaultProfileCap = 16;

// All 2^k profiles in binary-counter order. Throws std::invalid_argument
// when the vocabulary exceeds `cap` predicates.
std::vector<AtomProfile> atom_profiles(
    const std::vector<PredicateSymbol>& vocabulary, int cap = kDefaultProfileCap);

// True iff every literal of `formula` holds under the profile. Throws
// std::invalid_argument on a predicate missing from the vocabulary.
bool satisfies(const AtomProfile& profile,
               const std::vector<PredicateSymbol>& vocabulary,
               const Conjunction& formula);

// ---------------------------------------------------------------------------
// Syntactic consequence under the universal rules. Forward chaining over
// literal sets, plus the contrapositive of single-antecedent rules; this
// covers all rule shapes the engine's source material uses.

struct LiteralClosure {
  std::vector<Literal> literals;  // sorted, deduped
  bool contradictory = false;

  bool contains(const Literal& lit) const;
};

LiteralClosure close_literals(const Conjunction& start,
                              const std::vector<UniversalRule>& rules);

// rules |- forall x (a => b)
bool entails(const Conjunction& a, const Conjunction& b,
             const std::vector<UniversalRule>& rules);

// rules |- forall x (a => not b), witnessed by the closure of `a`
// containing the negation of some literal of `b`.
bool refutes(const Conjunction& a, const Conjunction& b,
             const std::vector<UniversalRule>& rules);

}  // namespace randworlds

#endif  // RANDWORLDS_KB_HPP_
