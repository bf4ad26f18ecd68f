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

// Test-only oracle: counts worlds by visiting every profile assignment
// individually (2^(kN) worlds). Deliberately shares nothing with the
// grouped counter beyond the kb-core satisfies() primitive.

#ifndef RANDWORLDS_TESTS_NAIVE_ORACLE_HPP_
#define RANDWORLDS_TESTS_NAIVE_ORACLE_HPP_

#include <vector>

#include "randworlds/kb.hpp"

namespace randworlds::testing {

struct NaiveTables {
  int num_profiles = 0;
  std::vector<char> profile_ok;                 // satisfies every rule
  std::vector<std::vector<char>> in_condition;  // [constraint][profile]
  std::vector<std::vector<char>> in_target;     // condition & target
  std::vector<std::vector<char>> constant_ok;   // [constant][profile]
};

inline NaiveTables build_tables(const KnowledgeBase& kb) {
  NaiveTables t;
  auto profiles = atom_profiles(kb.vocabulary);
  t.num_profiles = static_cast<int>(profiles.size());
  t.profile_ok.assign(t.num_profiles, 1);
  for (int p = 0; p < t.num_profiles; ++p) {
    for (const UniversalRule& rule : kb.rules) {
      if (satisfies(profiles[p], kb.vocabulary, rule.antecedent) &&
          !satisfies(profiles[p], kb.vocabulary, rule.consequent)) {
        t.profile_ok[p] = 0;
      }
    }
  }
  for (const ProportionConstraint& c : kb.constraints) {
    std::vector<char> cond(t.num_profiles), tgt(t.num_profiles);
    for (int p = 0; p < t.num_profiles; ++p) {
      cond[p] = satisfies(profiles[p], kb.vocabulary, c.condition);
      tgt[p] = cond[p] && satisfies(profiles[p], kb.vocabulary, c.target);
    }
    t.in_condition.push_back(std::move(cond));
    t.in_target.push_back(std::move(tgt));
  }
  for (const Constant& constant : kb.constants) {
    Conjunction facts = kb.facts_for(constant.name);
    std::vector<char> ok(t.num_profiles);
    for (int p = 0; p < t.num_profiles; ++p) {
      ok[p] = satisfies(profiles[p], kb.vocabulary, facts);
    }
    t.constant_ok.push_back(std::move(ok));
  }
  return t;
}

// Exact count of worlds of size N satisfying the KB, one world at a time.
inline BigInt naive_count_models(const KnowledgeBase& kb, int N,
                                 const ToleranceSpec& taus) {
  NaiveTables t = build_tables(kb);
  const int C = static_cast<int>(kb.constants.size());
  const std::size_t num_constraints = kb.constraints.size();

  // Window bounds as cross-multiplication thresholds.
  std::vector<Rational> lo(num_constraints), hi(num_constraints);
  for (std::size_t i = 0; i < num_constraints; ++i) {
    const ProportionConstraint& c = kb.constraints[i];
    const Rational& tau = taus.tau_for(c.tolerance_index);
    lo[i] = c.value - tau;
    hi[i] = c.value + tau;
  }

  std::vector<int> world(N, 0);
  BigInt count = 0;
  while (true) {
    bool ok = true;
    for (int e = 0; ok && e < N; ++e) ok = t.profile_ok[world[e]];
    for (int ci = 0; ok && ci < C; ++ci) ok = t.constant_ok[ci][world[ci]];
    for (std::size_t i = 0; ok && i < num_constraints; ++i) {
      long long in_cond = 0, in_tgt = 0;
      for (int e = 0; e < N; ++e) {
        in_cond += t.in_condition[i][world[e]];
        in_tgt += t.in_target[i][world[e]];
      }
      if (in_cond == 0) {
        ok = false;  // empty reference class excludes the world
        continue;
      }
      Rational proportion(in_tgt, in_cond);
      switch (kb.constraints[i].relation) {
        case Relation::Approx:
          ok = proportion >= lo[i] && proportion <= hi[i];
          break;
        case Relation::AtMost:
          ok = proportion <= hi[i];
          break;
        case Relation::AtLeast:
          ok = proportion >= lo[i];
          break;
      }
    }
    if (ok) ++count;

    int e = N - 1;
    while (e >= 0 && world[e] == t.num_profiles - 1) world[e--] = 0;
    if (e < 0) break;
    ++world[e];
  }
  return count;
}

}  // namespace randworlds::testing

#endif  // RANDWORLDS_TESTS_NAIVE_ORACLE_HPP_
