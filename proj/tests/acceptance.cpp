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

// End-to-end acceptance checks, one printed line per criterion. Every
// tolerance is pinned here; a nonzero exit means at least one failed.

#include <chrono>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kb_gen.hpp"
#include "naive_oracle.hpp"
#include "randworlds/direct.hpp"
#include "randworlds/dsl.hpp"
#include "randworlds/engine.hpp"
#include "randworlds/scenarios.hpp"

using namespace randworlds;
using randworlds::testing::naive_count_models;
using randworlds::testing::random_kb;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << index << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ToleranceSpec taus_for(const KnowledgeBase& kb, const Rational& tau) {
  return ToleranceSpec::uniform(tau, kb.max_tolerance_index() + 1);
}

// 1. Grouped counting equals one-world-at-a-time enumeration on 50
// randomized KBs with k <= 3 predicates at domain sizes up to 8.
void criterion1() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> n_dist(2, 8);
  int agreements = 0;
  for (int trial = 0; trial < 50; ++trial) {
    KnowledgeBase kb = random_kb(rng);
    int N = std::max(n_dist(rng), static_cast<int>(kb.constants.size()));
    ToleranceSpec taus = taus_for(kb, Rational(1, 8));
    if (count_models(kb, N, taus) == naive_count_models(kb, N, taus)) {
      ++agreements;
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << agreements << "/50 agree, " << elapsed << "s";
  report(1, "grouped counting matches the naive oracle",
         agreements == 50 && elapsed < 120.0, detail.str());
}

// 2. Murder mystery: 3/5 exactly from the resolver on the basic and
// extended KBs, 1/20 and 49/50 on the variants, and the N=60 enumeration
// within 3/100 of 3/5 after an oracle spot-check at N=8.
void criterion2() {
  auto start = std::chrono::steady_clock::now();
  const Query jane{"Jane", Conjunction({{"Murderer", false}})};
  bool ok = true;
  std::ostringstream detail;

  DirectInferenceResult basic =
      resolve(build_mistress_kb(MistressVariant::Basic), jane);
  DirectInferenceResult extended =
      resolve(build_mistress_kb(MistressVariant::Extended), jane);
  DirectInferenceResult no_apartment =
      resolve(build_mistress_kb(MistressVariant::NoApartment), jane);
  DirectInferenceResult smoking =
      resolve(build_mistress_kb(MistressVariant::SmokingGun), jane);
  ok = ok && basic.resolved() && basic.value() == Rational(3, 5);
  ok = ok && extended.resolved() && extended.value() == Rational(3, 5);
  ok = ok && no_apartment.resolved() && no_apartment.value() == Rational(1, 20);
  ok = ok && smoking.resolved() && smoking.value() == Rational(49, 50);

  KnowledgeBase kb = build_mistress_kb(MistressVariant::Basic);
  ToleranceSpec small_taus = taus_for(kb, Rational(1, 5));
  ok = ok && count_models(kb, 8, small_taus) ==
                 naive_count_models(kb, 8, small_taus);

  BeliefEstimate estimate = belief(kb, jane, 60, taus_for(kb, Rational(1, 50)));
  ok = ok && abs(estimate.value - Rational(3, 5)) <= Rational(3, 100);
  detail << "N=60 belief " << format_rational(estimate.value);

  double elapsed = seconds_since(start);
  detail << ", " << elapsed << "s";
  report(2, "murder mystery resolves to 3/5 and enumeration approaches it",
         ok && elapsed < 60.0, detail.str());
}

// 3. A query refuted by facts and rules has belief exactly zero on both
// paths, at every scheduled domain size.
void criterion3() {
  KnowledgeBase kb;
  kb.add_predicate("Access");
  kb.add_predicate("Copy");
  kb.add_constant("xd");
  kb.rules.push_back(
      {Conjunction({{"Copy", false}}), Conjunction({{"Access", false}})});
  kb.add_fact("xd", "Access", true);
  kb.normalize();
  const Query copy{"xd", Conjunction({{"Copy", false}})};

  DirectInferenceResult direct = resolve(kb, copy);
  bool ok = direct.resolved() &&
            direct.justification == Justification::LogicalZero &&
            direct.value() == 0;
  for (const SchedulePoint& point : default_schedule(kb)) {
    BeliefEstimate estimate = belief(kb, copy, point.N, point.taus);
    ok = ok && estimate.value == 0;
  }
  report(3, "logically refuted query is zero by resolver and enumeration", ok);
}

// 4. Striking similarity with (rho, sigma) = (9/10, 4/5): the product
// decomposition gives exactly 18/25 and the N=40 enumeration is within
// 7/100 of it.
void criterion4() {
  KnowledgeBase kb = build_striking_kb(Rational(9, 10), Rational(4, 5));
  const Query copy{"xd", Conjunction({{"Copy", false}})};
  DirectInferenceResult split =
      total_probability_split(kb, copy, Conjunction({{"Access", false}}));
  bool ok = split.resolved() && split.value() == Rational(18, 25);

  BeliefEstimate estimate = belief(kb, copy, 40, taus_for(kb, Rational(1, 20)));
  ok = ok && abs(estimate.value - Rational(18, 25)) <= Rational(7, 100);
  report(4, "product decomposition gives 18/25 and enumeration agrees", ok,
         "N=40 belief " + format_rational(estimate.value));
}

// 5. Over 1000 random monotone grids the evidence/similarity trade-off
// has no counterexamples.
void criterion5() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> step(0, 5);
  std::uniform_int_distribution<int> lambda_num(1, 47);
  int clean = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = dim(rng), m = dim(rng);
    std::vector<Rational> alphas;
    Rational a(0);
    for (int i = 0; i < n; ++i) {
      a = std::min(a + Rational(step(rng), 48), Rational(1));
      alphas.push_back(a);
    }
    std::vector<std::vector<Rational>> betas(n, std::vector<Rational>(m));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        Rational floor = i > 0 ? betas[i - 1][j] : Rational(0);
        if (j > 0) floor = std::max(floor, betas[i][j - 1]);
        betas[i][j] = std::min(floor + Rational(step(rng), 48), Rational(1));
      }
    }
    IrrConfig config{SimilarityGrid(std::move(alphas)),
                     EvidenceGrid(std::move(betas)),
                     Rational(lambda_num(rng), 48)};
    if (check_prop1(config).ok()) ++clean;
  }
  double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << clean << "/1000 clean, " << elapsed << "s";
  report(5, "inverse ratio rule holds on random monotone grids",
         clean == 1000 && elapsed < 30.0, detail.str());
}

// 6. Ceiling properties on a 1000-point rational (epsilon, delta) grid,
// plus monotonicity of the copy bound in the privacy budget.
void criterion6() {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> eps_num(1, 400);
  std::uniform_int_distribution<int> delta_num(0, 96);
  std::set<Rational> eps_set, delta_set;
  while (eps_set.size() < 40) eps_set.insert(Rational(eps_num(rng), 100));
  delta_set.insert(Rational(0));
  delta_set.insert(Rational(1));
  while (delta_set.size() < 25) delta_set.insert(Rational(delta_num(rng), 96));
  std::vector<Rational> epsilons(eps_set.begin(), eps_set.end());
  std::vector<Rational> deltas(delta_set.begin(), delta_set.end());

  Prop2Report grid = check_prop2(epsilons, deltas, GammaSpec{});
  bool ok = grid.ok() && grid.points_checked == 1000;

  for (const Rational& eps : epsilons) {
    if (Gamma(eps, Rational(1), GammaSpec{}) != 1) ok = false;
  }

  std::vector<Rational> alphas{Rational(1, 4), Rational(3, 4)};
  for (std::size_t i = 1; i <= 2; ++i) {
    std::optional<Rational> previous;
    for (const Rational& eps : epsilons) {
      NafConfig config(eps, Rational(3, 10), alphas);
      Rational bound = naf_copy_bound(config, i);
      if (previous && bound < *previous) ok = false;
      previous = bound;
    }
  }
  report(6, "posterior ceiling bounds and monotonicity hold exactly", ok,
         std::to_string(grid.points_checked) + " grid points");
}

// 7. Bayes audit: the two-outcome model is tight at gamma* = 8/5 with
// posterior and ceiling both 8/13; random models never beat the ceiling.
void criterion7() {
  OutcomeModel model({"near_copy", "other"}, {Rational(4, 5), Rational(1, 5)},
                     {Rational(1, 2), Rational(1, 2)}, {1, 0}, Rational(1, 2));
  AuditReport audit = naf_audit(model);
  bool ok = !audit.unbounded_level && audit.gamma_star == Rational(8, 5) &&
            audit.ceiling == Rational(8, 13);
  bool found_tight = false;
  for (const AuditLevel& level : audit.levels) {
    if (level.ratio && *level.ratio == audit.gamma_star) {
      found_tight = level.posterior && *level.posterior == Rational(8, 13);
    }
  }
  ok = ok && found_tight && audit.ok();

  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> count_dist(2, 5);
  std::uniform_int_distribution<int> weight(1, 9);
  std::uniform_int_distribution<int> level_dist(0, 2);
  std::uniform_int_distribution<int> prior_num(0, 12);
  int bounded_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int count = count_dist(rng);
    std::vector<std::string> outcomes;
    std::vector<Rational> with_access, without_access;
    std::vector<int> levels;
    int with_total = 0, without_total = 0;
    std::vector<int> w1(count), w2(count);
    for (int i = 0; i < count; ++i) {
      outcomes.push_back("s" + std::to_string(i));
      w1[i] = weight(rng);
      w2[i] = weight(rng);  // strictly positive, so gamma* is finite
      with_total += w1[i];
      without_total += w2[i];
      levels.push_back(level_dist(rng));
    }
    for (int i = 0; i < count; ++i) {
      with_access.push_back(Rational(w1[i], with_total));
      without_access.push_back(Rational(w2[i], without_total));
    }
    OutcomeModel random_model(std::move(outcomes), std::move(with_access),
                              std::move(without_access), std::move(levels),
                              Rational(prior_num(rng), 12));
    if (naf_audit(random_model).ok()) ++bounded_ok;
  }
  ok = ok && bounded_ok == 200;
  report(7, "bayes audit is tight and posteriors respect the ceiling", ok,
         std::to_string(bounded_ok) + "/200 random models bounded");
}

// 8. Interval rule: 20 synthetic KBs meeting the six conditions, with the
// enumerated belief inside the tau-widened attested interval.
void criterion8() {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> lo_num(5, 12);   // over 20
  std::uniform_int_distribution<int> gap(0, 4);
  std::uniform_int_distribution<int> q_num(0, 20);
  const Rational tau(1, 20);
  int clean = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rational a(lo_num(rng), 20);
    Rational b = std::min(a + Rational(gap(rng), 20), Rational(1));
    Rational q(q_num(rng), 20);

    KnowledgeBase kb;
    kb.add_predicate("S");
    kb.add_predicate("T");
    kb.add_predicate("X");
    kb.add_constant("c");
    kb.add_fact("c", "S");
    kb.rules.push_back(
        {Conjunction({{"X", false}}), Conjunction({{"T", false}})});
    Conjunction t({{"T", false}}), s({{"S", false}});
    kb.constraints.push_back({t, s, Relation::AtLeast, a, 0});
    kb.constraints.push_back({t, s, Relation::AtMost, b, 0});
    kb.constraints.push_back({Conjunction({{"X", false}}),
                              t.conjoin(s), Relation::Approx, q, 0});
    kb.normalize();

    LemmaRoles roles{s, t, Conjunction({{"X", false}})};
    Query query{"c", t};
    if (!check_lemma_conditions(kb, query, roles).all()) continue;
    DirectInferenceResult interval = resolve_interval(kb, query, roles);
    if (!interval.resolved() || interval.lo != a || interval.hi != b) continue;

    BeliefEstimate estimate = belief(kb, query, 40, taus_for(kb, tau));
    if (estimate.value >= a - tau && estimate.value <= b + tau) ++clean;
  }
  report(8, "interval corollary verified against enumeration",
         clean == 20, std::to_string(clean) + "/20 inside the interval");
}

// 9. parse(print(kb)) is structurally identical across a corpus covering
// every builder plus random KBs.
void criterion9() {
  std::vector<KnowledgeBase> corpus;
  for (MistressVariant v :
       {MistressVariant::Basic, MistressVariant::Extended,
        MistressVariant::NoApartment, MistressVariant::SmokingGun}) {
    corpus.push_back(build_mistress_kb(v));
  }
  corpus.push_back(build_probative_kb(Rational(9, 10)));
  corpus.push_back(build_striking_kb(Rational(9, 10), Rational(4, 5)));

  IrrConfig irr(SimilarityGrid({Rational(1, 5), Rational(1, 2), Rational(9, 10)}),
                EvidenceGrid({{Rational(3, 10), Rational(3, 5)},
                              {Rational(2, 5), Rational(7, 10)},
                              {Rational(1, 2), Rational(4, 5)}}));
  corpus.push_back(build_irr_kb(irr));
  corpus.push_back(build_irr_case(irr, 2, 1));
  corpus.push_back(build_irr_case(irr, 3, 2));

  NafConfig naf(Rational(7, 10), Rational(1, 2),
                {Rational(1, 2), Rational(9, 10)}, GammaSpec{}, Rational(2));
  corpus.push_back(build_naf_kb(naf));
  corpus.push_back(build_naf_case(naf, 1));
  corpus.push_back(build_naf_case(naf, 2));

  std::mt19937_64 rng(47);
  while (corpus.size() < 25) corpus.push_back(random_kb(rng));

  std::size_t round_tripped = 0;
  for (const KnowledgeBase& kb : corpus) {
    ParseResult parsed = parse_kb(print_kb(kb));
    if (parsed.kb.has_value() && parsed.errors.empty() && *parsed.kb == kb) {
      ++round_tripped;
    }
  }
  report(9, "print/parse round trip over the builder corpus",
         round_tripped == corpus.size(),
         std::to_string(round_tripped) + "/" + std::to_string(corpus.size()));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
