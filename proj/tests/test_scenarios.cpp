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

#include <doctest.h>

#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "randworlds/dsl.hpp"
#include "randworlds/scenarios.hpp"

using namespace randworlds;

namespace {

IrrConfig sample_irr_config() {
  return IrrConfig(
      SimilarityGrid({Rational(1, 5), Rational(1, 2), Rational(9, 10)}),
      EvidenceGrid({{Rational(3, 10), Rational(3, 5)},
                    {Rational(2, 5), Rational(7, 10)},
                    {Rational(1, 2), Rational(4, 5)}}));
}

}  // namespace

TEST_CASE("builders produce valid knowledge bases") {
  for (MistressVariant v :
       {MistressVariant::Basic, MistressVariant::Extended,
        MistressVariant::NoApartment, MistressVariant::SmokingGun}) {
    CHECK(validate_kb(build_mistress_kb(v)).ok());
  }
  CHECK(validate_kb(build_probative_kb(Rational(9, 10))).ok());
  CHECK(validate_kb(build_striking_kb(Rational(9, 10), Rational(4, 5))).ok());
  CHECK(validate_kb(build_irr_kb(sample_irr_config())).ok());
  CHECK(validate_kb(build_irr_case(sample_irr_config(), 2, 1)).ok());

  NafConfig naf(Rational(7, 10), Rational(1, 2), {Rational(1, 2), Rational(9, 10)},
                GammaSpec{}, Rational(2));
  CHECK(validate_kb(build_naf_kb(naf)).ok());
  CHECK(validate_kb(build_naf_case(naf, 2)).ok());
}

TEST_CASE("grid constructors reject malformed inputs") {
  CHECK_THROWS_AS(SimilarityGrid({Rational(1, 2), Rational(1, 4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SimilarityGrid({Rational(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(EvidenceGrid({{Rational(1, 2), Rational(1, 4)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EvidenceGrid({{Rational(1, 2)}, {Rational(1, 4)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      IrrConfig(SimilarityGrid({Rational(1, 2)}),
                EvidenceGrid({{Rational(1, 2)}, {Rational(3, 4)}})),
      std::invalid_argument);
  CHECK_THROWS_AS(IrrConfig(SimilarityGrid({Rational(1, 2)}),
                            EvidenceGrid({{Rational(1, 2)}}), Rational(1)),
                  std::invalid_argument);
}

TEST_CASE("the grid KB has one alpha statement per level and a beta per cell") {
  IrrConfig config = sample_irr_config();
  KnowledgeBase kb = build_irr_kb(config);
  CHECK(kb.constraints.size() == 3 + 3 * 2);
  CHECK(kb.rules.size() == 3);  // copying implies access, plus the level chain

  KnowledgeBase with_case = build_irr_case(config, 2, 1);
  Conjunction facts = with_case.facts_for("xd");
  CHECK(facts.contains({"Similar2", false}));
  CHECK(facts.contains({"Similar3", true}));
  CHECK(facts.contains({"EA1", false}));
  CHECK(facts.contains({"EA2", true}));
  CHECK(!facts.mentions("Similar1"));  // implied by the chain, not asserted
}

TEST_CASE("grid beliefs multiply exactly and the thresholds trade off") {
  IrrConfig config = sample_irr_config();
  CHECK(irr_belief(config, 3, 2) == Rational(9, 10) * Rational(4, 5));
  CHECK(irr_belief(config, 1, 1) == Rational(3, 50));

  // With lambda = 1/2: level beliefs per category are
  //   j=1: 3/50, 1/5, 9/20  -> none clear 1/2 -> sentinel 4
  //   j=2: 3/25, 7/20, 18/25 -> first clear at level 3
  CHECK(min_sim_index(config, 1) == 4);
  CHECK(min_sim_index(config, 2) == 3);
  CHECK(min_ev_index(config, 1) == 3);
  CHECK(min_ev_index(config, 2) == 3);
  CHECK(min_ev_index(config, 3) == 2);

  Prop1Report report = check_prop1(config);
  CHECK(report.ok());
  CHECK(report.min_sim == std::vector<std::size_t>{4, 3});
  CHECK(report.min_ev == std::vector<std::size_t>{3, 3, 2});
}

TEST_CASE("stronger evidence never raises the similarity bar") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> step(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    int n = dim(rng), m = dim(rng);
    std::vector<Rational> alphas;
    Rational a(step(rng), 40);
    for (int i = 0; i < n; ++i) {
      a += Rational(step(rng), 40);
      alphas.push_back(std::min(a, Rational(1)));
    }
    std::vector<std::vector<Rational>> betas(n, std::vector<Rational>(m));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        Rational floor = i > 0 ? betas[i - 1][j] : Rational(0);
        if (j > 0) floor = std::max(floor, betas[i][j - 1]);
        betas[i][j] = std::min(floor + Rational(step(rng), 40), Rational(1));
      }
    }
    Rational lambda(1 + step(rng) * 7, 40);  // scattered through (0,1)
    IrrConfig config{SimilarityGrid(std::move(alphas)),
                     EvidenceGrid(std::move(betas)), lambda};
    CAPTURE(trial);
    CHECK(check_prop1(config).ok());
  }
}

TEST_CASE("the posterior ceiling has the advertised closed form") {
  CHECK(Gamma_from_gamma(Rational(2), Rational(1, 2)) == Rational(2, 3));
  CHECK(Gamma_from_gamma(Rational(8, 5), Rational(1, 2)) == Rational(8, 13));
  CHECK(Gamma_from_gamma(Rational(5), Rational(1)) == Rational(1));
  CHECK(Gamma_from_gamma(Rational(5), Rational(0)) == Rational(0));
  CHECK_THROWS_AS(Gamma_from_gamma(Rational(1, 2), Rational(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Gamma(Rational(0), Rational(1, 2), GammaSpec{}),
                  std::invalid_argument);

  GammaSpec linear = gamma_spec_from_name("linear");
  CHECK(Gamma(Rational(1), Rational(1, 2), linear) == Rational(2, 3));
  CHECK(gamma_spec_from_name("exp").family == GammaFamily::Exp);
  CHECK_THROWS_AS(gamma_spec_from_name("cubic"), std::invalid_argument);
}

TEST_CASE("ceiling monotonicity over a rational grid") {
  std::vector<Rational> epsilons, deltas;
  for (int i = 1; i <= 10; ++i) epsilons.push_back(Rational(i, 4));
  for (int d = 0; d <= 10; ++d) deltas.push_back(Rational(d, 10));
  Prop2Report report = check_prop2(epsilons, deltas, GammaSpec{});
  CHECK(report.ok());
  CHECK(report.points_checked == 110);
}

TEST_CASE("generated-work KB shape and copy bound") {
  NafConfig config(Rational(7, 10), Rational(1, 2),
                   {Rational(1, 2), Rational(9, 10)}, GammaSpec{}, Rational(2));
  KnowledgeBase kb = build_naf_kb(config);
  // Two conditional copy rates, two access ceilings, one prior statement.
  CHECK(kb.constraints.size() == 5);
  CHECK(kb.constraints[4].value == Rational(1, 2));
  CHECK(kb.constraints[2].relation == Relation::AtMost);
  CHECK(kb.constraints[2].value == Rational(2, 3));

  CHECK(naf_copy_bound(config, 1) == Rational(1, 3));
  CHECK(naf_copy_bound(config, 2) == Rational(3, 5));
  CHECK(naf_copy_bound(config, 2) >= naf_copy_bound(config, 1));
  CHECK_THROWS_AS(naf_copy_bound(config, 3), std::invalid_argument);
}

TEST_CASE("raising the privacy budget never lowers the copy bound") {
  std::vector<Rational> alphas{Rational(2, 5), Rational(4, 5)};
  std::optional<Rational> previous;
  for (int i = 1; i <= 8; ++i) {
    NafConfig config(Rational(i, 4), Rational(3, 10), alphas);
    Rational bound = naf_copy_bound(config, 2);
    if (previous) CHECK(bound >= *previous);
    previous = bound;
  }
}

TEST_CASE("bayes audit of a two-outcome model") {
  OutcomeModel model({"hit", "miss"}, {Rational(4, 5), Rational(1, 5)},
                     {Rational(1, 2), Rational(1, 2)}, {1, 0}, Rational(1, 2));
  AuditReport report = naf_audit(model);
  CHECK(!report.unbounded_level.has_value());
  CHECK(report.gamma_star == Rational(8, 5));
  CHECK(report.ceiling == Rational(8, 13));
  CHECK(report.epsilon_star == doctest::Approx(0.47).epsilon(0.01));
  REQUIRE(report.levels.size() == 2);
  CHECK(*report.levels[1].posterior == Rational(8, 13));  // tight at the top
  CHECK(report.ok());

  std::string csv = audit_csv(report);
  CHECK(csv.find("level,p_with,p_without") == 0);
  CHECK(csv.find("8/13") != std::string::npos);
}

TEST_CASE("identical output distributions admit gamma of one") {
  OutcomeModel model({"a", "b"}, {Rational(1, 3), Rational(2, 3)},
                     {Rational(1, 3), Rational(2, 3)}, {1, 0}, Rational(2, 5));
  AuditReport report = naf_audit(model);
  CHECK(report.gamma_star == 1);
  CHECK(report.ceiling == Rational(2, 5));  // posterior equals the prior
  for (const AuditLevel& level : report.levels) {
    CHECK(*level.posterior == Rational(2, 5));
  }
  CHECK(report.ok());
}

TEST_CASE("an access-only outcome defeats every finite budget") {
  OutcomeModel model({"tell", "other"}, {Rational(1, 10), Rational(9, 10)},
                     {Rational(0), Rational(1)}, {2, 0}, Rational(1, 2));
  AuditReport report = naf_audit(model);
  REQUIRE(report.unbounded_level.has_value());
  CHECK(*report.unbounded_level == 2);
  CHECK(!report.ok());
  CHECK(audit_to_json(report)["ok"] == false);
}

TEST_CASE("forward bound check separates compliant from leaky models") {
  OutcomeModel model({"hit", "miss"}, {Rational(4, 5), Rational(1, 5)},
                     {Rational(1, 2), Rational(1, 2)}, {1, 0}, Rational(1, 2));
  ForwardBoundReport pass =
      forward_bound_check(model, Rational(1), GammaSpec{}, Rational(8, 5));
  CHECK(pass.ok());
  ForwardBoundReport fail =
      forward_bound_check(model, Rational(1), GammaSpec{}, Rational(3, 2));
  CHECK(!fail.ok());
}

TEST_CASE("the verdict needs both substantiality and the standard of proof") {
  CHECK(verdict({Rational(3, 5), true, Rational(1, 2)}));
  CHECK(!verdict({Rational(3, 5), false, Rational(1, 2)}));
  CHECK(!verdict({Rational(1, 2), true, Rational(1, 2)}));  // tie loses
  CHECK(!verdict({Rational(2, 5), true, Rational(1, 2)}));
  CHECK_THROWS_AS(verdict({Rational(7, 5), true, Rational(1, 2)}),
                  std::invalid_argument);
}

TEST_CASE("configs load from json") {
  nlohmann::json irr = nlohmann::json::parse(R"({
      "alphas": ["1/5", "1/2", "9/10"],
      "betas": [["3/10", "3/5"], ["2/5", "7/10"], ["1/2", "4/5"]],
      "lambda": "1/2"})");
  IrrConfig config = irr_config_from_json(irr);
  CHECK(config.n() == 3);
  CHECK(config.m() == 2);
  CHECK(config.lambda == Rational(1, 2));

  nlohmann::json naf = nlohmann::json::parse(R"({
      "epsilon": "7/10", "delta": "1/2",
      "alpha_primes": ["1/2", "9/10"], "gamma": "2"})");
  NafConfig naf_config = naf_config_from_json(naf);
  CHECK(naf_config.gamma_value() == Rational(2));
  CHECK(naf_config.levels() == 2);

  nlohmann::json model = nlohmann::json::parse(R"({
      "outcomes": ["hit", "miss"],
      "p_with": ["4/5", "1/5"], "p_without": ["1/2", "1/2"],
      "levels": [1, 0], "delta": "1/2"})");
  OutcomeModel outcome = outcome_model_from_json(model);
  CHECK(outcome.max_level() == 1);
  CHECK(naf_audit(outcome).gamma_star == Rational(8, 5));
}
