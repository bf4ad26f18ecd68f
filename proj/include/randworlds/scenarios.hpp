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

#ifndef RANDWORLDS_SCENARIOS_HPP_
#define RANDWORLDS_SCENARIOS_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randworlds/kb.hpp"

namespace randworlds {

// Builders for the copyright-dispute and murder-mystery knowledge bases,
// the inverse-ratio-rule analyzer over similarity/evidence grids, and the
// near-access-free (NAF) analyzer for generative-model access bounds.

// ---------------------------------------------------------------------------
// Murder-mystery and copyright-trial builders.

enum class MistressVariant { Basic, Extended, NoApartment, SmokingGun };

KnowledgeBase build_mistress_kb(MistressVariant variant);

// Trial facts baked in: access + probative similarity.
KnowledgeBase build_probative_kb(const Rational& eta);

// Trial fact baked in: striking similarity; copying resolves to rho*sigma.
KnowledgeBase build_striking_kb(const Rational& rho, const Rational& sigma);

// ---------------------------------------------------------------------------
// Inverse ratio rule.

// alpha_i = chance of copying given access at maximal similarity level i;
// nondecreasing in i.
struct SimilarityGrid {
  std::vector<Rational> alphas;
  explicit SimilarityGrid(std::vector<Rational> a);  // validates monotonicity
  std::size_t levels() const { return alphas.size(); }
};

// beta[i][j] = chance of access at similarity level i+1 with evidence
// category j+1; nondecreasing along rows and columns.
struct EvidenceGrid {
  std::vector<std::vector<Rational>> betas;
  explicit EvidenceGrid(std::vector<std::vector<Rational>> b);
  std::size_t levels() const { return betas.size(); }
  std::size_t categories() const { return betas.empty() ? 0 : betas[0].size(); }
};

struct IrrConfig {
  SimilarityGrid similarity;
  EvidenceGrid evidence;
  Rational lambda{1, 2};  // standard-of-proof threshold, in (0,1)

  IrrConfig(SimilarityGrid s, EvidenceGrid e, Rational lambda_ = Rational(1, 2));
  std::size_t n() const { return similarity.levels(); }
  std::size_t m() const { return evidence.categories(); }
};

// The evidentiary-grid KB: similarity chain rules plus the alpha and beta
// proportion statements.
KnowledgeBase build_irr_kb(const IrrConfig& config);

// Adds the courtroom facts for maximal similarity level i and the single
// evidence category j (both 1-based).
KnowledgeBase build_irr_case(const IrrConfig& config, std::size_t i,
                             std::size_t j);

// alpha_i * beta_{i,j}, exact.
Rational irr_belief(const IrrConfig& config, std::size_t i, std::size_t j);

// Least level whose copy belief clears lambda (strict); n+1 / m+1 sentinel
// when no level qualifies.
std::size_t min_sim_index(const IrrConfig& config, std::size_t j);
std::size_t min_ev_index(const IrrConfig& config, std::size_t i);

struct Prop1Report {
  std::vector<std::size_t> min_sim;  // indexed by j-1
  std::vector<std::size_t> min_ev;   // indexed by i-1
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

// Checks both monotonicity claims of the inverse ratio rule exhaustively
// over the grid.
Prop1Report check_prop1(const IrrConfig& config);

// ---------------------------------------------------------------------------
// NAF analysis.

enum class GammaFamily { Exp, Linear };

// gamma(epsilon) > 1 for epsilon > 0, increasing and invertible.
// Exp: gamma = e^eps; Linear: gamma = 1 + eps.
struct GammaSpec {
  GammaFamily family = GammaFamily::Exp;

  double gamma(double epsilon) const;
  double epsilon_for(double gamma) const;
  // Exact rational image of the double gamma(epsilon); downstream
  // arithmetic on it is exact.
  Rational gamma_rational(const Rational& epsilon) const;
};

GammaSpec gamma_spec_from_name(const std::string& name);
const char* gamma_spec_name(const GammaSpec& spec);

// Posterior-access ceiling g*delta / (1 + delta*(g - 1)) for g = gamma(eps).
Rational Gamma_from_gamma(const Rational& gamma_value, const Rational& delta);
Rational Gamma(const Rational& epsilon, const Rational& delta,
               const GammaSpec& spec);

struct NafConfig {
  Rational epsilon;  // > 0
  Rational delta;    // prior access probability, in [0,1]
  GammaSpec gamma_spec;
  // Exact gamma(epsilon) when the caller knows it (e.g. gamma = 2 for
  // eps = ln 2); otherwise the spec's double image is rationalized.
  std::optional<Rational> gamma_override;
  std::vector<Rational> alpha_primes;  // nondecreasing

  NafConfig(Rational eps, Rational d, std::vector<Rational> alphas,
            GammaSpec spec = {}, std::optional<Rational> gamma = std::nullopt);
  Rational gamma_value() const;
  std::size_t levels() const { return alpha_primes.size(); }
};

KnowledgeBase build_naf_kb(const NafConfig& config);
KnowledgeBase build_naf_case(const NafConfig& config, std::size_t i);

// alpha'_i * Gamma(eps, delta): the ceiling on the copy belief at level i.
Rational naf_copy_bound(const NafConfig& config, std::size_t i);

struct Prop2Report {
  std::vector<std::string> counterexamples;
  std::size_t points_checked = 0;
  bool ok() const { return counterexamples.empty(); }
};

// Over the (epsilon, delta) grid: Gamma >= delta exactly, Gamma
// nondecreasing in epsilon and delta by finite differences, Gamma = delta
// exactly iff delta is 0 or 1 (the closed form's numerator vanishes at
// both ends).
Prop2Report check_prop2(const std::vector<Rational>& epsilons,
                        const std::vector<Rational>& deltas,
                        const GammaSpec& spec);

// Finite output distributions of a generative model with and without
// access; each outcome is tagged with its maximal similarity level
// (0 = below all thresholds).
struct OutcomeModel {
  std::vector<std::string> outcomes;
  std::vector<Rational> p_with_access;
  std::vector<Rational> p_without_access;
  std::vector<int> similarity_level;
  Rational prior_access;  // delta

  OutcomeModel(std::vector<std::string> outs, std::vector<Rational> with_access,
               std::vector<Rational> without_access, std::vector<int> levels,
               Rational prior);
  int max_level() const;
};

struct AuditLevel {
  int level = 0;
  Rational p_with;     // P(s_level | access)
  Rational p_without;  // P(s_level | no access)
  std::optional<Rational> ratio;      // unset when p_without = 0, p_with > 0
  std::optional<Rational> posterior;  // unset when the event has mass 0
  bool ceiling_ok = true;
};

struct AuditReport {
  Rational gamma_star;   // max level-event likelihood ratio
  double epsilon_star = 0.0;  // gamma_spec inverse at gamma_star
  Rational ceiling;      // Gamma(epsilon_star, prior), via gamma_star exactly
  std::vector<AuditLevel> levels;
  std::optional<int> unbounded_level;  // NAF fails for every finite epsilon
  bool ok() const;  // bounded and every posterior under the ceiling
};

// Bayes audit of an outcome model: the tightest gamma the model admits,
// the implied epsilon, and the posterior access probability per observed
// similarity level, each checked against the Gamma ceiling.
AuditReport naf_audit(const OutcomeModel& model, const GammaSpec& spec = {});

struct ForwardBoundReport {
  Rational gamma_value;
  std::vector<AuditLevel> levels;  // ceiling_ok = ratio bound holds
  bool ok() const;
};

// Checks P(s_i | access) <= gamma(eps) * P(s_i | no access) per level.
ForwardBoundReport forward_bound_check(const OutcomeModel& model,
                                       const Rational& epsilon,
                                       const GammaSpec& spec = {},
                                       std::optional<Rational> gamma_override =
                                           std::nullopt);

// ---------------------------------------------------------------------------
// Verdict.

struct VerdictInput {
  Rational copy_belief;  // in [0,1]
  bool substantial = false;
  Rational lambda{1, 2};
};

// True iff the copy belief strictly exceeds lambda and the similarity is
// substantial; ties fail the standard of proof.
bool verdict(const VerdictInput& input);

// ---------------------------------------------------------------------------
// JSON config formats and report serialization.

IrrConfig irr_config_from_json(const nlohmann::json& j);
NafConfig naf_config_from_json(const nlohmann::json& j);
OutcomeModel outcome_model_from_json(const nlohmann::json& j);

nlohmann::json prop1_to_json(const Prop1Report& report);
nlohmann::json prop2_to_json(const Prop2Report& report);
nlohmann::json audit_to_json(const AuditReport& report);
std::string audit_csv(const AuditReport& report);

}  // namespace randworlds

#endif  // RANDWORLDS_SCENARIOS_HPP_
