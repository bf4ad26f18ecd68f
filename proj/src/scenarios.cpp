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

#include "randworlds/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace randworlds {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void require_unit(const Rational& value, const std::string& what) {
  require(value >= 0 && value <= 1, what + " must lie in [0,1]");
}

std::string level_pred(std::size_t i) { return "Similar" + std::to_string(i); }
std::string ea_pred(std::size_t j) { return "EA" + std::to_string(j); }

// Similar_i & not Similar_k for k > i; i = 0 means below every threshold.
Conjunction similarity_level(std::size_t i, std::size_t n) {
  std::vector<Literal> lits;
  if (i >= 1) lits.push_back({level_pred(i), false});
  for (std::size_t k = i + 1; k <= n; ++k) lits.push_back({level_pred(k), true});
  return Conjunction(std::move(lits));
}

Conjunction evidence_category(std::size_t j, std::size_t m) {
  std::vector<Literal> lits;
  for (std::size_t l = 1; l <= m; ++l) lits.push_back({ea_pred(l), l != j});
  return Conjunction(std::move(lits));
}

void add_similarity_chain(KnowledgeBase& kb, std::size_t n) {
  for (std::size_t i = 1; i <= n; ++i) kb.add_predicate(level_pred(i));
  for (std::size_t i = 1; i + 1 <= n; ++i) {
    kb.rules.push_back({Conjunction({{level_pred(i + 1), false}}),
                        Conjunction({{level_pred(i), false}})});
  }
}

}  // namespace

KnowledgeBase build_mistress_kb(MistressVariant variant) {
  KnowledgeBase kb;
  kb.add_predicate("Apartment");
  kb.add_predicate("Mistress", "Mistress(., John)");
  kb.add_predicate("Murderer", "Murderer(., John)");
  kb.add_constant("Jane");
  kb.add_fact("Jane", "Mistress");
  if (variant != MistressVariant::NoApartment) kb.add_fact("Jane", "Apartment");

  Conjunction murderer({{"Murderer", false}});
  kb.constraints.push_back({murderer,
                            Conjunction({{"Apartment", false}, {"Mistress", false}}),
                            Relation::Approx, Rational(3, 5), 0});
  if (variant != MistressVariant::Basic) {
    kb.add_predicate("SmokingGun");
    kb.constraints.push_back({murderer, Conjunction({{"Mistress", false}}),
                              Relation::AtMost, Rational(1, 20), 0});
    kb.constraints.push_back(
        {murderer,
         Conjunction({{"Apartment", false}, {"Mistress", false},
                      {"SmokingGun", false}}),
         Relation::Approx, Rational(49, 50), 0});
  }
  if (variant == MistressVariant::SmokingGun) kb.add_fact("Jane", "SmokingGun");
  kb.normalize();
  return kb;
}

KnowledgeBase build_probative_kb(const Rational& eta) {
  require_unit(eta, "eta");
  KnowledgeBase kb;
  kb.add_predicate("Copy");
  kb.add_predicate("Access");
  kb.add_predicate("Probative");
  kb.add_constant("xd");
  kb.rules.push_back(
      {Conjunction({{"Copy", false}}), Conjunction({{"Access", false}})});
  kb.constraints.push_back({Conjunction({{"Copy", false}}),
                            Conjunction({{"Access", false}, {"Probative", false}}),
                            Relation::Approx, eta, 0});
  kb.add_fact("xd", "Access");
  kb.add_fact("xd", "Probative");
  kb.normalize();
  return kb;
}

KnowledgeBase build_striking_kb(const Rational& rho, const Rational& sigma) {
  require_unit(rho, "rho");
  require_unit(sigma, "sigma");
  KnowledgeBase kb;
  kb.add_predicate("Copy");
  kb.add_predicate("Access");
  kb.add_predicate("Striking");
  kb.add_constant("xd");
  kb.rules.push_back(
      {Conjunction({{"Copy", false}}), Conjunction({{"Access", false}})});
  kb.constraints.push_back({Conjunction({{"Copy", false}}),
                            Conjunction({{"Access", false}, {"Striking", false}}),
                            Relation::Approx, rho, 0});
  kb.constraints.push_back({Conjunction({{"Access", false}}),
                            Conjunction({{"Striking", false}}), Relation::Approx,
                            sigma, 0});
  kb.add_fact("xd", "Striking");
  kb.normalize();
  return kb;
}

SimilarityGrid::SimilarityGrid(std::vector<Rational> a) : alphas(std::move(a)) {
  require(!alphas.empty(), "similarity grid must have at least one level");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    require_unit(alphas[i], "alpha");
    if (i > 0) require(alphas[i] >= alphas[i - 1], "alphas must be nondecreasing");
  }
}

EvidenceGrid::EvidenceGrid(std::vector<std::vector<Rational>> b)
    : betas(std::move(b)) {
  require(!betas.empty() && !betas[0].empty(), "evidence grid must be nonempty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    require(betas[i].size() == betas[0].size(), "evidence grid must be rectangular");
    for (std::size_t j = 0; j < betas[i].size(); ++j) {
      require_unit(betas[i][j], "beta");
      if (j > 0) {
        require(betas[i][j] >= betas[i][j - 1],
                "betas must be nondecreasing along rows");
      }
      if (i > 0) {
        require(betas[i][j] >= betas[i - 1][j],
                "betas must be nondecreasing along columns");
      }
    }
  }
}

IrrConfig::IrrConfig(SimilarityGrid s, EvidenceGrid e, Rational lambda_)
    : similarity(std::move(s)), evidence(std::move(e)), lambda(std::move(lambda_)) {
  require(similarity.levels() == evidence.levels(),
          "similarity and evidence grids must agree on the level count");
  require(lambda > 0 && lambda < 1, "lambda must lie in (0,1)");
}

KnowledgeBase build_irr_kb(const IrrConfig& config) {
  const std::size_t n = config.n();
  const std::size_t m = config.m();
  KnowledgeBase kb;
  kb.add_predicate("Copy");
  kb.add_predicate("Access");
  add_similarity_chain(kb, n);
  for (std::size_t j = 1; j <= m; ++j) kb.add_predicate(ea_pred(j));
  kb.rules.insert(kb.rules.begin(),
                  {Conjunction({{"Copy", false}}), Conjunction({{"Access", false}})});

  for (std::size_t i = 1; i <= n; ++i) {
    kb.constraints.push_back(
        {Conjunction({{"Copy", false}}),
         Conjunction({{"Access", false}}).conjoin(similarity_level(i, n)),
         Relation::Approx, config.similarity.alphas[i - 1], 0});
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      kb.constraints.push_back(
          {Conjunction({{"Access", false}}),
           similarity_level(i, n).conjoin(evidence_category(j, m)),
           Relation::Approx, config.evidence.betas[i - 1][j - 1], 0});
    }
  }
  kb.normalize();
  return kb;
}

KnowledgeBase build_irr_case(const IrrConfig& config, std::size_t i,
                             std::size_t j) {
  require(i >= 1 && i <= config.n(), "similarity level out of range");
  require(j >= 1 && j <= config.m(), "evidence category out of range");
  KnowledgeBase kb = build_irr_kb(config);
  kb.add_constant("xd");
  for (const Literal& lit : similarity_level(i, config.n()).literals) {
    kb.add_fact("xd", lit.predicate, lit.negated);
  }
  for (const Literal& lit : evidence_category(j, config.m()).literals) {
    kb.add_fact("xd", lit.predicate, lit.negated);
  }
  kb.normalize();
  return kb;
}

Rational irr_belief(const IrrConfig& config, std::size_t i, std::size_t j) {
  require(i >= 1 && i <= config.n(), "similarity level out of range");
  require(j >= 1 && j <= config.m(), "evidence category out of range");
  return config.similarity.alphas[i - 1] * config.evidence.betas[i - 1][j - 1];
}

std::size_t min_sim_index(const IrrConfig& config, std::size_t j) {
  for (std::size_t i = 1; i <= config.n(); ++i) {
    if (irr_belief(config, i, j) > config.lambda) return i;
  }
  return config.n() + 1;  // sentinel: no level clears the threshold
}

std::size_t min_ev_index(const IrrConfig& config, std::size_t i) {
  for (std::size_t j = 1; j <= config.m(); ++j) {
    if (irr_belief(config, i, j) > config.lambda) return j;
  }
  return config.m() + 1;
}

Prop1Report check_prop1(const IrrConfig& config) {
  Prop1Report report;
  for (std::size_t j = 1; j <= config.m(); ++j) {
    report.min_sim.push_back(min_sim_index(config, j));
  }
  for (std::size_t i = 1; i <= config.n(); ++i) {
    report.min_ev.push_back(min_ev_index(config, i));
  }
  for (std::size_t j = 1; j <= config.m(); ++j) {
    for (std::size_t jp = 1; jp <= j; ++jp) {
      if (report.min_sim[j - 1] > report.min_sim[jp - 1]) {
        std::ostringstream out;
        out << "min_sim_index(" << j << ")=" << report.min_sim[j - 1]
            << " > min_sim_index(" << jp << ")=" << report.min_sim[jp - 1];
        report.counterexamples.push_back(out.str());
      }
    }
  }
  for (std::size_t i = 1; i <= config.n(); ++i) {
    for (std::size_t ip = 1; ip <= i; ++ip) {
      if (report.min_ev[i - 1] > report.min_ev[ip - 1]) {
        std::ostringstream out;
        out << "min_ev_index(" << i << ")=" << report.min_ev[i - 1]
            << " > min_ev_index(" << ip << ")=" << report.min_ev[ip - 1];
        report.counterexamples.push_back(out.str());
      }
    }
  }
  return report;
}

double GammaSpec::gamma(double epsilon) const {
  return family == GammaFamily::Exp ? std::exp(epsilon) : 1.0 + epsilon;
}

double GammaSpec::epsilon_for(double gamma) const {
  return family == GammaFamily::Exp ? std::log(gamma) : gamma - 1.0;
}

Rational GammaSpec::gamma_rational(const Rational& epsilon) const {
  return Rational(gamma(to_double(epsilon)));
}

GammaSpec gamma_spec_from_name(const std::string& name) {
  if (name == "exp") return {GammaFamily::Exp};
  if (name == "linear") return {GammaFamily::Linear};
  throw std::invalid_argument("unknown gamma family '" + name + "'");
}

const char* gamma_spec_name(const GammaSpec& spec) {
  return spec.family == GammaFamily::Exp ? "exp" : "linear";
}

Rational Gamma_from_gamma(const Rational& gamma_value, const Rational& delta) {
  require(gamma_value >= 1, "gamma must be >= 1");
  require_unit(delta, "delta");
  return gamma_value * delta / (1 + delta * (gamma_value - 1));
}

Rational Gamma(const Rational& epsilon, const Rational& delta,
               const GammaSpec& spec) {
  require(epsilon > 0, "epsilon must be positive");
  return Gamma_from_gamma(spec.gamma_rational(epsilon), delta);
}

NafConfig::NafConfig(Rational eps, Rational d, std::vector<Rational> alphas,
                     GammaSpec spec, std::optional<Rational> gamma)
    : epsilon(std::move(eps)),
      delta(std::move(d)),
      gamma_spec(spec),
      gamma_override(std::move(gamma)),
      alpha_primes(std::move(alphas)) {
  require(epsilon > 0, "epsilon must be positive");
  require_unit(delta, "delta");
  require(!alpha_primes.empty(), "alpha_primes must be nonempty");
  for (std::size_t i = 0; i < alpha_primes.size(); ++i) {
    require_unit(alpha_primes[i], "alpha'");
    if (i > 0) {
      require(alpha_primes[i] >= alpha_primes[i - 1],
              "alpha_primes must be nondecreasing");
    }
  }
  require(gamma_value() > 1, "gamma(epsilon) must exceed 1");
}

Rational NafConfig::gamma_value() const {
  return gamma_override ? *gamma_override : gamma_spec.gamma_rational(epsilon);
}

KnowledgeBase build_naf_kb(const NafConfig& config) {
  const std::size_t n = config.levels();
  const Rational ceiling = Gamma_from_gamma(config.gamma_value(), config.delta);
  KnowledgeBase kb;
  kb.add_predicate("Copy");
  kb.add_predicate("Access");
  kb.add_predicate("Generated", "Generated(., M)");
  add_similarity_chain(kb, n);
  kb.rules.insert(kb.rules.begin(),
                  {Conjunction({{"Copy", false}}), Conjunction({{"Access", false}})});

  Conjunction generated({{"Generated", false}});
  for (std::size_t i = 1; i <= n; ++i) {
    kb.constraints.push_back(
        {Conjunction({{"Copy", false}}),
         Conjunction({{"Access", false}})
             .conjoin(similarity_level(i, n))
             .conjoin(generated),
         Relation::Approx, config.alpha_primes[i - 1], 0});
  }
  for (std::size_t i = 1; i <= n; ++i) {
    kb.constraints.push_back({Conjunction({{"Access", false}}),
                              similarity_level(i, n).conjoin(generated),
                              Relation::AtMost, ceiling, 0});
  }
  kb.constraints.push_back({Conjunction({{"Access", false}}), generated,
                            Relation::Approx, config.delta, 0});
  kb.normalize();
  return kb;
}

KnowledgeBase build_naf_case(const NafConfig& config, std::size_t i) {
  require(i >= 1 && i <= config.levels(), "similarity level out of range");
  KnowledgeBase kb = build_naf_kb(config);
  kb.add_constant("xd");
  for (const Literal& lit : similarity_level(i, config.levels()).literals) {
    kb.add_fact("xd", lit.predicate, lit.negated);
  }
  kb.add_fact("xd", "Generated");
  kb.normalize();
  return kb;
}

Rational naf_copy_bound(const NafConfig& config, std::size_t i) {
  require(i >= 1 && i <= config.levels(), "similarity level out of range");
  return config.alpha_primes[i - 1] *
         Gamma_from_gamma(config.gamma_value(), config.delta);
}

Prop2Report check_prop2(const std::vector<Rational>& epsilons,
                        const std::vector<Rational>& deltas,
                        const GammaSpec& spec) {
  Prop2Report report;
  auto note = [&](const std::string& msg) { report.counterexamples.push_back(msg); };

  for (const Rational& delta : deltas) {
    std::optional<Rational> previous;
    for (const Rational& eps : epsilons) {
      Rational g = Gamma(eps, delta, spec);
      ++report.points_checked;
      if (g < delta) {
        note("Gamma(" + format_rational(eps) + "," + format_rational(delta) +
             ") < delta");
      }
      bool boundary = delta == 0 || delta == 1;
      if (boundary && g != delta) {
        note("Gamma != delta at boundary delta=" + format_rational(delta));
      }
      if (!boundary && g == delta) {
        note("Gamma = delta at interior delta=" + format_rational(delta));
      }
      if (previous && g < *previous) {
        note("Gamma decreasing in epsilon at delta=" + format_rational(delta));
      }
      previous = g;
    }
  }
  for (const Rational& eps : epsilons) {
    std::optional<Rational> previous;
    for (const Rational& delta : deltas) {
      Rational g = Gamma(eps, delta, spec);
      if (previous && g < *previous) {
        note("Gamma decreasing in delta at epsilon=" + format_rational(eps));
      }
      previous = g;
    }
  }
  return report;
}

OutcomeModel::OutcomeModel(std::vector<std::string> outs,
                           std::vector<Rational> with_access,
                           std::vector<Rational> without_access,
                           std::vector<int> levels, Rational prior)
    : outcomes(std::move(outs)),
      p_with_access(std::move(with_access)),
      p_without_access(std::move(without_access)),
      similarity_level(std::move(levels)),
      prior_access(std::move(prior)) {
  require(!outcomes.empty(), "outcome set must be nonempty");
  require(p_with_access.size() == outcomes.size() &&
              p_without_access.size() == outcomes.size() &&
              similarity_level.size() == outcomes.size(),
          "distribution and level arrays must match the outcome count");
  Rational sum_with = 0, sum_without = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    require_unit(p_with_access[i], "p_with_access");
    require_unit(p_without_access[i], "p_without_access");
    require(similarity_level[i] >= 0, "similarity level must be >= 0");
    sum_with += p_with_access[i];
    sum_without += p_without_access[i];
  }
  require(sum_with == 1, "p_with_access must sum to 1");
  require(sum_without == 1, "p_without_access must sum to 1");
  require_unit(prior_access, "prior access probability");
}

int OutcomeModel::max_level() const {
  return *std::max_element(similarity_level.begin(), similarity_level.end());
}

bool AuditReport::ok() const {
  if (unbounded_level) return false;
  return std::all_of(levels.begin(), levels.end(),
                     [](const AuditLevel& l) { return l.ceiling_ok; });
}

AuditReport naf_audit(const OutcomeModel& model, const GammaSpec& spec) {
  AuditReport report;
  report.gamma_star = 1;  // the ratio over the whole outcome space

  const int top = model.max_level();
  for (int level = 0; level <= top; ++level) {
    AuditLevel entry;
    entry.level = level;
    entry.p_with = 0;
    entry.p_without = 0;
    for (std::size_t i = 0; i < model.outcomes.size(); ++i) {
      if (model.similarity_level[i] != level) continue;
      entry.p_with += model.p_with_access[i];
      entry.p_without += model.p_without_access[i];
    }
    if (entry.p_with == 0 && entry.p_without == 0) continue;
    if (entry.p_without == 0) {
      report.unbounded_level = level;
    } else {
      entry.ratio = entry.p_with / entry.p_without;
      report.gamma_star = std::max(report.gamma_star, *entry.ratio);
    }
    // Bayes with the model's prior.
    Rational joint_with = model.prior_access * entry.p_with;
    Rational joint_without = (1 - model.prior_access) * entry.p_without;
    Rational mass = joint_with + joint_without;
    if (mass > 0) entry.posterior = joint_with / mass;
    report.levels.push_back(std::move(entry));
  }

  if (report.unbounded_level) return report;

  report.epsilon_star = spec.epsilon_for(to_double(report.gamma_star));
  report.ceiling = Gamma_from_gamma(report.gamma_star, model.prior_access);
  for (AuditLevel& entry : report.levels) {
    if (entry.posterior) entry.ceiling_ok = *entry.posterior <= report.ceiling;
  }
  return report;
}

bool ForwardBoundReport::ok() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const AuditLevel& l) { return l.ceiling_ok; });
}

ForwardBoundReport forward_bound_check(const OutcomeModel& model,
                                       const Rational& epsilon,
                                       const GammaSpec& spec,
                                       std::optional<Rational> gamma_override) {
  require(epsilon > 0, "epsilon must be positive");
  ForwardBoundReport report;
  report.gamma_value =
      gamma_override ? *gamma_override : spec.gamma_rational(epsilon);

  const int top = model.max_level();
  for (int level = 0; level <= top; ++level) {
    AuditLevel entry;
    entry.level = level;
    entry.p_with = 0;
    entry.p_without = 0;
    for (std::size_t i = 0; i < model.outcomes.size(); ++i) {
      if (model.similarity_level[i] != level) continue;
      entry.p_with += model.p_with_access[i];
      entry.p_without += model.p_without_access[i];
    }
    if (entry.p_with == 0 && entry.p_without == 0) continue;
    entry.ceiling_ok = entry.p_with <= report.gamma_value * entry.p_without;
    if (entry.p_without > 0) entry.ratio = entry.p_with / entry.p_without;
    report.levels.push_back(std::move(entry));
  }
  return report;
}

bool verdict(const VerdictInput& input) {
  require_unit(input.copy_belief, "copy belief");
  return input.substantial && input.copy_belief > input.lambda;
}

namespace {

Rational rational_field(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  auto value = parse_rational(j.get<std::string>());
  require(value.has_value(), "malformed rational in config");
  return *value;
}

std::vector<Rational> rational_array(const nlohmann::json& j) {
  std::vector<Rational> values;
  for (const auto& item : j) values.push_back(rational_field(item));
  return values;
}

}  // namespace

IrrConfig irr_config_from_json(const nlohmann::json& j) {
  SimilarityGrid similarity(rational_array(j.at("alphas")));
  std::vector<std::vector<Rational>> betas;
  for (const auto& row : j.at("betas")) betas.push_back(rational_array(row));
  EvidenceGrid evidence(std::move(betas));
  Rational lambda =
      j.contains("lambda") ? rational_field(j.at("lambda")) : Rational(1, 2);
  return IrrConfig(std::move(similarity), std::move(evidence), std::move(lambda));
}

NafConfig naf_config_from_json(const nlohmann::json& j) {
  GammaSpec spec = j.contains("gamma_spec")
                       ? gamma_spec_from_name(j.at("gamma_spec").get<std::string>())
                       : GammaSpec{};
  std::optional<Rational> gamma;
  if (j.contains("gamma")) gamma = rational_field(j.at("gamma"));
  return NafConfig(rational_field(j.at("epsilon")), rational_field(j.at("delta")),
                   rational_array(j.at("alpha_primes")), spec, gamma);
}

OutcomeModel outcome_model_from_json(const nlohmann::json& j) {
  std::vector<std::string> outcomes;
  for (const auto& o : j.at("outcomes")) outcomes.push_back(o.get<std::string>());
  std::vector<int> levels;
  for (const auto& l : j.at("levels")) levels.push_back(l.get<int>());
  return OutcomeModel(std::move(outcomes), rational_array(j.at("p_with")),
                      rational_array(j.at("p_without")), std::move(levels),
                      rational_field(j.at("delta")));
}

nlohmann::json prop1_to_json(const Prop1Report& report) {
  nlohmann::json j;
  j["min_sim_index"] = report.min_sim;
  j["min_ev_index"] = report.min_ev;
  j["counterexamples"] = report.counterexamples;
  j["ok"] = report.ok();
  return j;
}

nlohmann::json prop2_to_json(const Prop2Report& report) {
  nlohmann::json j;
  j["points_checked"] = report.points_checked;
  j["counterexamples"] = report.counterexamples;
  j["ok"] = report.ok();
  return j;
}

nlohmann::json audit_to_json(const AuditReport& report) {
  nlohmann::json j;
  if (report.unbounded_level) {
    j["unbounded_level"] = *report.unbounded_level;
    j["ok"] = false;
    return j;
  }
  j["gamma_star"] = format_rational(report.gamma_star);
  j["epsilon_star"] = report.epsilon_star;
  j["ceiling"] = format_rational(report.ceiling);
  j["levels"] = nlohmann::json::array();
  for (const AuditLevel& l : report.levels) {
    nlohmann::json lj;
    lj["level"] = l.level;
    lj["p_with"] = format_rational(l.p_with);
    lj["p_without"] = format_rational(l.p_without);
    if (l.ratio) lj["ratio"] = format_rational(*l.ratio);
    if (l.posterior) lj["posterior"] = format_rational(*l.posterior);
    lj["ceiling_ok"] = l.ceiling_ok;
    j["levels"].push_back(lj);
  }
  j["ok"] = report.ok();
  return j;
}

std::string audit_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "level,p_with,p_without,ratio,posterior,ceiling_ok\n";
  for (const AuditLevel& l : report.levels) {
    out << l.level << "," << format_rational(l.p_with) << ","
        << format_rational(l.p_without) << ","
        << (l.ratio ? format_rational(*l.ratio) : "") << ","
        << (l.posterior ? format_rational(*l.posterior) : "") << ","
        << (l.ceiling_ok ? "1" : "0") << "\n";
  }
  return out.str();
}

}  // namespace randworlds
