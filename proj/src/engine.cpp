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

#include "randworlds/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace randworlds {

namespace {

constexpr int kMaxPredicates = 16;

struct Masks {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  bool satisfied_by(std::uint32_t bits) const {
    return (bits & pos) == pos && (bits & neg) == 0;
  }
  bool contradictory() const { return (pos & neg) != 0; }
};

struct CompiledConstraint {
  Masks condition;
  Masks target_and_condition;
  Relation relation = Relation::Approx;
  Rational lo;  // lower acceptance bound on the proportion
  Rational hi;  // upper acceptance bound
};

struct CompiledConstant {
  Masks facts;
};

struct CompiledKb {
  int k = 0;
  std::vector<std::string> predicates;  // sorted
  std::vector<std::pair<Masks, Masks>> rules;  // antecedent, consequent
  std::vector<CompiledConstraint> constraints;
  std::vector<CompiledConstant> constants;

  int predicate_index(const std::string& name) const {
    auto it = std::lower_bound(predicates.begin(), predicates.end(), name);
    if (it == predicates.end() || *it != name) {
      throw std::invalid_argument("unknown predicate '" + name + "'");
    }
    return static_cast<int>(it - predicates.begin());
  }

  Masks compile_conjunction(const Conjunction& conj) const {
    Masks m;
    for (const Literal& lit : conj.literals) {
      std::uint32_t bit = std::uint32_t{1} << predicate_index(lit.predicate);
      (lit.negated ? m.neg : m.pos) |= bit;
    }
    return m;
  }

  bool profile_feasible(std::uint32_t bits) const {
    for (const auto& [ante, cons] : rules) {
      if (ante.satisfied_by(bits) && !cons.satisfied_by(bits)) return false;
    }
    return true;
  }

  bool constraint_window_accepts(const CompiledConstraint& c,
                                 const BigInt& in_target,
                                 const BigInt& in_condition) const {
    if (in_condition == 0) return false;  // empty reference class excludes
    Rational proportion(in_target, in_condition);
    switch (c.relation) {
      case Relation::Approx:
        return proportion >= c.lo && proportion <= c.hi;
      case Relation::AtMost:
        return proportion <= c.hi;
      case Relation::AtLeast:
        return proportion >= c.lo;
    }
    return false;
  }
};

CompiledKb compile(const KnowledgeBase& kb, const ToleranceSpec& taus) {
  if (kb.vocabulary.size() > kMaxPredicates) {
    throw std::invalid_argument("vocabulary exceeds engine cap of " +
                                std::to_string(kMaxPredicates) + " predicates");
  }
  CompiledKb c;
  c.k = static_cast<int>(kb.vocabulary.size());
  for (const PredicateSymbol& p : kb.vocabulary) c.predicates.push_back(p.name);
  std::sort(c.predicates.begin(), c.predicates.end());

  for (const UniversalRule& r : kb.rules) {
    c.rules.push_back(
        {c.compile_conjunction(r.antecedent), c.compile_conjunction(r.consequent)});
  }
  for (const ProportionConstraint& pc : kb.constraints) {
    CompiledConstraint cc;
    cc.condition = c.compile_conjunction(pc.condition);
    cc.target_and_condition =
        c.compile_conjunction(pc.condition.conjoin(pc.target));
    cc.relation = pc.relation;
    const Rational& tau = taus.tau_for(pc.tolerance_index);
    cc.lo = pc.value - tau;
    cc.hi = pc.value + tau;
    c.constraints.push_back(cc);
  }
  for (const Constant& k : kb.constants) {
    c.constants.push_back({c.compile_conjunction(kb.facts_for(k.name))});
  }
  return c;
}

// Profile groups distinguished by the constraint signature: per constraint,
// out of the reference class (0), in the class but not the target (1), or
// in both (2). Everything else about a profile is constraint-irrelevant
// and summed out via the group size.
struct Groups {
  std::vector<std::vector<std::uint8_t>> signatures;
  std::vector<std::uint64_t> sizes;                     // profiles per group
  std::vector<std::vector<std::uint64_t>> constant_options;  // [group][constant]
};

Groups group_profiles(const CompiledKb& c) {
  Groups g;
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  const std::uint32_t limit = std::uint32_t{1} << c.k;
  for (std::uint32_t bits = 0; bits < limit; ++bits) {
    if (!c.profile_feasible(bits)) continue;
    std::vector<std::uint8_t> sig(c.constraints.size(), 0);
    for (std::size_t i = 0; i < c.constraints.size(); ++i) {
      if (c.constraints[i].target_and_condition.satisfied_by(bits)) {
        sig[i] = 2;
      } else if (c.constraints[i].condition.satisfied_by(bits)) {
        sig[i] = 1;
      }
    }
    auto [it, inserted] = index.try_emplace(sig, g.signatures.size());
    if (inserted) {
      g.signatures.push_back(sig);
      g.sizes.push_back(0);
      g.constant_options.emplace_back(c.constants.size(), 0);
    }
    std::size_t gi = it->second;
    ++g.sizes[gi];
    for (std::size_t ci = 0; ci < c.constants.size(); ++ci) {
      if (c.constants[ci].facts.satisfied_by(bits)) ++g.constant_options[gi][ci];
    }
  }
  return g;
}

std::vector<std::vector<BigInt>> pascal_table(int n) {
  std::vector<std::vector<BigInt>> choose(n + 1, std::vector<BigInt>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    choose[i][0] = 1;
    for (int j = 1; j <= i; ++j) {
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }
  }
  return choose;
}

BigInt binomial_big(int n, int k) {
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::string taus_to_string(const ToleranceSpec& taus) {
  std::ostringstream out;
  for (std::size_t i = 0; i < taus.taus.size(); ++i) {
    if (i) out << ",";
    out << format_rational(taus.taus[i]);
  }
  return out.str();
}

}  // namespace

std::vector<AtomProfile> feasible_profiles(const KnowledgeBase& kb) {
  CompiledKb c = compile(kb, ToleranceSpec::uniform(Rational(1, 10),
                                                    kb.max_tolerance_index() + 1));
  std::vector<AtomProfile> result;
  const std::uint32_t limit = std::uint32_t{1} << c.k;
  for (std::uint32_t bits = 0; bits < limit; ++bits) {
    if (c.profile_feasible(bits)) result.push_back({bits, c.k});
  }
  return result;
}

WorldCount count_models(const KnowledgeBase& kb, int N, const ToleranceSpec& taus,
                        std::uint64_t budget) {
  const int C = static_cast<int>(kb.constants.size());
  if (N < C) {
    throw std::invalid_argument("domain size " + std::to_string(N) +
                                " smaller than constant count " +
                                std::to_string(C));
  }
  CompiledKb c = compile(kb, taus);
  Groups groups = group_profiles(c);
  const int G = static_cast<int>(groups.sizes.size());
  const int free_elements = N - C;

  if (G == 0) {
    // No feasible profile at all: only the empty world can survive, and
    // only when there is nothing to place.
    return (N == 0 && c.constraints.empty()) ? WorldCount(1) : WorldCount(0);
  }

  // Budget: occupation vectors times joint constant placements.
  BigInt space = binomial_big(free_elements + G - 1, G - 1);
  for (int ci = 0; ci < C; ++ci) {
    int options = 0;
    for (int g = 0; g < G; ++g) {
      if (groups.constant_options[g][ci] > 0) ++options;
    }
    if (options == 0) return 0;
    space *= options;
  }
  if (space > BigInt(budget)) {
    throw BudgetExceeded("grouped iteration space " + space.str() +
                         " exceeds budget " + std::to_string(budget) +
                         "; consider Monte Carlo sampling");
  }

  auto choose = pascal_table(std::max(free_elements, 1));

  std::vector<int> totals(G, 0);  // constants + free elements per group
  WorldCount total = 0;

  // Distribute the free elements over groups; `weight` carries the
  // constant placements and per-element profile choices so far.
  std::function<void(int, int, BigInt)> distribute = [&](int g, int rem,
                                                         BigInt weight) {
    if (g == G - 1) {
      totals[g] += rem;
      BigInt leaf = weight;
      if (rem > 0) {
        BigInt p = 1;
        for (int i = 0; i < rem; ++i) p *= groups.sizes[g];
        leaf *= p;
      }
      bool ok = true;
      for (std::size_t i = 0; ok && i < c.constraints.size(); ++i) {
        BigInt in_cond = 0, in_tgt = 0;
        for (int gg = 0; gg < G; ++gg) {
          if (groups.signatures[gg][i] >= 1) in_cond += totals[gg];
          if (groups.signatures[gg][i] == 2) in_tgt += totals[gg];
        }
        ok = c.constraint_window_accepts(c.constraints[i], in_tgt, in_cond);
      }
      if (ok) total += leaf;
      totals[g] -= rem;
      return;
    }
    BigInt p = 1;
    for (int n_g = 0; n_g <= rem; ++n_g) {
      totals[g] += n_g;
      distribute(g + 1, rem - n_g, weight * choose[rem][n_g] * p);
      totals[g] -= n_g;
      p *= groups.sizes[g];
    }
  };

  // Assign each constant to a group compatible with its facts.
  std::function<void(int, BigInt)> place_constants = [&](int ci, BigInt weight) {
    if (ci == C) {
      distribute(0, free_elements, weight);
      return;
    }
    for (int g = 0; g < G; ++g) {
      std::uint64_t options = groups.constant_options[g][ci];
      if (options == 0) continue;
      ++totals[g];
      place_constants(ci + 1, weight * options);
      --totals[g];
    }
  };

  place_constants(0, 1);
  return total;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::ExactEnumeration: return "exact_enumeration";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::DirectInference: return "direct_inference";
  }
  return "exact_enumeration";
}

BeliefEstimate belief(const KnowledgeBase& kb, const Query& query, int N,
                      const ToleranceSpec& taus, std::uint64_t budget) {
  WorldCount denom = count_models(kb, N, taus, budget);
  if (denom == 0) throw UnsatisfiableKb(N, taus_to_string(taus));

  KnowledgeBase augmented = kb;
  for (const Literal& lit : query.target.literals) {
    augmented.add_fact(query.constant, lit.predicate, lit.negated);
  }
  augmented.normalize();
  WorldCount numer = count_models(augmented, N, taus, budget);

  BeliefEstimate estimate;
  estimate.value = Rational(numer, denom);
  estimate.method = Method::ExactEnumeration;
  estimate.N = N;
  estimate.taus = taus;
  estimate.model_count = denom;
  estimate.query_count = numer;
  return estimate;
}

BeliefEstimate sample_belief(const KnowledgeBase& kb, const Query& query, int N,
                             const ToleranceSpec& taus, std::uint64_t samples,
                             std::uint64_t seed) {
  const int C = static_cast<int>(kb.constants.size());
  if (N < C) {
    throw std::invalid_argument("domain size smaller than constant count");
  }
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  CompiledKb c = compile(kb, taus);

  int query_constant = -1;
  for (int i = 0; i < C; ++i) {
    if (kb.constants[i].name == query.constant) query_constant = i;
  }
  if (query_constant < 0) {
    throw std::invalid_argument("unknown constant '" + query.constant + "'");
  }
  Masks target = c.compile_conjunction(query.target);

  std::mt19937_64 rng(seed);
  const std::uint32_t limit = std::uint32_t{1} << c.k;
  std::uniform_int_distribution<std::uint32_t> draw(0, limit - 1);

  std::vector<std::uint32_t> world(N);
  std::uint64_t accepted = 0, hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    bool ok = true;
    for (int e = 0; e < N; ++e) {
      world[e] = draw(rng);
      if (!c.profile_feasible(world[e])) ok = false;
    }
    if (!ok) continue;
    for (int ci = 0; ok && ci < C; ++ci) {
      ok = c.constants[ci].facts.satisfied_by(world[ci]);
    }
    for (std::size_t i = 0; ok && i < c.constraints.size(); ++i) {
      BigInt in_cond = 0, in_tgt = 0;
      for (int e = 0; e < N; ++e) {
        if (c.constraints[i].condition.satisfied_by(world[e])) ++in_cond;
        if (c.constraints[i].target_and_condition.satisfied_by(world[e])) ++in_tgt;
      }
      ok = c.constraint_window_accepts(c.constraints[i], in_tgt, in_cond);
    }
    if (!ok) continue;
    ++accepted;
    if (target.satisfied_by(world[query_constant])) ++hits;
  }
  if (accepted == 0) {
    throw NoAcceptedSamples("no sampled world satisfied the knowledge base (" +
                            std::to_string(samples) + " samples)");
  }

  double p = static_cast<double>(hits) / static_cast<double>(accepted);
  double hw = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(accepted));
  if (hw == 0.0) hw = 3.0 / static_cast<double>(accepted);  // rule of three

  BeliefEstimate estimate;
  estimate.value = Rational(BigInt(hits), BigInt(accepted));
  estimate.method = Method::MonteCarlo;
  estimate.N = N;
  estimate.taus = taus;
  estimate.half_width = hw;
  estimate.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(samples);
  estimate.samples = samples;
  estimate.accepted = accepted;
  estimate.seed = seed;
  return estimate;
}

std::vector<SchedulePoint> default_schedule(const KnowledgeBase& kb) {
  std::size_t tau_count = kb.max_tolerance_index() + 1;
  std::vector<SchedulePoint> schedule;
  for (int N : {10, 20, 40, 60, 80}) {
    Rational tau = std::max(Rational(1, 50), Rational(2, N));
    schedule.push_back({N, ToleranceSpec::uniform(tau, tau_count)});
  }
  return schedule;
}

std::vector<SchedulePoint> uniform_schedule(const std::vector<int>& Ns,
                                            const Rational& tau,
                                            std::size_t tau_count) {
  std::vector<SchedulePoint> schedule;
  for (int N : Ns) schedule.push_back({N, ToleranceSpec::uniform(tau, tau_count)});
  return schedule;
}

ConvergenceReport converge(const KnowledgeBase& kb, const Query& query,
                           const std::vector<SchedulePoint>& schedule,
                           std::uint64_t budget) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  ConvergenceReport report;
  std::optional<Rational> previous;
  std::optional<Rational> previous_delta;
  for (const SchedulePoint& point : schedule) {
    ConvergencePoint cp;
    cp.N = point.N;
    cp.tau = point.taus.taus.empty() ? Rational(0) : point.taus.taus.front();
    try {
      BeliefEstimate estimate = belief(kb, query, point.N, point.taus, budget);
      if (previous) {
        cp.delta = estimate.value - *previous;
        if (previous_delta) {
          if (abs(*cp.delta) > abs(*previous_delta)) report.deltas_shrinking = false;
          if (*cp.delta * *previous_delta < 0) report.monotone = false;
        }
        previous_delta = cp.delta;
      }
      previous = estimate.value;
      report.limit_guess = estimate.value;
      cp.estimate = std::move(estimate);
    } catch (const UnsatisfiableKb& e) {
      cp.error = e.what();
      report.any_unsatisfiable = true;
    }
    report.points.push_back(std::move(cp));
  }
  return report;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "N,tau,belief_num,belief_den,belief_decimal,model_count_digits,status\n";
  for (const ConvergencePoint& p : report.points) {
    out << p.N << "," << format_rational(p.tau) << ",";
    if (p.estimate) {
      const BeliefEstimate& e = *p.estimate;
      out << numerator(e.value) << "," << denominator(e.value) << ","
          << to_double(e.value) << "," << e.model_count.str().size() << ",ok\n";
    } else {
      out << ",,,,unsatisfiable\n";
    }
  }
  return out.str();
}

nlohmann::json belief_to_json(const BeliefEstimate& e) {
  nlohmann::json j;
  j["value"] = format_rational(e.value);
  j["value_decimal"] = to_double(e.value);
  j["method"] = method_name(e.method);
  j["N"] = e.N;
  nlohmann::json taus = nlohmann::json::array();
  for (const Rational& t : e.taus.taus) taus.push_back(format_rational(t));
  j["taus"] = taus;
  if (e.method == Method::ExactEnumeration) {
    j["model_count"] = e.model_count.str();
    j["query_count"] = e.query_count.str();
  }
  if (e.method == Method::MonteCarlo) {
    j["half_width"] = e.half_width;
    j["acceptance_rate"] = e.acceptance_rate;
    j["samples"] = e.samples;
    j["accepted"] = e.accepted;
    j["seed"] = e.seed;
  }
  return j;
}

nlohmann::json convergence_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const ConvergencePoint& p : report.points) {
    nlohmann::json pj;
    pj["N"] = p.N;
    pj["tau"] = format_rational(p.tau);
    if (p.estimate) pj["estimate"] = belief_to_json(*p.estimate);
    if (!p.error.empty()) pj["error"] = p.error;
    if (p.delta) pj["delta"] = to_double(*p.delta);
    j["points"].push_back(pj);
  }
  if (report.limit_guess) j["limit_guess"] = format_rational(*report.limit_guess);
  j["deltas_shrinking"] = report.deltas_shrinking;
  j["monotone"] = report.monotone;
  j["any_unsatisfiable"] = report.any_unsatisfiable;
  // Finite schedules tighten N and tau together; the true limit takes
  // N to infinity before tau to zero, so this is an approximation.
  j["limit_note"] = "finite schedule interleaves N and tau limits";
  return j;
}

}  // namespace randworlds
