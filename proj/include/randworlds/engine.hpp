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

#ifndef RANDWORLDS_ENGINE_HPP_
#define RANDWORLDS_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randworlds/kb.hpp"

namespace randworlds {

// Exact computation of the fraction of size-N worlds consistent with a
// knowledge base in which a query holds. A world assigns one atom profile
// to each of N labelled domain elements; the first |constants| elements
// are the constants in sorted-name order. Approximate constraints are
// satisfied when the world's conditional proportion lies in the closed
// window [v - tau, v + tau] (<= v + tau for at-most, >= v - tau for
// at-least); a constraint whose reference class is empty in a world
// excludes that world.

inline constexpr std::uint64_t kDefaultIterationBudget = 100'000'000;

class UnsatisfiableKb : public std::runtime_error {
 public:
  UnsatisfiableKb(int n, std::string taus)
      : std::runtime_error("no world of size " + std::to_string(n) +
                           " satisfies the knowledge base (taus: " + taus +
                           "); proportions at size N are multiples of 1/N, so "
                           "an overly tight tolerance is the usual cause"),
        N(n) {}
  int N;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoAcceptedSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Profiles consistent with every universal rule; subset of atom_profiles.
std::vector<AtomProfile> feasible_profiles(const KnowledgeBase& kb);

using WorldCount = BigInt;

// Exact count of worlds of domain size N satisfying all rules, facts and
// toleranced constraints. Profiles are grouped by their constraint
// signature; within a group the per-element profile choice is summed out
// in closed form, and the group occupation vectors are enumerated with
// multinomial weights. Throws BudgetExceeded when the occupation-vector
// space exceeds `budget`, std::invalid_argument when N < |constants|.
WorldCount count_models(const KnowledgeBase& kb, int N, const ToleranceSpec& taus,
                        std::uint64_t budget = kDefaultIterationBudget);

enum class Method { ExactEnumeration, MonteCarlo, DirectInference };

const char* method_name(Method m);

struct BeliefEstimate {
  Rational value;       // exact for the enumeration path, mean for MC
  Method method = Method::ExactEnumeration;
  int N = 0;
  ToleranceSpec taus;
  WorldCount model_count;  // denominator (worlds satisfying the KB)
  WorldCount query_count;  // numerator (worlds also satisfying the query)

  // Monte Carlo diagnostics.
  double half_width = 0.0;  // 95% interval
  double acceptance_rate = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t accepted = 0;
  std::uint64_t seed = 0;
};

// count_models(kb + query-as-facts) / count_models(kb), exact.
// Throws UnsatisfiableKb when the denominator is zero.
BeliefEstimate belief(const KnowledgeBase& kb, const Query& query, int N,
                      const ToleranceSpec& taus,
                      std::uint64_t budget = kDefaultIterationBudget);

// Unbiased estimate of the same ratio by uniform world sampling with
// rejection; deterministic for a fixed seed.
BeliefEstimate sample_belief(const KnowledgeBase& kb, const Query& query, int N,
                             const ToleranceSpec& taus, std::uint64_t samples,
                             std::uint64_t seed);

struct SchedulePoint {
  int N = 0;
  ToleranceSpec taus;
};

// N in {10, 20, 40, 60, 80} with tau = max(1/50, 2/N) per index; tau must
// exceed the 1/N proportion grid spacing for satisfiability.
std::vector<SchedulePoint> default_schedule(const KnowledgeBase& kb);

std::vector<SchedulePoint> uniform_schedule(const std::vector<int>& Ns,
                                            const Rational& tau,
                                            std::size_t tau_count);

struct ConvergencePoint {
  int N = 0;
  Rational tau;  // first tolerance entry, for reporting
  std::optional<BeliefEstimate> estimate;
  std::string error;                  // set when the point was unsatisfiable
  std::optional<Rational> delta;      // value - previous successful value
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  std::optional<Rational> limit_guess;  // last successful value
  bool deltas_shrinking = true;   // |delta| nonincreasing over the run
  bool monotone = true;           // deltas do not change sign
  bool any_unsatisfiable = false;
};

ConvergenceReport converge(const KnowledgeBase& kb, const Query& query,
                           const std::vector<SchedulePoint>& schedule,
                           std::uint64_t budget = kDefaultIterationBudget);

// Columns: N, tau, belief_num, belief_den, belief_decimal,
// model_count_digits, status.
std::string convergence_csv(const ConvergenceReport& report);
nlohmann::json convergence_json(const ConvergenceReport& report);
nlohmann::json belief_to_json(const BeliefEstimate& estimate);

}  // namespace randworlds

#endif  // RANDWORLDS_ENGINE_HPP_
