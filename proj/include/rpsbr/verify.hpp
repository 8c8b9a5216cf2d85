// Copyright 2026 The rpsbr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Randomized invariant checks tying the closed-form theory to brute-force
// dynamics. Each check returns a CheckResult; run_verification sweeps a
// parameter grid and aggregates them into a report.

#ifndef RPSBR_VERIFY_HPP_
#define RPSBR_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rpsbr/core.hpp"
#include "rpsbr/poincare.hpp"

namespace rpsbr {

using Rng = std::mt19937_64;

struct CheckResult {
  std::string name;
  std::string property;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;  // samples that hit a measure-zero boundary twice
  double worst = 0;         // largest residual seen, when the check has one
  std::string first_failure;

  bool passed() const { return failures == 0 && cases > 0; }
  void merge(const CheckResult& other);
};

// Uniform point of B (inside R1), by rejection; nullopt after max_tries.
std::optional<Strategy<double>> sample_b_point(const GameParams<double>& g, Rng& rng,
                                               std::size_t max_tries = 10'000'000);

// S(T(x)) == T(S(x)).
CheckResult check_equivariance(const GameParams<double>& g, std::size_t n, Rng& rng);
// pi(T(x)) == f(pi(x)).
CheckResult check_semiconjugacy(const GameParams<double>& g, std::size_t n, Rng& rng);
// Lifted F-orbits coincide with T-orbits.
CheckResult check_conjugacy_lift(const GameParams<double>& g, std::size_t n,
                                 std::size_t steps, Rng& rng);
// classify_bk (threshold partition) == brute-force return time.
CheckResult check_return_partition(const GameParams<double>& g,
                                   const ReturnStructure<double>& rs, std::size_t n, Rng& rng);
// Closed-form branch map == f iterated return-time times.
CheckResult check_closed_form_return(const GameParams<double>& g,
                                     const ReturnStructure<double>& rs, std::size_t n,
                                     Rng& rng);
// P_k(w_k) == w_k and closed-form w_k == linear solve, k = 1..k_max.
CheckResult check_fixed_point_residuals(const GameParams<double>& g, int k_max);
// (alpha, lambda) in R_k iff w_k lies in B_k; the member set is an interval.
CheckResult check_membership(const GameParams<double>& g, const ReturnStructure<double>& rs);
// Itineraries of length `length` obey the return-time bound and the three
// monotonicity rules.
CheckResult check_itinerary_monotonicity(const GameParams<double>& g, std::size_t n,
                                         std::size_t length, Rng& rng);
// Itineraries stabilize within 10 C returns, on a value in [h, t].
CheckResult check_itinerary_stabilization(const GameParams<double>& g, std::size_t n,
                                          Rng& rng);
// Random starts converge within tol to an enumerated orbit.
CheckResult check_global_convergence(const GameParams<double>& g, std::size_t n, Rng& rng,
                                     double tol = 1e-8, int budget = 1'000'000);

struct VerifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::vector<std::pair<double, double>> grid = default_grid();  // (alpha, lambda)
  double gamma_tol = 1e-9;
  // Mutation hook: shifts every b_k threshold. Nonzero values must make the
  // suite fail.
  double threshold_offset = 0;

  static std::vector<std::pair<double, double>> default_grid();
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string to_json() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace rpsbr

#endif  // RPSBR_VERIFY_HPP_
