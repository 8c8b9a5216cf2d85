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

#include "rpsbr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "rpsbr/attractor.hpp"
#include "rpsbr/scan.hpp"
#include "rpsbr/symmetry.hpp"

namespace rpsbr {

void CheckResult::merge(const CheckResult& other) {
  if (name.empty()) {
    name = other.name;
    property = other.property;
  }
  cases += other.cases;
  failures += other.failures;
  skipped += other.skipped;
  worst = std::max(worst, other.worst);
  if (first_failure.empty()) first_failure = other.first_failure;
}

namespace {

std::string where(const GameParams<double>& g) {
  return "alpha=" + format_double(g.alpha()) + " lambda=" + format_double(g.lambda());
}

void fail(CheckResult& r, const std::string& msg) {
  ++r.failures;
  if (r.first_failure.empty()) r.first_failure = msg;
}

// A uniform point whose first step is defined.
Strategy<double> sample_regular(const GameParams<double>& g, Rng& rng) {
  for (;;) {
    Strategy<double> x = sample_simplex<double>(rng);
    if (classify_region(g, x) != Region::Gamma) return x;
  }
}

CheckResult make_check(std::string name, std::string property) {
  CheckResult r;
  r.name = std::move(name);
  r.property = std::move(property);
  return r;
}

}  // namespace

std::optional<Strategy<double>> sample_b_point(const GameParams<double>& g, Rng& rng,
                                               std::size_t max_tries) {
  for (std::size_t t = 0; t < max_tries; ++t) {
    Strategy<double> x = sample_simplex<double>(rng);
    if (classify_region(g, x) == Region::R1 && classify_branch(g, x) == Branch::B) return x;
  }
  return std::nullopt;
}

CheckResult check_equivariance(const GameParams<double>& g, std::size_t n, Rng& rng) {
  CheckResult r = make_check("equivariance", "S(T(x)) == T(S(x)) within 1e-12");
  for (std::size_t s = 0; s < n; ++s) {
    const Strategy<double> x = sample_regular(g, rng);
    const double d = (cyclic_shift(step_t(g, x)) - step_t(g, cyclic_shift(x))).cwiseAbs().maxCoeff();
    ++r.cases;
    r.worst = std::max(r.worst, d);
    if (d > 1e-12) fail(r, where(g) + ": residual " + format_double(d));
  }
  return r;
}

CheckResult check_semiconjugacy(const GameParams<double>& g, std::size_t n, Rng& rng) {
  CheckResult r = make_check("semiconjugacy", "pi(T(x)) == f(pi(x)) within 1e-12");
  for (std::size_t s = 0; s < n; ++s) {
    const Strategy<double> x = sample_regular(g, rng);
    const Strategy<double> px = project_pi(g, x).x;
    if (classify_branch(g, px) == Branch::Gamma1) {
      ++r.skipped;
      continue;
    }
    const Strategy<double> tx = step_t(g, x);
    if (classify_region(g, tx) == Region::Gamma) {
      ++r.skipped;
      continue;
    }
    const double d = (project_pi(g, tx).x - step_f(g, px).x).cwiseAbs().maxCoeff();
    ++r.cases;
    r.worst = std::max(r.worst, d);
    if (d > 1e-12) fail(r, where(g) + ": residual " + format_double(d));
  }
  return r;
}

CheckResult check_conjugacy_lift(const GameParams<double>& g, std::size_t n,
                                 std::size_t steps, Rng& rng) {
  CheckResult r = make_check("conjugacy-lift", "lifted F-orbits equal T-orbits within 1e-10");
  for (std::size_t s = 0; s < n; ++s) {
    const Strategy<double> x = sample_regular(g, rng);
    const Trajectory<double> traj = iterate_t(g, x, steps);
    if (traj.hit_gamma) {
      ++r.skipped;
      continue;
    }
    const ReducedPoint<double> start = to_reduced(g, x);
    FOrbit<double> forbit;
    try {
      forbit = iterate_f(g, start.x, steps);
    } catch (const GammaCollision&) {
      ++r.skipped;
      continue;
    }
    const auto lifted = lift_orbit(forbit, start.sheet);
    double d = 0;
    for (std::size_t k = 0; k < lifted.size(); ++k) {
      d = std::max(d, (lifted[k] - traj.points[k]).cwiseAbs().maxCoeff());
    }
    ++r.cases;
    r.worst = std::max(r.worst, d);
    if (d > 1e-10) fail(r, where(g) + ": lifted orbit deviates by " + format_double(d));
  }
  return r;
}

CheckResult check_return_partition(const GameParams<double>& g,
                                   const ReturnStructure<double>& rs, std::size_t n, Rng& rng) {
  CheckResult r = make_check("return-partition",
                "B_k threshold partition: classify_bk equals the brute-force return time");
  for (std::size_t s = 0; s < n; ++s) {
    auto x = sample_b_point(g, rng);
    if (!x) {
      fail(r, where(g) + ": could not sample B");
      break;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        const int brute = first_return(g, *x, rs.bound).time;
        int closed = 0;
        try {
          closed = classify_bk(g, *x, rs);
        } catch (const std::domain_error&) {
          closed = 0;
        }
        ++r.cases;
        if (closed != brute) {
          fail(r, where(g) + ": x=" + detail::describe(*x) + " classify_bk=" +
                      std::to_string(closed) + " return_time=" + std::to_string(brute));
        }
        break;
      } catch (const ThresholdCollision&) {
        if (attempt == 1) ++r.skipped;
        *x = nudge_across_thresholds(g, *x);
      } catch (const GammaCollision&) {
        ++r.skipped;
        break;
      } catch (const BoundViolation& e) {
        ++r.cases;
        fail(r, where(g) + ": " + e.what());
        break;
      }
    }
  }
  return r;
}

CheckResult check_closed_form_return(const GameParams<double>& g,
                                     const ReturnStructure<double>& rs, std::size_t n,
                                     Rng& rng) {
  CheckResult r = make_check("closed-form-return",
                "closed-form branch map equals f composed return-time times, within 1e-10");
  for (std::size_t s = 0; s < n; ++s) {
    auto x = sample_b_point(g, rng);
    if (!x) {
      fail(r, where(g) + ": could not sample B");
      break;
    }
    try {
      const Return<double> brute = first_return(g, *x, rs.bound);
      const Strategy<double> closed = branch_map(g, brute.time, *x);
      const double d = (closed - brute.point).cwiseAbs().maxCoeff();
      ++r.cases;
      r.worst = std::max(r.worst, d);
      if (d > 1e-10) fail(r, where(g) + ": residual " + format_double(d));
    } catch (const GammaCollision&) {
      ++r.skipped;
    }
  }
  return r;
}

CheckResult check_fixed_point_residuals(const GameParams<double>& g, int k_max) {
  CheckResult r = make_check("fixed-point-residual",
                "P_k(w_k) == w_k within 1e-12 and closed form == linear solve");
  for (int k = 1; k <= k_max; ++k) {
    const Strategy<double> w = w_closed_form(g, k);
    const double residual = (branch_map(g, k, w) - w).cwiseAbs().maxCoeff();
    const double route_gap = (branch_fixed_point_solve(g, k) - w).cwiseAbs().maxCoeff();
    const double sum_gap = std::abs(w.sum() - 1);
    const double d = std::max({residual, route_gap, sum_gap});
    ++r.cases;
    r.worst = std::max(r.worst, d);
    if (d > 1e-12) {
      fail(r, where(g) + " k=" + std::to_string(k) + ": residual " + format_double(d));
    }
  }
  return r;
}

CheckResult check_membership(const GameParams<double>& g, const ReturnStructure<double>& rs) {
  CheckResult r = make_check("region-membership",
                "(alpha, lambda) in R_k iff w_k lies in B_k; members form an interval");
  const HeadTail ht = head_tail_count(g);
  const Vec3<double> u = u_alpha(g);
  const Vec3<double> su = cyclic_shift(u);
  const Vec3<double> s2u = cyclic_shift(u, 2);
  std::vector<int> members;
  for (int k = 1; k <= ht.tail + 10; ++k) {
    const Strategy<double> w = w_closed_form(g, k);
    const double s = s2u.dot(w);
    const double margins[] = {u.dot(w) - 1, branch_threshold(g) - u.dot(w), 1 - su.dot(w),
                              s - rs.b(k - 1), rs.b(k) - s};
    const bool geometric = std::all_of(std::begin(margins), std::end(margins),
                                       [](double d) { return d > 0; });
    const bool analytic = in_region_rk(g, k);
    if (analytic) members.push_back(k);
    // w_k on an edge of B_k: (alpha, lambda) is a bifurcation point for k.
    if (std::any_of(std::begin(margins), std::end(margins),
                    [](double d) { return std::abs(d) < 1e-12; })) {
      ++r.skipped;
      continue;
    }
    ++r.cases;
    if (geometric != analytic) {
      fail(r, where(g) + " k=" + std::to_string(k) + ": in_region_rk=" +
                  (analytic ? "true" : "false") + " but w_k in B_k is " +
                  (geometric ? "true" : "false"));
    }
  }
  const bool interval = !members.empty() && members.front() == ht.head &&
                        members.back() == ht.tail &&
                        static_cast<int>(members.size()) == ht.count;
  ++r.cases;
  if (!interval) fail(r, where(g) + ": member set is not the interval [h, t]");
  return r;
}

CheckResult check_itinerary_monotonicity(const GameParams<double>& g, std::size_t n,
                                         std::size_t length, Rng& rng) {
  CheckResult r = make_check("itinerary-monotonicity",
                "itineraries respect the return-time bound and monotonicity rules");
  const ReturnStructure<double> rs = return_structure(g);
  for (std::size_t s = 0; s < n; ++s) {
    auto x = sample_b_point(g, rng);
    if (!x) {
      fail(r, where(g) + ": could not sample B");
      break;
    }
    Itinerary it;
    try {
      it = itinerary(g, *x, length);
    } catch (const ItineraryInterrupted&) {
      ++r.skipped;
      continue;
    } catch (const BoundViolation& e) {
      ++r.cases;
      fail(r, where(g) + ": " + e.what());
      continue;
    }
    ++r.cases;
    const auto violations = check_monotonicity(it.entries, rs.m);
    if (!violations.empty()) {
      fail(r, where(g) + ": rule (" + std::to_string(violations.front().clause) +
                  ") fails at index " + std::to_string(violations.front().index));
    }
  }
  return r;
}

CheckResult check_itinerary_stabilization(const GameParams<double>& g, std::size_t n,
                                          Rng& rng) {
  CheckResult r = make_check("itinerary-stabilization",
                "itineraries stabilize within 10 C returns on a value in [h, t]");
  const ReturnStructure<double> rs = return_structure(g);
  const HeadTail ht = head_tail_count(g);
  const std::size_t window = static_cast<std::size_t>(10 * rs.bound) + 3;
  for (std::size_t s = 0; s < n; ++s) {
    auto x = sample_b_point(g, rng);
    if (!x) {
      fail(r, where(g) + ": could not sample B");
      break;
    }
    Itinerary it;
    try {
      it = itinerary(g, *x, window);
    } catch (const ItineraryInterrupted&) {
      ++r.skipped;
      continue;
    }
    ++r.cases;
    if (!it.stabilized_value) {
      fail(r, where(g) + ": no stabilization within " + std::to_string(window) + " returns");
    } else if (*it.stabilized_value < ht.head || *it.stabilized_value > ht.tail) {
      fail(r, where(g) + ": stabilized on " + std::to_string(*it.stabilized_value) +
                  " outside [h, t]");
    }
  }
  return r;
}

CheckResult check_global_convergence(const GameParams<double>& g, std::size_t n, Rng& rng,
                                     double tol, int budget) {
  CheckResult r = make_check("global-convergence",
                "random starts converge to an enumerated periodic orbit");
  const AttractorReport<double> report = enumerate_attractor(g);
  const OrbitMatcher matcher(g, report);
  for (std::size_t s = 0; s < n; ++s) {
    const Strategy<double> x = sample_simplex<double>(rng);
    const StartOutcome out = converge_start(g, matcher, x, budget, tol);
    if (out.cell.kind == CellKind::GammaHit) {
      ++r.skipped;
      continue;
    }
    ++r.cases;
    if (!in_simplex<double>(out.final_point)) {
      fail(r, where(g) + ": orbit of " + detail::describe(x) + " left the simplex");
    } else if (out.cell.kind != CellKind::Orbit) {
      fail(r, where(g) + ": orbit of " + detail::describe(x) + " unresolved after " +
                  std::to_string(budget) + " steps");
    }
  }
  return r;
}

std::vector<std::pair<double, double>> VerifyOptions::default_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double lambda : {0.3, 0.5, 0.8, 0.95}) grid.emplace_back(alpha, lambda);
  }
  return grid;
}

bool VerifyReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["seed"] = options.seed;
  j["samples"] = options.samples;
  j["gamma_tol"] = options.gamma_tol;
  j["threshold_offset"] = options.threshold_offset;
  auto& grid = j["grid"] = nlohmann::ordered_json::array();
  for (const auto& [alpha, lambda] : options.grid) {
    grid.push_back({{"alpha", alpha}, {"lambda", lambda}});
  }
  auto& checks_json = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["property"] = c.property;
    cj["passed"] = c.passed();
    cj["cases"] = c.cases;
    cj["failures"] = c.failures;
    cj["skipped"] = c.skipped;
    cj["worst_residual"] = c.worst;
    if (!c.first_failure.empty()) cj["first_failure"] = c.first_failure;
    checks_json.push_back(std::move(cj));
  }
  return j.dump(2);
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.options = options;
  Rng rng(options.seed);
  const std::size_t n = options.samples;
  CheckResult eq, semi, lift, part, closed, fixed, member, mono, stab, conv;
  for (const auto& [alpha, lambda] : options.grid) {
    const auto g = GameParams<double>::from_alpha(alpha, lambda, options.gamma_tol);
    ReturnStructure<double> rs = return_structure(g);
    rs.threshold_offset = options.threshold_offset;
    eq.merge(check_equivariance(g, n, rng));
    semi.merge(check_semiconjugacy(g, n, rng));
    lift.merge(check_conjugacy_lift(g, std::max<std::size_t>(1, n / 10), 200, rng));
    part.merge(check_return_partition(g, rs, n, rng));
    closed.merge(check_closed_form_return(g, rs, n, rng));
    fixed.merge(check_fixed_point_residuals(g, 50));
    member.merge(check_membership(g, rs));
    mono.merge(check_itinerary_monotonicity(g, n, 50, rng));
    stab.merge(check_itinerary_stabilization(g, std::max<std::size_t>(1, n / 10), rng));
    conv.merge(check_global_convergence(g, n, rng));
  }
  report.checks = {eq, semi, lift, part, closed, fixed, member, mono, stab, conv};
  return report;
}

}  // namespace rpsbr
