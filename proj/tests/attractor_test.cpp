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

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "rpsbr/attractor.hpp"
#include "rpsbr/errors.hpp"
#include "rpsbr/poincare.hpp"

namespace rpsbr {
namespace {

using G = GameParams<double>;
using V = Strategy<double>;

bool near(const V& a, const V& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

// The zero-sum count as the introduction writes it, in terms of epsilon.
int zero_sum_count_eps(double eps) {
  const double arg = (2 + eps - std::sqrt(3 * eps * (4 - eps))) / (2 * (1 - eps));
  return static_cast<int>(std::ceil(std::log(arg) / std::log(1 - eps))) - 1;
}

// Largest root in (0, 1) of q, by dense sign scan and bisection.
double q_root_by_scan(const G& g) {
  const int n = 20000;
  double root = -1;
  for (int i = 1; i < n; ++i) {
    double lo = double(i - 1) / n, hi = double(i) / n;
    if (q_poly(g, lo) > 0 && q_poly(g, hi) <= 0) {
      for (int it = 0; it < 100; ++it) {
        const double mid = (lo + hi) / 2;
        (q_poly(g, mid) > 0 ? lo : hi) = mid;
      }
      root = (lo + hi) / 2;
    }
  }
  return root;
}

TEST_SUITE("attractor") {

TEST_CASE("branch fixed point examples") {
  const G g = G::from_alpha(1, 0.5);
  CHECK(near(w_closed_form(g, 1), V(4.0 / 7, 1.0 / 7, 2.0 / 7), 1e-15));
  const G h = G::from_alpha(1, 0.8);
  for (int k = 1; k <= 3; ++k) {
    const V w = w_fixed_point(h, k).w;
    CHECK(near(branch_map(h, k, w), w, 1e-12));
    CHECK(w.sum() == doctest::Approx(1).epsilon(1e-15));
  }
}

TEST_CASE("closed form survives large k") {
  const G g = G::from_alpha(0.5, 0.5);
  const V w = w_closed_form(g, 2000);  // lambda^(3k) underflows
  CHECK(std::isfinite(w.sum()));
  CHECK(w.sum() == doctest::Approx(1));
  CHECK(near(w, V(0, 1, 0), 1e-12));
}

TEST_CASE("q and r examples") {
  const G g = G::from_alpha(1, 0.8);
  CHECK(q_poly(g, 0.0) == doctest::Approx(1));
  CHECK(q_poly(g, 0.8) == doctest::Approx(-0.56));
  CHECK(r_root(g) == doctest::Approx((2.2 - std::sqrt(2.28)) / 1.6).epsilon(1e-14));
  CHECK(r_root(g) == doctest::Approx(0.43127).epsilon(1e-5));
  CHECK(std::abs(r_root(G::from_alpha(2, 0.9999)) - 1) < 1e-3);
  CHECK(std::abs(r_root(G::from_alpha(0.5, 0.9999)) - 0.5) < 1e-3);
}

TEST_CASE("root properties on a grid") {
  for (double alpha : {0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 3.0, 10.0}) {
    for (double lam : {0.05, 0.2, 0.5, 0.8, 0.95, 0.999}) {
      const G g = G::from_alpha(alpha, lam);
      const double r = r_root(g);
      CAPTURE(alpha);
      CAPTURE(lam);
      CHECK(r > 0);
      CHECK(r < lam);
      CHECK(r < alpha * lam);
      CHECK(std::abs(q_poly(g, r)) < 1e-10);
      CHECK(r == doctest::Approx(q_root_by_scan(g)).epsilon(1e-9));
      for (double x = 0.01; x < 1; x += 0.01) {
        if (std::abs(x - r) > 1e-9) CHECK((q_poly(g, x) < 0) == (x > r));
      }
    }
  }
}

TEST_CASE("r stays finite where q loses its quadratic term") {
  const double lam = 0.75;
  const G g = G::from_alpha(1 / (1 - lam), lam);  // alpha lambda - alpha + 1 = 0
  const double r = r_root(g);
  const double linear = g.alpha() / ((2 * g.alpha() + 1) / lam - g.alpha());
  CHECK(r == doctest::Approx(linear).epsilon(1e-12));
  CHECK(std::abs(q_poly(g, r)) < 1e-12);
}

TEST_CASE("region membership examples") {
  const G g = G::from_alpha(1, 0.8);
  CHECK(in_region_rk(g, 1));
  CHECK(in_region_rk(g, 2));
  CHECK(in_region_rk(g, 3));
  CHECK_FALSE(in_region_rk(g, 4));
  CHECK_THROWS_AS(in_region_rk(g, 0), std::invalid_argument);
  for (double alpha : {0.3, 0.7, 1.5}) {
    for (double lam : {0.2, 0.5, 0.9}) {
      const G h = G::from_alpha(alpha, lam);
      if (std::abs(lam - alpha) > 1e-9) CHECK(in_region_rk(h, 1) == (lam < alpha));
    }
  }
}

TEST_CASE("membership matches the geometric branch test") {
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double lam = 0.05; lam < 0.99; lam += 0.0137) {
      const G g = G::from_alpha(alpha, lam);
      const auto rs = return_structure(g);
      const auto ht = head_tail_count(g);
      if (ht.boundary) continue;
      std::vector<int> members;
      for (int k = 1; k <= ht.tail + 5; ++k) {
        const bool geometric = in_branch(g, k, w_closed_form(g, k), rs);
        CHECK(geometric == in_region_rk(g, k));
        if (geometric) members.push_back(k);
      }
      REQUIRE_FALSE(members.empty());
      CHECK(members.front() == ht.head);
      CHECK(members.back() == ht.tail);
      CHECK(static_cast<int>(members.size()) == ht.count);
    }
  }
}

TEST_CASE("head, tail and count examples") {
  auto check_ht = [](double alpha, double lam, int h, int t) {
    const auto ht = head_tail_count(G::from_alpha(alpha, lam));
    CAPTURE(alpha);
    CAPTURE(lam);
    CHECK(ht.head == h);
    CHECK(ht.tail == t);
    CHECK(ht.count == t - h + 1);
    CHECK_FALSE(ht.boundary);
  };
  check_ht(1, 0.8, 1, 3);
  check_ht(1, 25.0 / 27, 1, 6);
  check_ht(0.5, 25.0 / 28, 7, 8);
  check_ht(0.5, 100.0 / 111, 7, 9);
  check_ht(0.5, 10.0 / 11, 8, 9);
}

TEST_CASE("boundary parameters are flagged") {
  CHECK(head_tail_count(G::from_alpha(0.5, 0.5)).boundary);  // lambda = alpha
  const double lam1 = bifurcation_point_sym<double>(1);
  CHECK(head_tail_count(G::from_alpha(1, lam1)).boundary);
}

TEST_CASE("head and tail are monotone in lambda") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    int prev_h = 0, prev_t = 0;
    for (double lam = 0.05; lam < 0.995; lam += 0.00113) {
      const auto ht = head_tail_count(G::from_alpha(alpha, lam));
      CHECK(ht.head >= prev_h);
      CHECK(ht.tail >= prev_t);
      prev_h = ht.head;
      prev_t = ht.tail;
    }
  }
}

TEST_CASE("enumeration examples") {
  const auto rep = enumerate_attractor(G::from_alpha(1, 0.8));
  REQUIRE(rep.orbits.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(rep.orbits[j].k == j + 1);
    CHECK(rep.orbits[j].period == 3 * (j + 1));
    CHECK(rep.orbits[j].points.size() == std::size_t(3 * (j + 1)));
  }
  CHECK_FALSE(rep.shapley.has_value());

  const auto rep2 = enumerate_attractor(G::from_alpha(0.5, 10.0 / 11));
  REQUIRE(rep2.orbits.size() == 2);
  for (const auto& o : rep2.orbits) {
    CHECK(o.period >= 18);
    CHECK(o.period <= 27);
  }
  CHECK(rep2.shapley.has_value());
}

TEST_CASE("enumerated orbits are periodic with least period 3k") {
  for (double alpha : {0.5, 1.0, 3.0}) {
    for (double lam : {0.6, 0.85, 0.93}) {
      const G g = G::from_alpha(alpha, lam);
      const auto rep = enumerate_attractor(g);
      CHECK(rep.orbits.size() == std::size_t(rep.count));
      for (const auto& o : rep.orbits) {
        const int p = o.period;
        CHECK(p == 3 * o.k);
        for (int j = 0; j < p; ++j) {
          CHECK(near(step_t(g, o.points[j]), o.points[(j + 1) % p], 1e-10));
        }
        for (int d : detail::proper_divisors(p)) {
          bool fixed = true;
          for (int j = 0; j < p; ++j) {
            fixed = fixed && near(o.points[(j + d) % p], o.points[j], 1e-9);
          }
          CHECK_FALSE(fixed);
        }
      }
    }
  }
}

TEST_CASE("Nash point and Shapley triangle") {
  const V e = nash_point<double>();
  CHECK(e.sum() == doctest::Approx(1));
  const V p = payoff_vector(G(3, 1.3, 0.5), e);
  CHECK(p(0) == doctest::Approx(p(1)));
  CHECK(p(1) == doctest::Approx(p(2)));
  for (const V& v : shapley_triangle(G::from_alpha(1, 0.5))) CHECK(near(v, e, 1e-15));
  CHECK(near(shapley_triangle(G::from_alpha(0.5, 0.5))[0], V(2, 4, 1) / 7, 1e-15));
}

TEST_CASE("attractor shrinks linearly in epsilon towards its limit") {
  // Calibration behind the 0.02 / 0.05 limit tolerances: both distances are
  // close to c * epsilon (c ~ 2.36 and ~ 1.2).
  const auto favourable = [](double lam) {
    const auto rep = enumerate_attractor(G::from_alpha(2, lam));
    return max_distance_to(rep, rep.nash);
  };
  CHECK(favourable(0.999) / 1e-3 == doctest::Approx(favourable(0.99) / 1e-2).epsilon(0.01));
  CHECK(favourable(0.9999) < 0.02);

  const auto unfavourable = [](double lam) {
    const auto rep = enumerate_attractor(G::from_alpha(0.5, lam));
    return hausdorff_to_triangle(rep, *rep.shapley, 500);
  };
  const double h2 = unfavourable(0.99), h3 = unfavourable(0.999);
  CHECK(h3 < h2 / 5);
  CHECK(h3 < 0.05);
}

TEST_CASE("zero-sum count formula") {
  CHECK(count_formula_n1(0.8) == 3);
  const double lam1 = bifurcation_point_sym<double>(1);
  CHECK(count_formula_n1(lam1 + 1e-6) == 2);
  CHECK(count_formula_n1(lam1 - 1e-6) == 1);
  CHECK_THROWS_AS(count_formula_n1(1.0), std::invalid_argument);
}

TEST_CASE("zero-sum count agrees with head/tail and the epsilon form") {
  int compared = 0;
  for (int i = 1; i <= 10000; ++i) {
    const double lam = 0.01 + 0.98 * (i - 0.5) / 10000;
    const auto ht = head_tail_count(G::from_alpha(1, lam));
    if (ht.boundary) continue;
    CHECK(count_formula_n1(lam) == ht.count);
    CHECK(zero_sum_count_eps(1 - lam) == ht.count);
    ++compared;
  }
  CHECK(compared > 9990);
}

TEST_CASE("limit counts") {
  const auto two = limit_count(G::from_alpha(2, 0.5));
  CHECK(two.liminf == 5);
  CHECK(two.limsup == 5);
  CHECK(head_tail_count(G::from_alpha(2, 0.99999)).count == 5);

  const auto half = limit_count(G::from_alpha(0.5, 0.5));
  CHECK(half.liminf == 3);
  CHECK(half.limsup == 4);
  const int n = head_tail_count(G::from_alpha(0.5, 0.99999)).count;
  CHECK(n >= 3);
  CHECK(n <= 4);

  CHECK(limit_count(G::from_alpha(1, 0.5)).unbounded);
  CHECK(head_tail_count(G::from_alpha(1, 0.05)).count == 1);
  CHECK(limit_count(G::from_alpha(3, 0.5)).as_lambda_to_zero == 1);
}

TEST_CASE("unfavourable counts keep oscillating near lambda = 1") {
  std::set<int> seen;
  for (double eps = 1e-3; eps > 1e-6; eps *= 0.97) {
    seen.insert(head_tail_count(G::from_alpha(0.5, 1 - eps)).count);
  }
  CHECK(seen == std::set<int>{3, 4});
}

TEST_CASE("zero-sum bifurcation points") {
  CHECK(bifurcation_point_sym<double>(1) == doctest::Approx(0.39265).epsilon(1e-4 / 0.39265));
  CHECK(bifurcation_point_sym<double>(2) == doctest::Approx(0.69461).epsilon(1e-4 / 0.69461));
  for (int n = 1; n <= 8; ++n) {
    const double lam = bifurcation_point_sym<double>(n);
    CHECK(count_formula_n1(lam - 1e-6) == n);
    CHECK(count_formula_n1(lam + 1e-6) == n + 1);
  }
  CHECK_THROWS_AS(bifurcation_point_sym<double>(0), BracketFailure);
}

}  // TEST_SUITE

}  // namespace
}  // namespace rpsbr
