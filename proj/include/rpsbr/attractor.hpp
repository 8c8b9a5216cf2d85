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

// Closed-form description of the attractor of T: the branch fixed points
// w_k, the parameter regions R_k = {r(alpha, lambda) < lambda^k < alpha}, the
// head/tail/count of the chain of periodic orbits, and the lambda -> 0 and
// lambda -> 1 limit objects.

#ifndef RPSBR_ATTRACTOR_HPP_
#define RPSBR_ATTRACTOR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rpsbr/core.hpp"
#include "rpsbr/errors.hpp"
#include "rpsbr/poincare.hpp"
#include "rpsbr/symmetry.hpp"

namespace rpsbr {

template <typename Scalar>
struct BranchFixedPoint {
  int k = 0;
  Strategy<Scalar> w;
  bool is_attractor_member = false;
};

template <typename Scalar>
struct PeriodicOrbit {
  int k = 0;
  int period = 0;                       // 3k
  std::vector<Strategy<Scalar>> points;  // points[0] == w_k, points[j+1] == T(points[j])
};

struct HeadTail {
  int head = 0;
  int tail = 0;
  int count = 0;
  bool boundary = false;  // a log-ratio sits on an integer: adjacent counts both legitimate
};

template <typename Scalar>
struct AttractorReport {
  int head = 0;
  int tail = 0;
  int count = 0;
  bool boundary = false;
  std::vector<PeriodicOrbit<Scalar>> orbits;
  Strategy<Scalar> nash;
  std::optional<std::array<Strategy<Scalar>, 3>> shapley;  // only for alpha < 1
};

// w_k =
//   (lambda^(k-1) (1 - lambda^k),
//    1 - lambda^(k-1) + lambda^(3k-1) - lambda^(3k),
//    lambda^(2k-1) (1 - lambda^k)) / (1 - lambda^(3k)),
// evaluated through expm1 so that lambda close to 1 keeps full precision.
template <typename Scalar>
Strategy<Scalar> w_closed_form(const GameParams<Scalar>& g, int k) {
  using std::exp;
  using std::expm1;
  using std::log;
  if (k < 1) throw std::invalid_argument("branch index k must be >= 1");
  const Scalar L = log(g.lambda());
  const Scalar denom = -expm1(3 * k * L);
  const Scalar one_minus_lam_k = -expm1(k * L);
  return Strategy<Scalar>(
      exp((k - 1) * L) * one_minus_lam_k / denom,
      (-expm1((k - 1) * L) + exp((3 * k - 1) * L) * (1 - g.lambda())) / denom,
      exp((2 * k - 1) * L) * one_minus_lam_k / denom);
}

// q(x) = (alpha - (alpha - 1)/lambda) x^2 + (alpha - (2 alpha + 1)/lambda) x + alpha.
template <typename Scalar>
Scalar q_poly(const GameParams<Scalar>& g, Scalar x) {
  const Scalar a = g.alpha();
  const Scalar lam = g.lambda();
  return (a - (a - 1) / lam) * x * x + (a - (2 * a + 1) / lam) * x + a;
}

// The root of q in (0, 1). Written in rationalized form
//   r = 2 alpha lambda / (1 + 2 alpha - alpha lambda + sqrt(D)),
// which agrees with the quadratic formula and stays finite where the leading
// coefficient of q vanishes (alpha = 1 / (1 - lambda)).
template <typename Scalar>
Scalar r_root(const GameParams<Scalar>& g) {
  using std::sqrt;
  const Scalar a = g.alpha();
  const Scalar lam = g.lambda();
  const Scalar disc = a * a * (4 - 3 * lam * lam) + a * (4 - 6 * lam) + 1;
  return 2 * a * lam / (1 + 2 * a - a * lam + sqrt(disc));
}

template <typename Scalar>
bool in_region_rk(const GameParams<Scalar>& g, int k) {
  using std::exp;
  using std::log;
  if (k < 1) throw std::invalid_argument("branch index k must be >= 1");
  const Scalar lam_k = exp(k * log(g.lambda()));
  return r_root(g) < lam_k && lam_k < g.alpha();
}

template <typename Scalar>
BranchFixedPoint<Scalar> w_fixed_point(const GameParams<Scalar>& g, int k) {
  return {k, w_closed_form(g, k), in_region_rk(g, k)};
}

namespace detail {

template <typename Scalar>
bool near_integer(Scalar v) {
  using std::abs;
  using std::round;
  const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), abs(v));
  return abs(v - round(v)) <= tol;
}

}  // namespace detail

// h = 1 for alpha >= 1 and floor(log_lambda alpha) + 1 otherwise;
// t = ceil(log_lambda r) - 1; N = t - h + 1.
template <typename Scalar>
HeadTail head_tail_count(const GameParams<Scalar>& g) {
  using std::ceil;
  using std::floor;
  using std::log;
  HeadTail ht;
  const Scalar log_lam = log(g.lambda());
  if (g.alpha() >= 1) {
    ht.head = 1;
  } else {
    const Scalar la = log(g.alpha()) / log_lam;
    ht.head = static_cast<int>(floor(la)) + 1;
    ht.boundary = ht.boundary || detail::near_integer(la);
  }
  const Scalar lr = log(r_root(g)) / log_lam;
  ht.tail = static_cast<int>(ceil(lr)) - 1;
  ht.boundary = ht.boundary || detail::near_integer(lr);
  ht.count = ht.tail - ht.head + 1;
  return ht;
}

namespace detail {

inline std::vector<int> proper_divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

}  // namespace detail

// The T-orbit through w_k, closed and checked for minimal period 3k.
template <typename Scalar>
PeriodicOrbit<Scalar> lift_branch_orbit(const GameParams<Scalar>& g, int k,
                                        Scalar closure_tol = Scalar(1e-10)) {
  PeriodicOrbit<Scalar> orbit;
  orbit.k = k;
  orbit.period = 3 * k;
  orbit.points.reserve(orbit.period);
  Strategy<Scalar> p = w_closed_form(g, k);
  for (int j = 0; j < orbit.period; ++j) {
    orbit.points.push_back(p);
    p = step_t(g, p);
  }
  const Scalar gap = (p - orbit.points.front()).norm();
  if (!(gap < closure_tol)) {
    throw OrbitClosureFailure("orbit through w_" + std::to_string(k) +
                              " fails to close after " + std::to_string(orbit.period) +
                              " steps (gap " + std::to_string(static_cast<double>(gap)) +
                              ")");
  }
  for (int d : detail::proper_divisors(orbit.period)) {
    if ((orbit.points[d] - orbit.points.front()).norm() < closure_tol) {
      throw OrbitClosureFailure("orbit through w_" + std::to_string(k) +
                                " returns after " + std::to_string(d) +
                                " steps, before its period " +
                                std::to_string(orbit.period));
    }
  }
  return orbit;
}

// Vertices v, S(v), S^2(v) with v = (alpha, 1, alpha^2) / (1 + alpha + alpha^2).
template <typename Scalar>
std::array<Strategy<Scalar>, 3> shapley_triangle(const GameParams<Scalar>& g) {
  const Scalar a = g.alpha();
  const Strategy<Scalar> v = Strategy<Scalar>(a, 1, a * a) / (1 + a + a * a);
  return {v, cyclic_shift(v), cyclic_shift(v, 2)};
}

// Builds every periodic orbit of the attractor. On a bifurcation boundary the
// report is still produced (flagged); orbits whose lift runs into an
// indifference set there are left out.
template <typename Scalar>
AttractorReport<Scalar> enumerate_attractor(const GameParams<Scalar>& g) {
  const HeadTail ht = head_tail_count(g);
  AttractorReport<Scalar> rep;
  rep.head = ht.head;
  rep.tail = ht.tail;
  rep.count = ht.count;
  rep.boundary = ht.boundary;
  rep.nash = nash_point<Scalar>();
  if (g.alpha() < 1) rep.shapley = shapley_triangle(g);
  for (int k = ht.head; k <= ht.tail; ++k) {
    if (!in_region_rk(g, k)) {
      if (ht.boundary) continue;
      throw OrbitClosureFailure("w_" + std::to_string(k) +
                                " is not a fixed point of the return map");
    }
    try {
      rep.orbits.push_back(lift_branch_orbit(g, k));
    } catch (const std::runtime_error&) {
      if (!ht.boundary) throw;
    }
  }
  return rep;
}

// N_1(lambda) = ceil(log_lambda((3 - lambda - sqrt(3 (1 - lambda)(3 + lambda))) / (2 lambda))) - 1.
template <typename Scalar>
int count_formula_n1(Scalar lambda) {
  using std::ceil;
  using std::log;
  using std::sqrt;
  if (!(lambda > 0) || !(lambda < 1)) {
    throw std::invalid_argument("lambda must lie in (0, 1)");
  }
  const Scalar r = (3 - lambda - sqrt(3 * (1 - lambda) * (3 + lambda))) / (2 * lambda);
  return static_cast<int>(ceil(log(r) / log(lambda))) - 1;
}

struct LimitCount {
  int as_lambda_to_zero = 1;
  bool unbounded = false;  // alpha == 1: N grows without bound as lambda -> 1
  int liminf = 0;          // as lambda -> 1; equals limsup when alpha > 1
  int limsup = 0;
};

template <typename Scalar>
LimitCount limit_count(const GameParams<Scalar>& g) {
  using std::ceil;
  const Scalar a = g.alpha();
  LimitCount lc;
  if (a == 1) {
    lc.unbounded = true;
    lc.liminf = lc.limsup = std::numeric_limits<int>::max();
  } else if (a > 1) {
    lc.liminf = lc.limsup = static_cast<int>(ceil(3 * a / (a - 1))) - 1;
  } else {
    const int c = static_cast<int>(ceil((1 + a + a * a) / (1 - a)));
    lc.liminf = c - 1;
    lc.limsup = c;
  }
  return lc;
}

// The lambda in (0, 1) where r_alpha(lambda) = lambda^j, found by bisection.
// Above it j < log_lambda r, so j can serve as a tail.
template <typename Scalar = double>
Scalar tail_crossing(Scalar alpha, int j, Scalar tol = Scalar(1e-12)) {
  using std::pow;
  auto gap = [alpha, j](Scalar lam) {
    return r_root(GameParams<Scalar>::from_alpha(alpha, lam, 0)) - pow(lam, Scalar(j));
  };
  Scalar lo = Scalar(1e-9);
  Scalar hi = 1 - Scalar(1e-12);
  if (!(gap(lo) > 0 && gap(hi) < 0)) {
    throw BracketFailure("no sign change of r(lambda) - lambda^" + std::to_string(j) +
                         " on (0, 1) for alpha = " + std::to_string(alpha));
  }
  while (hi - lo > tol) {
    const Scalar mid = (lo + hi) / 2;
    (gap(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// lambda_n, the n-th discontinuity of N_1, where N_1 jumps from n to n + 1:
// the root of r_1(lambda) = lambda^(n+1).
template <typename Scalar = double>
Scalar bifurcation_point_sym(int n, Scalar tol = Scalar(1e-12)) {
  return tail_crossing(Scalar(1), n + 1, tol);
}

// Largest distance from an attractor point to p.
template <typename Scalar>
Scalar max_distance_to(const AttractorReport<Scalar>& rep, const Strategy<Scalar>& p) {
  Scalar best = 0;
  for (const auto& orbit : rep.orbits) {
    for (const auto& x : orbit.points) best = std::max(best, (x - p).norm());
  }
  return best;
}

namespace detail {

template <typename Scalar>
Scalar segment_distance(const Strategy<Scalar>& p, const Strategy<Scalar>& a,
                        const Strategy<Scalar>& b) {
  const Vec3<Scalar> ab = b - a;
  Scalar t = (p - a).dot(ab) / ab.squaredNorm();
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

}  // namespace detail

// Hausdorff distance between the attractor (a finite point set) and the
// boundary of the triangle; the triangle side is sampled at samples_per_edge
// points per edge.
template <typename Scalar>
Scalar hausdorff_to_triangle(const AttractorReport<Scalar>& rep,
                             const std::array<Strategy<Scalar>, 3>& tri,
                             int samples_per_edge = 2000) {
  std::vector<Strategy<Scalar>> pts;
  for (const auto& orbit : rep.orbits) {
    pts.insert(pts.end(), orbit.points.begin(), orbit.points.end());
  }
  if (pts.empty()) return std::numeric_limits<Scalar>::infinity();
  Scalar forward = 0;
  for (const auto& x : pts) {
    Scalar d = std::numeric_limits<Scalar>::infinity();
    for (int e = 0; e < 3; ++e) {
      d = std::min(d, detail::segment_distance(x, tri[e], tri[(e + 1) % 3]));
    }
    forward = std::max(forward, d);
  }
  Scalar backward = 0;
  for (int e = 0; e < 3; ++e) {
    for (int s = 0; s < samples_per_edge; ++s) {
      const Scalar t = Scalar(s) / samples_per_edge;
      const Strategy<Scalar> q = (1 - t) * tri[e] + t * tri[(e + 1) % 3];
      Scalar d = std::numeric_limits<Scalar>::infinity();
      for (const auto& x : pts) d = std::min(d, (x - q).squaredNorm());
      backward = std::max(backward, d);
    }
  }
  using std::sqrt;
  return std::max(forward, sqrt(backward));
}

}  // namespace rpsbr

#endif  // RPSBR_ATTRACTOR_HPP_
