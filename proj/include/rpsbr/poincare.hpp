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

// First-return structure of the factor map f on the region B: return times,
// the partition of B into branches B_k, the closed-form Poincare branch maps,
// itineraries, and the monotonicity rules obeyed by itineraries.

#ifndef RPSBR_POINCARE_HPP_
#define RPSBR_POINCARE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "rpsbr/core.hpp"
#include "rpsbr/symmetry.hpp"

namespace rpsbr {

template <typename Scalar>
struct ReturnStructure {
  Scalar alpha;
  Scalar lambda;
  int bound;          // largest return time on B (see return_structure)
  int nominal_bound;  // ceil(-1 + log_lambda(alpha / (2 alpha + 1))), at least 1
  int m;              // min{k : lambda^k < alpha}
  Scalar c_al;        // lambda^-1 (alpha - 1 + (1 - lambda)(alpha + 2))
  // Shifts every threshold b_k. Zero except when mutation-testing checkers.
  Scalar threshold_offset = 0;

  // b_k = alpha lambda^(-k-1) - c_al. B_k lies between b_{k-1} and b_k.
  Scalar b(int k) const {
    using std::exp;
    using std::log;
    return alpha * exp(-(k + 1) * log(lambda)) - c_al + threshold_offset;
  }
};

// S^2(u_alpha) = (0, alpha + 2, 1 - alpha); its level sets slice B into B_k.
template <typename Scalar>
Vec3<Scalar> return_functional(const GameParams<Scalar>& g) {
  return cyclic_shift(u_alpha(g), 2);
}

namespace detail {

// max of S^2(u).x over the closure of B. B is a convex polygon cut from the
// simplex by u.x >= 1, S(u).x <= 1 and u.x <= threshold, so the maximum sits
// at an intersection of two of the six bounding lines.
template <typename Scalar>
Scalar sup_on_b(const GameParams<Scalar>& g) {
  const Vec3<Scalar> u = u_alpha(g);
  const Scalar thr = branch_threshold(g);
  // Constraints n.x <= c.
  std::vector<std::pair<Vec3<Scalar>, Scalar>> lines = {
      {-Vec3<Scalar>::UnitX(), 0}, {-Vec3<Scalar>::UnitY(), 0}, {-Vec3<Scalar>::UnitZ(), 0},
      {-u, -1},                    {cyclic_shift(u), 1},        {u, thr}};
  const Vec3<Scalar> s = return_functional(g);
  const Scalar slack = 1e-12;
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Mat3<Scalar> m;
      m.row(0) = lines[i].first.transpose();
      m.row(1) = lines[j].first.transpose();
      m.row(2).setOnes();
      const auto lu = m.fullPivLu();
      if (!lu.isInvertible()) continue;
      const Vec3<Scalar> x = lu.solve(Vec3<Scalar>(lines[i].second, lines[j].second, 1));
      const bool feasible = std::all_of(lines.begin(), lines.end(), [&](const auto& l) {
        return l.first.dot(x) <= l.second + slack;
      });
      if (feasible) best = std::max(best, s.dot(x));
    }
  }
  return best;
}

}  // namespace detail

// The usual bound C counts the f|A steps needed from e1, but a point of B
// first takes one f|B step, so for small lambda the largest return time can
// be C + 1. Since B_k = {b_(k-1) < S^2(u).x < b_k} exactly, the largest
// return time is the branch holding the top of S^2(u).x on B; that is what
// `bound` holds. C itself stays in `nominal_bound`.
template <typename Scalar>
ReturnStructure<Scalar> return_structure(const GameParams<Scalar>& g) {
  using std::ceil;
  using std::floor;
  using std::log;
  const Scalar alpha = g.alpha();
  const Scalar lam = g.lambda();
  ReturnStructure<Scalar> rs{};
  rs.alpha = alpha;
  rs.lambda = lam;
  const Scalar raw_bound = ceil(-1 + log(alpha / (2 * alpha + 1)) / log(lam));
  rs.nominal_bound = std::max(1, static_cast<int>(raw_bound));
  rs.m = 1 + std::max(0, static_cast<int>(floor(log(alpha) / log(lam))));
  rs.c_al = (alpha - 1 + (1 - lam) * (alpha + 2)) / lam;
  const Scalar top = detail::sup_on_b(g);
  rs.bound = 1;
  while (rs.b(rs.bound) < top) ++rs.bound;
  return rs;
}

template <typename Scalar>
struct Return {
  int time = 0;
  Strategy<Scalar> point;  // f^time(x)
};

// Iterates f from x in B until it re-enters the closure of B.
template <typename Scalar>
Return<Scalar> first_return(const GameParams<Scalar>& g, const Strategy<Scalar>& x,
                            int bound) {
  if (classify_branch(g, x) != Branch::B) {
    if (classify_branch(g, x) == Branch::Gamma1) {
      throw GammaCollision("return time undefined on Gamma1 at " + detail::describe(x));
    }
    throw std::invalid_argument("return time requires a point of B, got " +
                                detail::describe(x));
  }
  Strategy<Scalar> y = x;
  for (int k = 1;; ++k) {
    if (k > bound) {
      throw BoundViolation("return time exceeds its bound " + std::to_string(bound) +
                           " at " + detail::describe(x));
    }
    y = step_f(g, y).x;
    switch (classify_branch(g, y)) {
      case Branch::B:
        return {k, y};
      case Branch::Gamma1:
        throw GammaCollision("forward orbit of " + detail::describe(x) +
                             " hits Gamma1 after " + std::to_string(k) + " steps");
      case Branch::A:
        break;
    }
  }
}

template <typename Scalar>
int return_time(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  return first_return(g, x, return_structure(g).bound).time;
}

// The unique k with b_{k-1} < S^2(u).x < b_k, found from the logarithm of
// S^2(u).x + c_al and confirmed against both thresholds.
template <typename Scalar>
int classify_bk(const GameParams<Scalar>& g, const Strategy<Scalar>& x,
                const ReturnStructure<Scalar>& rs) {
  using std::floor;
  using std::log;
  const Scalar s = return_functional(g).dot(x);
  const Scalar shifted = s + rs.c_al - rs.threshold_offset;
  if (!(shifted > 0)) {
    throw std::domain_error("point " + detail::describe(x) + " lies below b_0");
  }
  int k = static_cast<int>(floor(log(shifted / rs.alpha) / -log(rs.lambda)));
  // Rounding in the logarithm can land one branch off.
  if (k >= 1 && s <= rs.b(k - 1)) --k;
  else if (s >= rs.b(k)) ++k;
  if (k < 1) {
    throw std::domain_error("point " + detail::describe(x) + " lies below b_0");
  }
  const Scalar tol = g.gamma_tol();
  if (s - rs.b(k - 1) <= tol || rs.b(k) - s <= tol) {
    throw ThresholdCollision("point " + detail::describe(x) +
                             " lies on a threshold of B_" + std::to_string(k));
  }
  return k;
}

template <typename Scalar>
int classify_bk(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  return classify_bk(g, x, return_structure(g));
}

// Extension of P|B_k to R^3:
//   P_k(x) = lambda^k S(x) + lambda^(k-1) (1 - lambda) e1 + (1 - lambda^(k-1)) e2.
template <typename Scalar>
Strategy<Scalar> branch_map(const GameParams<Scalar>& g, int k, const Strategy<Scalar>& x) {
  using std::exp;
  using std::expm1;
  using std::log;
  const Scalar log_lam = log(g.lambda());
  const Scalar lam_k = exp(k * log_lam);
  const Scalar lam_km1 = exp((k - 1) * log_lam);
  return lam_k * cyclic_shift(x) +
         Vec3<Scalar>(lam_km1 * (1 - g.lambda()), -expm1((k - 1) * log_lam), 0);
}

template <typename Scalar>
struct PoincareStep {
  Strategy<Scalar> point;
  int k = 0;
};

template <typename Scalar>
PoincareStep<Scalar> poincare_step(const GameParams<Scalar>& g, const Strategy<Scalar>& x,
                                   const ReturnStructure<Scalar>& rs) {
  switch (classify_branch(g, x)) {
    case Branch::B:
      break;
    case Branch::Gamma1:
      throw GammaCollision("Poincare map undefined on Gamma1 at " + detail::describe(x));
    case Branch::A:
      throw std::invalid_argument("Poincare map requires a point of B, got " +
                                  detail::describe(x));
  }
  const int k = classify_bk(g, x, rs);
  return {detail::renormalize<Scalar>(branch_map(g, k, x)), k};
}

template <typename Scalar>
PoincareStep<Scalar> poincare_step(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  return poincare_step(g, x, return_structure(g));
}

// Fixed point of P_k by a direct 3x3 solve of (I - lambda^k S) w = P_k(0).
template <typename Scalar>
Strategy<Scalar> branch_fixed_point_solve(const GameParams<Scalar>& g, int k) {
  Mat3<Scalar> shift;
  shift << 0, 1, 0,
           0, 0, 1,
           1, 0, 0;
  const Strategy<Scalar> offset = branch_map(g, k, Strategy<Scalar>::Zero().eval());
  const Scalar lam_k = std::pow(g.lambda(), Scalar(k));
  const Mat3<Scalar> lhs = Mat3<Scalar>::Identity() - lam_k * shift;
  return lhs.partialPivLu().solve(offset);
}

namespace detail {

// Euclidean distance, within the plane x1 + x2 + x3 = 1, from w to the line
// c.x = level.
template <typename Scalar>
Scalar plane_distance(const Vec3<Scalar>& c, Scalar level, const Strategy<Scalar>& w) {
  const Vec3<Scalar> tangent = c.array() - c.mean();
  return (c.dot(w) - level) / tangent.norm();
}

}  // namespace detail

// Radius of the largest disc about w (within the simplex plane) that lies in
// B_k, or a nonpositive number when w is not inside B_k.
template <typename Scalar>
Scalar branch_margin(const GameParams<Scalar>& g, int k, const Strategy<Scalar>& w,
                     const ReturnStructure<Scalar>& rs) {
  const Vec3<Scalar> u = u_alpha(g);
  const Vec3<Scalar> su = cyclic_shift(u);
  const Vec3<Scalar> s2u = cyclic_shift(u, 2);
  const Scalar d[] = {
      detail::plane_distance<Scalar>(u, 1, w),
      -detail::plane_distance<Scalar>(u, branch_threshold(g), w),
      -detail::plane_distance<Scalar>(su, 1, w),
      detail::plane_distance<Scalar>(s2u, rs.b(k - 1), w),
      -detail::plane_distance<Scalar>(s2u, rs.b(k), w),
  };
  return *std::min_element(std::begin(d), std::end(d));
}

template <typename Scalar>
bool in_branch(const GameParams<Scalar>& g, int k, const Strategy<Scalar>& x,
               const ReturnStructure<Scalar>& rs) {
  return branch_margin(g, k, x, rs) > 0;
}

// x moved by delta along the in-plane direction of S^2(u_alpha), i.e. across
// the threshold lines b_k. Used to step off measure-zero threshold hits.
template <typename Scalar>
Strategy<Scalar> nudge_across_thresholds(const GameParams<Scalar>& g,
                                         const Strategy<Scalar>& x,
                                         Scalar delta = Scalar(1e-8)) {
  const Vec3<Scalar> c = return_functional(g);
  const Vec3<Scalar> dir = (c.array() - c.mean()).matrix().normalized();
  Strategy<Scalar> y = (x + delta * dir).cwiseMax(Scalar(0));
  return y / y.sum();
}

struct Itinerary {
  std::vector<int> entries;
  std::optional<std::size_t> stabilized_at;
  std::optional<int> stabilized_value;
};

class ItineraryInterrupted : public GammaCollision {
 public:
  ItineraryInterrupted(const std::string& what, Itinerary partial)
      : GammaCollision(what), partial_(std::move(partial)) {}
  const Itinerary& partial() const { return partial_; }

 private:
  Itinerary partial_;
};

// Return times i_j = n(P^j(x)) for j < max_steps. Stabilization is declared
// once the last three entries equal k and the current point lies in a disc
// about the branch fixed point w_k contained in B_k; P_k contracts that disc
// into itself, so the entry k then persists forever.
template <typename Scalar>
Itinerary itinerary(const GameParams<Scalar>& g, const Strategy<Scalar>& x,
                    std::size_t max_steps) {
  const ReturnStructure<Scalar> rs = return_structure(g);
  Itinerary it;
  it.entries.reserve(max_steps);
  Strategy<Scalar> y = x;
  for (std::size_t j = 0; j < max_steps; ++j) {
    Return<Scalar> ret;
    try {
      ret = first_return(g, y, rs.bound);
    } catch (const GammaCollision& e) {
      throw ItineraryInterrupted(e.what(), std::move(it));
    }
    const int k = ret.time;
    it.entries.push_back(k);
    if (!it.stabilized_at && j >= 2 && it.entries[j - 1] == k && it.entries[j - 2] == k) {
      const Strategy<Scalar> w = branch_fixed_point_solve(g, k);
      const Scalar margin = branch_margin(g, k, w, rs);
      if (margin > 0 && (y - w).norm() < margin) {
        std::size_t start = j;
        while (start > 0 && it.entries[start - 1] == k) --start;
        it.stabilized_at = start;
        it.stabilized_value = k;
      }
    }
    y = ret.point;
  }
  return it;
}

struct MonotonicityViolation {
  std::size_t index = 0;  // the k at which the rule fails
  int clause = 0;         // 1, 2 or 3
};

// Checks, for every index k of the itinerary:
//   (1) i_k >= m implies i_{k+j} >= m for all j >= 0;
//   (2) i_k >= m and i_{k+1} <= i_k imply i_{k+2} <= i_{k+1};
//   (3) i_{k+1} < m and i_{k+1} >= i_k imply i_{k+2} >= i_{k+1}.
inline std::vector<MonotonicityViolation> check_monotonicity(std::span<const int> it,
                                                             int m) {
  std::vector<MonotonicityViolation> out;
  std::optional<std::size_t> first_high;
  for (std::size_t k = 0; k < it.size(); ++k) {
    if (it[k] >= m) {
      if (!first_high) first_high = k;
    } else if (first_high) {
      out.push_back({*first_high, 1});
    }
    if (k + 2 < it.size()) {
      if (it[k] >= m && it[k + 1] <= it[k] && !(it[k + 2] <= it[k + 1])) {
        out.push_back({k, 2});
      }
      if (it[k + 1] < m && it[k + 1] >= it[k] && !(it[k + 2] >= it[k + 1])) {
        out.push_back({k, 3});
      }
    }
  }
  return out;
}

}  // namespace rpsbr

#endif  // RPSBR_POINCARE_HPP_
