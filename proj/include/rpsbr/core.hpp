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

// Rock-Paper-Scissors game with payoffs (a, b) and the discretized
// best-response map T(x) = lambda * x + (1 - lambda) * BR(x) on the simplex.
//
// Coordinates are ordered (Rock, Paper, Scissors). All routines are pure and
// templated on the scalar type; double is the working precision.

#ifndef RPSBR_CORE_HPP_
#define RPSBR_CORE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpsbr/errors.hpp"

namespace rpsbr {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

// A mixed strategy: a point of the 2-simplex.
template <typename Scalar>
using Strategy = Vec3<Scalar>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

enum class Region { R1, R2, R3, Gamma };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::Gamma: return "Gamma";
  }
  return "?";
}

// Zero-based index of a regular region (R1 -> 0); Gamma has no index.
inline int region_index(Region r) {
  if (r == Region::Gamma) throw std::invalid_argument("Gamma has no region index");
  return static_cast<int>(r);
}

template <typename Scalar = double>
class GameParams {
 public:
  static constexpr Scalar kDefaultGammaTol = Scalar(1e-9);

  GameParams(Scalar a, Scalar b, Scalar lambda,
             Scalar gamma_tol = kDefaultGammaTol)
      : a_(a), b_(b), alpha_(a / b), lambda_(lambda),
        epsilon_(Scalar(1) - lambda), gamma_tol_(gamma_tol) {
    using std::isfinite;
    if (!(a > 0) || !(b > 0) || !isfinite(a) || !isfinite(b)) {
      throw std::invalid_argument("payoffs a and b must be positive and finite");
    }
    if (!(lambda > 0) || !(lambda < 1)) {
      throw std::invalid_argument("lambda must lie in the open interval (0, 1)");
    }
    if (!(gamma_tol >= 0) || !isfinite(gamma_tol)) {
      throw std::invalid_argument("gamma_tol must be nonnegative");
    }
  }

  // Normalized game with b = 1, so that a = alpha.
  static GameParams from_alpha(Scalar alpha, Scalar lambda,
                               Scalar gamma_tol = kDefaultGammaTol) {
    return GameParams(alpha, Scalar(1), lambda, gamma_tol);
  }

  Scalar a() const { return a_; }
  Scalar b() const { return b_; }
  Scalar alpha() const { return alpha_; }
  Scalar lambda() const { return lambda_; }
  Scalar epsilon() const { return epsilon_; }
  Scalar gamma_tol() const { return gamma_tol_; }

  GameParams with_gamma_tol(Scalar tol) const {
    return GameParams(a_, b_, lambda_, tol);
  }

  // Rows (0, -b, a), (a, 0, -b), (-b, a, 0).
  Mat3<Scalar> payoff_matrix() const {
    Mat3<Scalar> m;
    m << 0, -b_, a_,
         a_, 0, -b_,
         -b_, a_, 0;
    return m;
  }

 private:
  Scalar a_, b_, alpha_, lambda_, epsilon_, gamma_tol_;
};

template <typename Scalar>
bool in_simplex(const Strategy<Scalar>& x, Scalar tol = Scalar(1e-12)) {
  using std::abs;
  return (x.array() >= -tol).all() && (x.array() <= Scalar(1) + tol).all() &&
         abs(x.sum() - Scalar(1)) <= tol;
}

template <typename Scalar>
Strategy<Scalar> make_strategy(Scalar x1, Scalar x2, Scalar x3) {
  Strategy<Scalar> x(x1, x2, x3);
  if (!in_simplex<Scalar>(x)) {
    std::ostringstream os;
    os << "not a point of the simplex: (" << x1 << ", " << x2 << ", " << x3 << ")";
    throw std::invalid_argument(os.str());
  }
  return x;
}

// Barycenter (1/3, 1/3, 1/3), the Nash equilibrium of every game in the family.
template <typename Scalar = double>
Strategy<Scalar> nash_point() {
  return Strategy<Scalar>::Constant(Scalar(1) / Scalar(3));
}

// The cyclic symmetry S: (x1, x2, x3) -> (x2, x3, x1).
template <typename Derived>
Vec3<typename Derived::Scalar> cyclic_shift(const Eigen::MatrixBase<Derived>& x) {
  return Vec3<typename Derived::Scalar>(x(1), x(2), x(0));
}

// S^n for any integer n (S^-1 == S^2).
template <typename Derived>
Vec3<typename Derived::Scalar> cyclic_shift(const Eigen::MatrixBase<Derived>& x,
                                            int n) {
  const int r = ((n % 3) + 3) % 3;
  return Vec3<typename Derived::Scalar>(x(r), x((r + 1) % 3), x((r + 2) % 3));
}

template <typename Scalar>
Vec3<Scalar> payoff_vector(const GameParams<Scalar>& g, const Strategy<Scalar>& y) {
  return g.payoff_matrix() * y;
}

// Index (0 = Rock, 1 = Paper, 2 = Scissors) of the strict best reply, or
// nullopt when the two largest payoffs are within gamma_tol (Indifferent).
template <typename Scalar>
std::optional<int> best_response(const GameParams<Scalar>& g,
                                 const Strategy<Scalar>& y) {
  const Vec3<Scalar> p = payoff_vector(g, y);
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (p(i) > p(best)) best = i;
  }
  Scalar runner_up = -std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (i != best && p(i) > runner_up) runner_up = p(i);
  }
  if (p(best) - runner_up <= g.gamma_tol()) return std::nullopt;
  return best;
}

// u_alpha = (alpha + 2, 1 - alpha, 0).
template <typename Scalar>
Vec3<Scalar> u_alpha(const GameParams<Scalar>& g) {
  return Vec3<Scalar>(g.alpha() + 2, 1 - g.alpha(), 0);
}

// R1 = {u.x > 1 and S(u).x < 1}; R_{i+1} = S^-i(R1).
template <typename Scalar>
Region classify_region(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Vec3<Scalar> u = u_alpha(g);
  const Vec3<Scalar> su = cyclic_shift(u);
  const Scalar tol = g.gamma_tol();
  for (int i = 0; i < 3; ++i) {
    const Vec3<Scalar> y = cyclic_shift(x, i);
    if (u.dot(y) - 1 > tol && 1 - su.dot(y) > tol) return static_cast<Region>(i);
  }
  return Region::Gamma;
}

namespace detail {

template <typename Scalar>
Strategy<Scalar> renormalize(const Strategy<Scalar>& x) {
  return x / x.sum();
}

template <typename Scalar>
std::string describe(const Strategy<Scalar>& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x(0) << ", " << x(1) << ", " << x(2) << ")";
  return os.str();
}

}  // namespace detail

// One step of T. Throws GammaCollision on a non-regular point.
template <typename Scalar>
Strategy<Scalar> step_t(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Region r = classify_region(g, x);
  if (r == Region::Gamma) {
    throw GammaCollision("point " + detail::describe(x) +
                         " lies on an indifference set");
  }
  const int next = (region_index(r) + 1) % 3;
  const Scalar lam = g.lambda();
  return detail::renormalize<Scalar>(lam * x + (1 - lam) * Vec3<Scalar>::Unit(next));
}

template <typename Scalar>
struct Trajectory {
  std::vector<Strategy<Scalar>> points;
  std::vector<Region> labels;
  bool hit_gamma = false;
};

// Records x, T(x), ..., T^n(x); stops at the first point labeled Gamma.
template <typename Scalar>
Trajectory<Scalar> iterate_t(const GameParams<Scalar>& g, Strategy<Scalar> x,
                             std::size_t n) {
  Trajectory<Scalar> traj;
  traj.points.reserve(n + 1);
  traj.labels.reserve(n + 1);
  for (std::size_t step = 0;; ++step) {
    const Region r = classify_region(g, x);
    traj.points.push_back(x);
    traj.labels.push_back(r);
    if (r == Region::Gamma) {
      traj.hit_gamma = true;
      break;
    }
    if (step == n) break;
    const int next = (region_index(r) + 1) % 3;
    x = detail::renormalize<Scalar>(g.lambda() * x +
                                    (1 - g.lambda()) * Vec3<Scalar>::Unit(next));
  }
  return traj;
}

// Uniform sample on the simplex by normalizing three exponential variates.
template <typename Scalar, typename URBG>
Strategy<Scalar> sample_simplex(URBG& rng) {
  std::exponential_distribution<double> expo(1.0);
  Strategy<Scalar> x(Scalar(expo(rng)), Scalar(expo(rng)), Scalar(expo(rng)));
  return x / x.sum();
}

}  // namespace rpsbr

#endif  // RPSBR_CORE_HPP_
