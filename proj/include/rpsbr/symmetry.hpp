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

// Reduction of T by the cyclic symmetry S: the projection pi onto R1, the
// factor map f = pi o T with its two affine branches A and B, and the skew
// product F(x, j) = (f(x), sigma(x) + j) on R1 x Z3.

#ifndef RPSBR_SYMMETRY_HPP_
#define RPSBR_SYMMETRY_HPP_

#include <cstddef>
#include <vector>

#include "rpsbr/core.hpp"

namespace rpsbr {

enum class Branch { A, B, Gamma1 };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::A: return "A";
    case Branch::B: return "B";
    case Branch::Gamma1: return "Gamma1";
  }
  return "?";
}

// sheet j encodes the Delta-point S^-j(x); sheet == region index - 1.
template <typename Scalar>
struct ReducedPoint {
  Strategy<Scalar> x;
  int sheet = 0;
};

template <typename Scalar>
struct Projection {
  Strategy<Scalar> x;  // in R1
  int region = 1;      // 1, 2 or 3: the region the original point came from
};

// pi(x) = S^(i-1)(x) for x in R_i.
template <typename Scalar>
Projection<Scalar> project_pi(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Region r = classify_region(g, x);
  if (r == Region::Gamma) {
    throw GammaCollision("cannot project " + detail::describe(x) +
                         ": point lies on an indifference set");
  }
  const int i = region_index(r);
  return {cyclic_shift(x, i), i + 1};
}

// The conjugacy h(x) = (pi(x), i - 1) and its inverse.
template <typename Scalar>
ReducedPoint<Scalar> to_reduced(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Projection<Scalar> p = project_pi(g, x);
  return {p.x, p.region - 1};
}

template <typename Scalar>
Strategy<Scalar> from_reduced(const ReducedPoint<Scalar>& p) {
  return cyclic_shift(p.x, -p.sheet);
}

// alpha (1/lambda - 1) + 1: the line u.x = threshold separates A from B.
template <typename Scalar>
Scalar branch_threshold(const GameParams<Scalar>& g) {
  return g.alpha() * (1 / g.lambda() - 1) + 1;
}

template <typename Scalar>
Branch classify_branch(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Scalar s = u_alpha(g).dot(x) - branch_threshold(g);
  if (s > g.gamma_tol()) return Branch::A;
  if (s < -g.gamma_tol()) return Branch::B;
  return Branch::Gamma1;
}

template <typename Scalar>
struct FStep {
  Strategy<Scalar> x;
  int sigma = 0;
};

// f|A(x) = lambda x + (1 - lambda) e2, sigma = 0;
// f|B(x) = lambda S(x) + (1 - lambda) e1, sigma = 1.
template <typename Scalar>
FStep<Scalar> step_f(const GameParams<Scalar>& g, const Strategy<Scalar>& x) {
  const Scalar lam = g.lambda();
  switch (classify_branch(g, x)) {
    case Branch::A:
      return {detail::renormalize<Scalar>(lam * x + (1 - lam) * Vec3<Scalar>::Unit(1)), 0};
    case Branch::B:
      return {detail::renormalize<Scalar>(lam * cyclic_shift(x) +
                                          (1 - lam) * Vec3<Scalar>::Unit(0)),
              1};
    case Branch::Gamma1:
      break;
  }
  throw GammaCollision("point " + detail::describe(x) +
                       " lies on Gamma1, the boundary between A and B");
}

template <typename Scalar>
ReducedPoint<Scalar> step_F(const GameParams<Scalar>& g, const ReducedPoint<Scalar>& p) {
  const FStep<Scalar> s = step_f(g, p.x);
  return {s.x, (p.sheet + s.sigma) % 3};
}

// points[0..n] and sigmas[k] = sigma(points[k]) for k < n.
template <typename Scalar>
struct FOrbit {
  std::vector<Strategy<Scalar>> points;
  std::vector<int> sigmas;
};

template <typename Scalar>
FOrbit<Scalar> iterate_f(const GameParams<Scalar>& g, Strategy<Scalar> x, std::size_t n) {
  FOrbit<Scalar> orbit;
  orbit.points.reserve(n + 1);
  orbit.sigmas.reserve(n);
  orbit.points.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    const FStep<Scalar> s = step_f(g, x);
    orbit.sigmas.push_back(s.sigma);
    x = s.x;
    orbit.points.push_back(x);
  }
  return orbit;
}

// Inverse of the conjugacy along an f-orbit: point k is S^-(sheet_k)(x_k)
// with sheet_{k+1} = sheet_k + sigma_k (mod 3).
template <typename Scalar>
std::vector<Strategy<Scalar>> lift_orbit(const FOrbit<Scalar>& f_orbit, int start_sheet) {
  std::vector<Strategy<Scalar>> lifted;
  lifted.reserve(f_orbit.points.size());
  int sheet = ((start_sheet % 3) + 3) % 3;
  for (std::size_t k = 0; k < f_orbit.points.size(); ++k) {
    lifted.push_back(cyclic_shift(f_orbit.points[k], -sheet));
    if (k < f_orbit.sigmas.size()) sheet = (sheet + f_orbit.sigmas[k]) % 3;
  }
  return lifted;
}

}  // namespace rpsbr

#endif  // RPSBR_SYMMETRY_HPP_
