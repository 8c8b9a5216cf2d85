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

#include "rpsbr/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rpsbr/errors.hpp"
#include "rpsbr/symmetry.hpp"

namespace rpsbr {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

BifurcationScan bifurcation_sweep(double alpha, std::span<const double> lambdas) {
  BifurcationScan scan;
  scan.alpha = alpha;
  for (double lam : lambdas) {
    const HeadTail ht = head_tail_count(GameParams<double>::from_alpha(alpha, lam));
    scan.lambdas.push_back(lam);
    scan.heads.push_back(ht.head);
    scan.tails.push_back(ht.tail);
    scan.counts.push_back(ht.count);
    scan.boundary_flags.push_back(ht.boundary);
  }
  return scan;
}

std::optional<double> locate_count_onset(const BifurcationScan& scan, int target,
                                         double tol) {
  const auto it = std::find(scan.counts.begin(), scan.counts.end(), target);
  if (it == scan.counts.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - scan.counts.begin());
  if (idx == 0) return scan.lambdas.front();
  double lo = scan.lambdas[idx - 1];
  double hi = scan.lambdas[idx];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (head_tail_count(GameParams<double>::from_alpha(scan.alpha, mid)).count == target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<double> count_onset(double alpha, int target, double lo, double hi) {
  if (target < 1 || !(lo < hi)) return std::nullopt;
  if (head_tail_count(GameParams<double>::from_alpha(alpha, lo)).count >= target) return lo;
  std::optional<double> best;
  // With alpha >= 1 the head is always 1; otherwise lambda^h < alpha bounds
  // lambda by alpha^(1/h), which passes hi after finitely many h.
  for (int h = 1;; ++h) {
    const double upper = alpha >= 1 ? 1.0 : std::pow(alpha, 1.0 / h);
    double start;
    try {
      start = tail_crossing(alpha, h + target - 1);
    } catch (const BracketFailure&) {
      start = 1;
    }
    if (start < upper && start < hi && upper > lo) {
      const double candidate = std::max(lo, start);
      if (!best || candidate < *best) best = candidate;
    }
    if (alpha >= 1 || upper >= hi) break;
  }
  return best;
}

OrbitMatcher::OrbitMatcher(const GameParams<double>& g,
                           const AttractorReport<double>& report) {
  for (const auto& orbit : report.orbits) {
    std::vector<Strategy<double>> reduced;
    for (const auto& p : orbit.points) {
      if (classify_region(g, p) == Region::R1) reduced.push_back(p);
    }
    ks_.push_back(orbit.k);
    reduced_points_.push_back(std::move(reduced));
  }
}

std::optional<int> OrbitMatcher::match(const Strategy<double>& x, Region region,
                                       double tol) const {
  const Strategy<double> y = cyclic_shift(x, region_index(region));
  const double tol2 = tol * tol;
  for (std::size_t o = 0; o < ks_.size(); ++o) {
    for (const auto& p : reduced_points_[o]) {
      if ((y - p).squaredNorm() < tol2) return ks_[o];
    }
  }
  return std::nullopt;
}

StartOutcome converge_start(const GameParams<double>& g, const OrbitMatcher& matcher,
                            Strategy<double> x, int budget, double tol) {
  const double lam = g.lambda();
  for (int step = 0;; ++step) {
    const Region r = classify_region(g, x);
    if (r == Region::Gamma) return {{CellKind::GammaHit, 0}, x, step};
    if (const auto k = matcher.match(x, r, tol)) return {{CellKind::Orbit, *k}, x, step};
    if (step == budget) return {{CellKind::Unresolved, 0}, x, step};
    const int next = (region_index(r) + 1) % 3;
    x = lam * x + (1 - lam) * Vec3<double>::Unit(next);
    x /= x.sum();
  }
}

BasinCell classify_start(const GameParams<double>& g, const OrbitMatcher& matcher,
                         Strategy<double> x, int budget, double tol) {
  return converge_start(g, matcher, std::move(x), budget, tol).cell;
}

int canvas_height(int resolution) {
  return static_cast<int>(std::ceil(resolution * std::sqrt(3.0) / 2.0));
}

std::optional<Strategy<double>> pixel_to_simplex(int i, int j, int width, int /*height*/) {
  const double side = width;
  const double tri_height = side * std::sqrt(3.0) / 2.0;
  const double px = i + 0.5;
  const double py = j + 0.5;
  const double x3 = 1.0 - py / tri_height;
  const double x2 = (px - x3 * side / 2.0) / side;
  const double x1 = 1.0 - x2 - x3;
  if (x1 < 0 || x2 < 0 || x3 < 0) return std::nullopt;
  return Strategy<double>(x1, x2, x3);
}

BasinRaster basin_raster(const GameParams<double>& g, const BasinOptions& opts) {
  if (opts.resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  if (opts.iter_budget < 0) throw std::invalid_argument("iteration budget must be >= 0");
  const AttractorReport<double> report = enumerate_attractor(g);
  const OrbitMatcher matcher(g, report);

  BasinRaster raster;
  raster.resolution = opts.resolution;
  raster.width = opts.resolution;
  raster.height = canvas_height(opts.resolution);
  raster.params = g;
  raster.iter_budget = opts.iter_budget;
  raster.conv_tol = opts.conv_tol;
  raster.orbit_ks = matcher.ks();
  raster.cells.assign(static_cast<std::size_t>(raster.width) * raster.height, BasinCell{});

  // Rows are handed out dynamically but each cell is written only by its
  // own row's worker, so the result does not depend on scheduling.
  std::atomic<int> next_row{0};
  auto worker = [&] {
    for (int j = next_row++; j < raster.height; j = next_row++) {
      for (int i = 0; i < raster.width; ++i) {
        const auto x = pixel_to_simplex(i, j, raster.width, raster.height);
        if (!x) continue;
        raster.cells[static_cast<std::size_t>(j) * raster.width + i] =
            classify_start(g, matcher, *x, opts.iter_budget, opts.conv_tol);
      }
    }
  };
  unsigned n_threads = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
  n_threads = std::clamp(n_threads, 1u, static_cast<unsigned>(raster.height));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return raster;
}

BasinSummary summarize(const BasinRaster& raster) {
  BasinSummary s;
  for (int k : raster.orbit_ks) s.per_orbit[k] = 0;
  for (const auto& c : raster.cells) {
    switch (c.kind) {
      case CellKind::Outside: continue;
      case CellKind::Orbit: ++s.per_orbit[c.k]; break;
      case CellKind::Unresolved: ++s.unresolved; break;
      case CellKind::GammaHit: ++s.gamma; break;
    }
    ++s.cells;
  }
  return s;
}

Palette Palette::standard() {
  Palette p;
  p.cycle = {{{230, 159, 0},
              {86, 180, 233},
              {0, 158, 115},
              {240, 228, 66},
              {0, 114, 178},
              {213, 94, 0},
              {204, 121, 167},
              {120, 60, 20}}};
  p.unresolved = {0, 0, 0};
  p.gamma = {128, 128, 128};
  p.outside = {255, 255, 255};
  return p;
}

Rgb Palette::color(const BasinCell& cell) const {
  switch (cell.kind) {
    case CellKind::Orbit: return cycle[static_cast<std::size_t>(cell.k) % cycle.size()];
    case CellKind::Unresolved: return unresolved;
    case CellKind::GammaHit: return gamma;
    case CellKind::Outside: return outside;
  }
  return outside;
}

}  // namespace rpsbr
