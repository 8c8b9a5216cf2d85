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

// Batch experiments over parameters and initial conditions: sweeps of the
// orbit count over lambda, and basin-of-attraction rasters of the simplex.
// Output is CSV (grids) and binary PPM (images).

#ifndef RPSBR_SCAN_HPP_
#define RPSBR_SCAN_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rpsbr/attractor.hpp"
#include "rpsbr/core.hpp"

namespace rpsbr {

struct BifurcationScan {
  double alpha = 1;
  std::vector<double> lambdas;
  std::vector<int> heads;
  std::vector<int> tails;
  std::vector<int> counts;
  std::vector<bool> boundary_flags;
};

// n evenly spaced values from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

BifurcationScan bifurcation_sweep(double alpha, std::span<const double> lambdas);

// Smallest grid lambda whose count equals target, refined by bisection
// against the preceding grid point. Windows narrower than the grid spacing
// are missed; count_onset does not have that blind spot.
std::optional<double> locate_count_onset(const BifurcationScan& scan, int target,
                                         double tol = 1e-12);

// Infimum of {lambda in [lo, hi] : N_alpha(lambda) >= target}, if any. For a
// head h the count reaches target exactly on the window
// (tail_crossing(alpha, h + target - 1), alpha^(1/h)), so the onset is the
// left end of the first nonempty window.
std::optional<double> count_onset(double alpha, int target, double lo, double hi);

enum class CellKind : std::uint8_t { Orbit, Unresolved, GammaHit, Outside };

struct BasinCell {
  CellKind kind = CellKind::Outside;
  int k = 0;  // orbit index (period 3k) when kind == Orbit
};

// Matches points against the enumerated periodic orbits. Comparison happens
// after projecting to R1, where each orbit of period 3k has k points.
class OrbitMatcher {
 public:
  OrbitMatcher(const GameParams<double>& g, const AttractorReport<double>& report);

  // Orbit index k of the first orbit within tol of x, if any.
  std::optional<int> match(const Strategy<double>& x, Region region, double tol) const;

  const std::vector<int>& ks() const { return ks_; }

 private:
  std::vector<int> ks_;
  std::vector<std::vector<Strategy<double>>> reduced_points_;
};

struct StartOutcome {
  BasinCell cell;
  Strategy<double> final_point;
  int steps = 0;
};

// Iterates T from x until it comes within tol of an attractor orbit, hits an
// indifference set, or exhausts budget.
StartOutcome converge_start(const GameParams<double>& g, const OrbitMatcher& matcher,
                            Strategy<double> x, int budget, double tol);

BasinCell classify_start(const GameParams<double>& g, const OrbitMatcher& matcher,
                         Strategy<double> x, int budget, double tol);

struct BasinOptions {
  int resolution = 300;
  int iter_budget = 5000;
  double conv_tol = 1e-6;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Pixel canvas of width R and height ceil(R sqrt(3) / 2). The simplex is the
// equilateral triangle with Rock at bottom-left, Paper at bottom-right and
// Scissors at the top; each pixel center inside it is one cell.
struct BasinRaster {
  int resolution = 0;
  int width = 0;
  int height = 0;
  GameParams<double> params = GameParams<double>::from_alpha(1, 0.5);
  int iter_budget = 0;
  double conv_tol = 0;
  std::vector<int> orbit_ks;     // the attractor's orbit indices, ascending
  std::vector<BasinCell> cells;  // row-major, width * height

  const BasinCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
};

int canvas_height(int resolution);

// Barycentric coordinates of the center of pixel (i, j), or nullopt outside
// the triangle.
std::optional<Strategy<double>> pixel_to_simplex(int i, int j, int width, int height);

BasinRaster basin_raster(const GameParams<double>& g, const BasinOptions& opts);

struct BasinSummary {
  std::size_t cells = 0;
  std::map<int, std::size_t> per_orbit;  // k -> cell count
  std::size_t unresolved = 0;
  std::size_t gamma = 0;

  double unresolved_fraction() const {
    return cells == 0 ? 0.0 : static_cast<double>(unresolved + gamma) / cells;
  }
};

BasinSummary summarize(const BasinRaster& raster);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
  auto operator<=>(const Rgb&) const = default;
};

// Orbit k is drawn with cycle[k mod 8]; three reserved colors are disjoint
// from the cycle.
struct Palette {
  std::array<Rgb, 8> cycle;
  Rgb unresolved;
  Rgb gamma;
  Rgb outside;

  static Palette standard();
  Rgb color(const BasinCell& cell) const;
};

// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double v);

// Bifurcation schema: alpha,lambda,head,tail,count,boundary.
// Raster schema: i,j,x1,x2,x3,label,period (label -1 unresolved, -2 Gamma hit).
// The path overloads throw IoError naming the path.
void write_csv(const BifurcationScan& scan, std::ostream& out);
void write_csv(const BasinRaster& raster, std::ostream& out);
void write_ppm(const BasinRaster& raster, std::ostream& out,
               const Palette& palette = Palette::standard());
void write_csv(const BifurcationScan& scan, const std::string& path);
void write_csv(const BasinRaster& raster, const std::string& path);
void write_ppm(const BasinRaster& raster, const std::string& path,
               const Palette& palette = Palette::standard());

}  // namespace rpsbr

#endif  // RPSBR_SCAN_HPP_
