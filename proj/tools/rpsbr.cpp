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

// rpsbr: command-line front end for the discretized best-response dynamics
// of Rock-Paper-Scissors.
//
//   rpsbr orbit       --alpha 1 --lambda 0.8 --x0 0.8,0.2,0 --steps 10
//   rpsbr attractor   --a 1 --b 2 --lambda 0.9090909090909091
//   rpsbr bifurcation --alpha 0.5 --lambda-min 0.9 --lambda-max 0.999 --points 1000
//   rpsbr basins      --alpha 1 --lambda 0.8 --resolution 300 --out basins
//   rpsbr verify      --samples 1000 --seed 1
//
// Exit codes: 0 success, 1 verification failed, 2 bad input, 3 start or
// orbit on an indifference set, 4 parameters on a bifurcation boundary,
// 5 I/O failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpsbr/attractor.hpp"
#include "rpsbr/core.hpp"
#include "rpsbr/scan.hpp"
#include "rpsbr/verify.hpp"

namespace {

using rpsbr::GameParams;
using rpsbr::Strategy;
using json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadInput = 2,
  kGammaStart = 3,
  kBifurcationBoundary = 4,
  kIoFailure = 5,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::optional<double> a, b, alpha, lambda, epsilon;
  double gamma_tol = GameParams<double>::kDefaultGammaTol;
};

void add_game_flags(CLI::App* cmd, ParamFlags& f, bool with_lambda = true) {
  cmd->add_option("--a", f.a, "payoff won (requires --b)");
  cmd->add_option("--b", f.b, "payoff lost (requires --a)");
  cmd->add_option("--alpha", f.alpha, "payoff ratio a/b (alternative to --a/--b)");
  if (with_lambda) {
    cmd->add_option("--lambda", f.lambda, "contraction factor in (0, 1)");
    cmd->add_option("--epsilon", f.epsilon, "step size, lambda = 1 - epsilon");
  }
  cmd->add_option("--gamma-tol", f.gamma_tol, "indifference-set tolerance")
      ->capture_default_str();
}

// (a, b) from either --a/--b or --alpha (b = 1).
std::pair<double, double> resolve_payoffs(const ParamFlags& f) {
  const bool pair = f.a || f.b;
  if (pair && f.alpha) throw UsageError("give either --a/--b or --alpha, not both");
  if (pair) {
    if (!f.a || !f.b) throw UsageError("--a and --b must be given together");
    return {*f.a, *f.b};
  }
  if (!f.alpha) throw UsageError("one of --alpha or --a/--b is required");
  return {*f.alpha, 1.0};
}

GameParams<double> resolve_game(const ParamFlags& f) {
  const auto [a, b] = resolve_payoffs(f);
  if (f.lambda && f.epsilon) throw UsageError("give either --lambda or --epsilon, not both");
  if (!f.lambda && !f.epsilon) throw UsageError("one of --lambda or --epsilon is required");
  const double lambda = f.lambda ? *f.lambda : 1.0 - *f.epsilon;
  try {
    return GameParams<double>(a, b, lambda, f.gamma_tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json params_json(const GameParams<double>& g) {
  return {{"a", g.a()},         {"b", g.b()},
          {"alpha", g.alpha()}, {"lambda", g.lambda()},
          {"epsilon", g.epsilon()}, {"gamma_tol", g.gamma_tol()}};
}

std::string params_comment(const GameParams<double>& g) {
  using rpsbr::format_double;
  return "# a=" + format_double(g.a()) + " b=" + format_double(g.b()) +
         " alpha=" + format_double(g.alpha()) + " lambda=" + format_double(g.lambda()) +
         " epsilon=" + format_double(g.epsilon()) +
         " gamma_tol=" + format_double(g.gamma_tol());
}

json strategy_json(const Strategy<double>& x) { return json::array({x(0), x(1), x(2)}); }

// Names the indifference sets Gamma_{i,j} through x (1-based indices).
std::string tied_sets(const GameParams<double>& g, const Strategy<double>& x) {
  const auto p = rpsbr::payoff_vector(g, x);
  const double top = p.maxCoeff();
  const double tol = std::max(g.gamma_tol(), 1e-12);
  std::string out;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (top - p(i) <= tol && top - p(j) <= tol) {
        if (!out.empty()) out += ", ";
        out += "Gamma_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
      }
    }
  }
  return out.empty() ? "Gamma (within gamma-tol)" : out;
}

// Writes text to --out if given, else stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::out | std::ios::trunc);
  if (!out) throw rpsbr::IoError("cannot open '" + out_path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw rpsbr::IoError("failed while writing '" + out_path + "'");
}

int cmd_orbit(const ParamFlags& flags, const std::vector<double>& x0, std::size_t steps,
              const std::string& format, const std::string& out_path) {
  const GameParams<double> g = resolve_game(flags);
  if (x0.size() != 3) throw UsageError("--x0 needs three comma-separated coordinates");
  Strategy<double> x;
  try {
    x = rpsbr::make_strategy(x0[0], x0[1], x0[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (rpsbr::classify_region(g, x) == rpsbr::Region::Gamma) {
    std::cerr << "error: start point lies on the indifference set " << tied_sets(g, x)
              << "; the best response is not unique there\n";
    return kGammaStart;
  }
  const auto traj = rpsbr::iterate_t(g, x, steps);
  std::ostringstream os;
  if (format == "json") {
    json j;
    j["params"] = params_json(g);
    j["steps"] = steps;
    j["hit_gamma"] = traj.hit_gamma;
    auto& rows = j["trajectory"] = json::array();
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
      rows.push_back({{"step", i},
                      {"x", strategy_json(traj.points[i])},
                      {"region", rpsbr::to_string(traj.labels[i])}});
    }
    os << j.dump(2) << '\n';
  } else {
    if (out_path.empty()) os << params_comment(g) << '\n';
    os << "step,x1,x2,x3,region\n";
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
      const auto& p = traj.points[i];
      os << i << ',' << rpsbr::format_double(p(0)) << ',' << rpsbr::format_double(p(1)) << ','
         << rpsbr::format_double(p(2)) << ',' << rpsbr::to_string(traj.labels[i]) << '\n';
    }
  }
  emit(out_path, os.str());
  if (!out_path.empty()) std::cout << params_comment(g) << '\n';
  if (traj.hit_gamma) {
    std::cerr << "error: orbit reached the indifference set "
              << tied_sets(g, traj.points.back()) << " after " << traj.points.size() - 1
              << " steps\n";
    return kGammaStart;
  }
  return kOk;
}

int cmd_attractor(const ParamFlags& flags, const std::string& out_path) {
  const GameParams<double> g = resolve_game(flags);
  const auto rep = rpsbr::enumerate_attractor(g);
  json j;
  j["params"] = params_json(g);
  j["head"] = rep.head;
  j["tail"] = rep.tail;
  j["count"] = rep.count;
  j["bifurcation_boundary"] = rep.boundary;
  j["nash"] = strategy_json(rep.nash);
  if (rep.shapley) {
    j["shapley_triangle"] = json::array(
        {strategy_json((*rep.shapley)[0]), strategy_json((*rep.shapley)[1]),
         strategy_json((*rep.shapley)[2])});
  } else {
    j["shapley_triangle"] = nullptr;
  }
  auto& orbits = j["orbits"] = json::array();
  for (const auto& o : rep.orbits) {
    json oj;
    oj["k"] = o.k;
    oj["period"] = o.period;
    oj["w"] = strategy_json(o.points.front());
    auto& pts = oj["points"] = json::array();
    for (const auto& p : o.points) pts.push_back(strategy_json(p));
    orbits.push_back(std::move(oj));
  }
  emit(out_path, j.dump(2) + "\n");
  if (rep.boundary) {
    std::cerr << "warning: parameters lie on a bifurcation boundary; the orbit count "
                 "is ambiguous there\n";
    return kBifurcationBoundary;
  }
  return kOk;
}

int cmd_bifurcation(const ParamFlags& flags, std::optional<double> lambda_min,
                    std::optional<double> lambda_max, std::size_t points,
                    const std::vector<double>& grid, const std::string& out_path) {
  const auto [a, b] = resolve_payoffs(flags);
  if (!(a > 0) || !(b > 0)) throw UsageError("payoffs must be positive");
  const double alpha = a / b;
  std::vector<double> lambdas;
  if (!grid.empty()) {
    if (lambda_min || lambda_max) throw UsageError("give either --grid or a lambda range");
    lambdas = grid;
  } else {
    if (!lambda_min) throw UsageError("--lambda-min (or --grid) is required");
    if (points == 0) throw UsageError("--points must be positive");
    if (points == 1) {
      lambdas = {*lambda_min};
    } else {
      if (!lambda_max) throw UsageError("--lambda-max is required when --points > 1");
      if (!(*lambda_min < *lambda_max)) throw UsageError("need lambda-min < lambda-max");
      lambdas = rpsbr::linspace(*lambda_min, *lambda_max, points);
    }
  }
  for (double lam : lambdas) {
    if (!(lam > 0 && lam < 1)) {
      throw UsageError("lambda values must lie in (0, 1), got " + rpsbr::format_double(lam));
    }
  }
  const auto scan = rpsbr::bifurcation_sweep(alpha, lambdas);
  std::ostringstream os;
  if (out_path.empty()) os << "# alpha=" << rpsbr::format_double(alpha) << '\n';
  rpsbr::write_csv(scan, os);
  emit(out_path, os.str());
  return kOk;
}

int cmd_basins(const ParamFlags& flags, int resolution, int iters, double tol,
               unsigned threads, const std::string& out_prefix) {
  const GameParams<double> g = resolve_game(flags);
  if (resolution < 1) throw UsageError("--resolution must be >= 1");
  if (iters < 0) throw UsageError("--iters must be >= 0");
  if (!(tol > 0)) throw UsageError("--tol must be positive");
  rpsbr::BasinOptions opts;
  opts.resolution = resolution;
  opts.iter_budget = iters;
  opts.conv_tol = tol;
  opts.threads = threads;
  const auto raster = rpsbr::basin_raster(g, opts);
  rpsbr::write_ppm(raster, out_prefix + ".ppm");
  rpsbr::write_csv(raster, out_prefix + ".csv");
  const auto summary = rpsbr::summarize(raster);
  std::cout << params_comment(g) << '\n';
  std::cout << "cells=" << summary.cells;
  for (const auto& [k, n] : summary.per_orbit) {
    std::cout << " period" << 3 * k << "="
              << rpsbr::format_double(static_cast<double>(n) / summary.cells);
  }
  std::cout << " unresolved=" << summary.unresolved << " gamma=" << summary.gamma << '\n';
  return kOk;
}

int cmd_verify(std::size_t samples, std::uint64_t seed, double gamma_tol, double offset,
               const std::string& out_path) {
  rpsbr::VerifyOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  opts.gamma_tol = gamma_tol;
  opts.threshold_offset = offset;
  const auto report = rpsbr::run_verification(opts);
  emit(out_path, report.to_json() + "\n");
  for (const auto& c : report.checks) {
    if (!c.passed()) {
      std::cerr << "FAILED " << c.name << ": " << c.property << "\n  " << c.first_failure
                << '\n';
    }
  }
  return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretized best-response dynamics of Rock-Paper-Scissors"};
  app.require_subcommand(1);

  ParamFlags orbit_flags, attractor_flags, bif_flags, basin_flags;
  std::string format = "csv";
  std::string out_path;
  std::vector<double> x0;
  std::size_t steps = 100;

  auto* orbit = app.add_subcommand("orbit", "iterate T from a start point");
  add_game_flags(orbit, orbit_flags);
  orbit->add_option("--x0", x0, "start point x1,x2,x3")->delimiter(',')->required();
  orbit->add_option("--steps", steps, "number of steps")->capture_default_str();
  orbit->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  orbit->add_option("--out", out_path, "write to file instead of stdout");

  auto* attractor = app.add_subcommand("attractor", "enumerate the periodic attractor (JSON)");
  add_game_flags(attractor, attractor_flags);
  std::string attractor_format = "json";
  attractor->add_option("--format", attractor_format, "json")->check(CLI::IsMember({"json"}));
  attractor->add_option("--out", out_path, "write to file instead of stdout");

  auto* bif = app.add_subcommand("bifurcation", "sweep the orbit count over lambda (CSV)");
  add_game_flags(bif, bif_flags, false);
  std::optional<double> lambda_min, lambda_max;
  std::size_t points = 1000;
  std::vector<double> grid;
  bif->add_option("--lambda-min", lambda_min, "lower end of the lambda range");
  bif->add_option("--lambda-max", lambda_max, "upper end of the lambda range");
  bif->add_option("--points", points, "grid size")->capture_default_str();
  bif->add_option("--grid", grid, "explicit lambda values")->delimiter(',');
  bif->add_option("--out", out_path, "write to file instead of stdout");

  auto* basins = app.add_subcommand("basins", "rasterize basins of attraction (PPM + CSV)");
  add_game_flags(basins, basin_flags);
  int resolution = 300;
  int iters = 5000;
  double tol = 1e-6;
  unsigned threads = 0;
  std::string prefix = "basins";
  basins->add_option("--resolution", resolution, "cells per simplex edge")->capture_default_str();
  basins->add_option("--iters", iters, "iteration budget per cell")->capture_default_str();
  basins->add_option("--tol", tol, "convergence tolerance")->capture_default_str();
  basins->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
  basins->add_option("--out", prefix, "output prefix for .ppm and .csv")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the randomized invariant suite");
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double verify_gamma_tol = GameParams<double>::kDefaultGammaTol;
  double offset = 0;
  verify->add_option("--samples", samples, "samples per check and grid point")
      ->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--gamma-tol", verify_gamma_tol, "indifference-set tolerance");
  verify->add_option("--inject-threshold-offset", offset,
                     "test hook: shift every b_k threshold")
      ->group("");
  verify->add_option("--out", out_path, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*orbit) return cmd_orbit(orbit_flags, x0, steps, format, out_path);
    if (*attractor) return cmd_attractor(attractor_flags, out_path);
    if (*bif) return cmd_bifurcation(bif_flags, lambda_min, lambda_max, points, grid, out_path);
    if (*basins) return cmd_basins(basin_flags, resolution, iters, tol, threads, prefix);
    if (*verify) return cmd_verify(samples, seed, verify_gamma_tol, offset, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const rpsbr::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const rpsbr::GammaCollision& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGammaStart;
  }
  return kBadInput;
}
