#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "logobs/errors.hpp"
#include "logobs/field.hpp"
#include "logobs/free_boundary.hpp"
#include "logobs/grid.hpp"
#include "logobs/oracle1d.hpp"
#include "logobs/solver.hpp"

using namespace logobs;

namespace {

double half_profile(const Vec2& p) {
  double t = std::max(p[0], 0.0);
  return 0.5 * t * t;
}

ProblemSpec constant_1d_spec(double h) {
  int n = static_cast<int>(std::lround(2.0 / h)) + 1;
  Grid g = grid_1d(-1.0, h, n);
  ProblemSpec spec = make_problem(g, ForcingMode::Constant, half_profile);
  spec.tol = 1e-10;
  spec.max_sweeps = 200000;
  return spec;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("boundary node indexing covers the hull exactly once") {
  Grid g2 = grid_2d(0.0, 0.0, 0.25, 5, 4);
  std::vector<std::size_t> idx = boundary_node_indices(g2);
  CHECK(idx.size() == 2 * 5 + 2 * 4 - 4);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  for (std::size_t k : idx) {
    int i = static_cast<int>(k) % g2.nx();
    int j = static_cast<int>(k) / g2.nx();
    bool on_hull = i == 0 || i == g2.nx() - 1 || j == 0 || j == g2.ny() - 1;
    CHECK(on_hull);
  }

  Grid g1 = grid_1d(0.0, 0.1, 7);
  idx = boundary_node_indices(g1);
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 6);
}

TEST_CASE("discrete energy of reference fields") {
  Grid g = grid_2d(-1.0, -1.0, 0.125, 17, 17);
  ProblemSpec zero_log = make_problem(g, ForcingMode::Logarithmic,
                                      [](const Vec2&) { return 0.0; });
  ProblemSpec zero_const = make_problem(g, ForcingMode::Constant,
                                        [](const Vec2&) { return 0.0; });
  ScalarField z = constant_field(g, 0.0);
  CHECK(discrete_energy(z, zero_log, 0.0) == 0.0);
  CHECK(discrete_energy(z, zero_const, 0.0) == 0.0);

  // Half-space profile over [-1,1]^2: gradient and potential halves are each
  // 1/3, so the total is 2/3.
  double h = 1.0 / 256.0;
  Grid fine = grid_2d(-1.0, -1.0, h, 513, 513);
  ProblemSpec spec = make_problem(fine, ForcingMode::Constant, half_profile);
  ScalarField u = field_from(fine, half_profile);
  CHECK(discrete_energy(u, spec, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-3));

  Grid unit = grid_2d(0.0, 0.0, 1.0 / 64.0, 65, 65);
  ProblemSpec ones = make_problem(unit, ForcingMode::Logarithmic,
                                  [](const Vec2&) { return 1.0; });
  ScalarField one = constant_field(unit, 1.0);
  CHECK(discrete_energy(one, ones, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  ScalarField mism = u;
  mism.at(0, 0) += 1e-12;
  CHECK_THROWS_AS(discrete_energy(mism, spec, 0.0), BoundaryMismatch);
  ScalarField neg = u;
  neg.at(200, 200) = -1e-9;
  CHECK_THROWS_AS(discrete_energy(neg, spec, 0.0), NegativeField);
  CHECK_THROWS_AS(discrete_energy(u, spec, -1e-3), NegativeInput);
}

TEST_CASE("constant mode reproduces the classical 1D half profile") {
  ProblemSpec spec = constant_1d_spec(1.0 / 512.0);
  spec.relax_omega = 1.994;
  SolveResult res = solve(spec);

  // The sampled profile satisfies the discrete complementarity system
  // exactly, so the solver should land on it to iteration accuracy.
  double linf = 0.0;
  for (int i = 0; i < res.u.grid.nx(); ++i) {
    double x = res.u.grid.node(i)[0];
    linf = std::max(linf, std::abs(res.u.at(i) - 0.5 * std::max(x, 0.0) * std::max(x, 0.0)));
    CHECK(res.u.at(i) >= 0.0);
  }
  CHECK(linf <= 1e-4);
  CHECK(linf <= 1e-6);

  CHECK(res.report.residual < spec.tol);
  CHECK(res.report.kkt_violation < 10.0 * spec.tol);
  REQUIRE(res.report.epsilon_trace.size() == 1);
  CHECK(res.report.epsilon_trace[0].first == 0.0);
  CHECK(res.report.final_energy == discrete_energy(res.u, spec, 0.0));
  CHECK(res.report.final_energy == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(res.report.warnings.empty());

  // Any admissible competitor bounds the minimum; use the clipped linear
  // extension of the boundary data.
  ScalarField comp = field_from(spec.grid, [](const Vec2& p) {
    return std::max((p[0] + 1.0) / 4.0, 0.0);
  });
  CHECK(res.report.final_energy <= discrete_energy(comp, spec, 0.0));
}

TEST_CASE("logarithmic mode matches the 1D shooting profile") {
  OracleSolution1D sol = shoot(1e-3, 0.5, ForcingMode::Logarithmic);
  double h = 1.0 / 1024.0;
  Grid g = grid_1d(0.0, h, 513);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic, [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  });
  spec.relax_omega = 1.99;
  spec.tol = 1e-10;
  SolveResult res = solve(spec);

  double linf = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    double x = g.node(i)[0];
    double ref = x <= 0.0 ? 0.0 : interpolate(sol, x).u;
    linf = std::max(linf, std::abs(res.u.at(i) - ref));
  }
  CHECK(linf <= 5e-4);

  REQUIRE(res.report.epsilon_trace.size() == 7);
  CHECK(res.report.epsilon_trace.front().first == 1e-2);
  CHECK(res.report.epsilon_trace.back().first == 1e-8);
  CHECK(res.report.kkt_violation < 10.0 * spec.tol);
  CHECK(res.report.sweeps_used > 0);
  CHECK(std::isfinite(res.report.final_energy));
}

TEST_CASE("zero boundary data yields the zero minimizer") {
  Grid g = grid_2d(0.0, 0.0, 1.0 / 32.0, 33, 33);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic,
                                  [](const Vec2&) { return 0.0; });
  SolveResult res = solve(spec);
  for (double v : res.u.values) CHECK(v == 0.0);
  CHECK(res.report.final_energy == 0.0);
}

TEST_CASE("problem validation and failure modes") {
  Grid g = grid_1d(-1.0, 1.0 / 16.0, 33);
  ProblemSpec spec = make_problem(g, ForcingMode::Constant, half_profile);

  ProblemSpec bad = spec;
  bad.relax_omega = 2.0;
  CHECK_THROWS_AS(solve(bad), ConfigError);
  bad.relax_omega = 0.0;
  CHECK_THROWS_AS(solve(bad), ConfigError);

  bad = spec;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve(bad), ConfigError);

  bad = spec;
  bad.mode = ForcingMode::Logarithmic;
  bad.epsilons = {1e-3, 1e-2};
  CHECK_THROWS_AS(solve(bad), ConfigError);
  bad.epsilons = {1e-3, 0.0};
  CHECK_THROWS_AS(solve(bad), ConfigError);
  bad.epsilons.clear();
  CHECK_THROWS_AS(solve(bad), ConfigError);

  bad = spec;
  bad.boundary_data.pop_back();
  CHECK_THROWS_AS(solve(bad), ConfigError);

  bad = spec;
  bad.boundary_data[0] = -1e-6;
  CHECK_THROWS_AS(solve(bad), NegativeInput);

  bad = spec;
  bad.max_sweeps = 3;
  CHECK_THROWS_AS(solve(bad), NonConvergence);
}

TEST_CASE("boundary data above one is flagged, not rejected") {
  Grid g = grid_2d(0.0, 0.0, 1.0 / 16.0, 17, 17);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic,
                                  [](const Vec2&) { return 1.2; });
  spec.tol = 1e-8;
  SolveResult res = solve(spec);
  REQUIRE(!res.report.warnings.empty());
  CHECK(res.report.warnings[0].find("1.2") != std::string::npos);
  for (double v : res.u.values) CHECK(v >= 0.0);
}

TEST_CASE("residual map flags the equation error on the positive set") {
  Grid g = grid_2d(0.0, 0.0, 1.0 / 32.0, 33, 33);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic,
                                  [](const Vec2&) { return std::exp(1.0); });
  ScalarField u = constant_field(g, std::exp(1.0));
  ScalarField m = residual_map(u, spec);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      bool interior = i > 0 && i < g.nx() - 1 && j > 0 && j < g.ny() - 1;
      if (interior)
        CHECK(m.at(i, j) == doctest::Approx(1.0).epsilon(1e-9));
      else
        CHECK(m.at(i, j) == 0.0);
    }
}

TEST_CASE("residual map of the exact constant-mode profile is flat") {
  double h = 1.0 / 512.0;
  int n = 1025;
  Grid g = grid_1d(-1.0, h, n);
  ProblemSpec spec = make_problem(g, ForcingMode::Constant, half_profile);
  ScalarField u = field_from(g, half_profile);
  ScalarField m = residual_map(u, spec);
  double tau = pos_threshold(h);
  for (int i = 1; i < n - 1; ++i) {
    if (u.at(i) <= tau)
      CHECK(m.at(i) == 0.0);
    else
      CHECK(m.at(i) <= 1e-6);
  }
}

TEST_CASE("residual map of the shooting interpolant decays off the contact point") {
  OracleSolution1D sol = shoot(1e-3, 0.5, ForcingMode::Logarithmic);
  double h = 1.0 / 1024.0;
  Grid g = grid_1d(0.0, h, 513);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic, [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  });
  ScalarField u = field_from(g, [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  });
  ScalarField m = residual_map(u, spec);
  // The centered second difference across the contact point sees the kink:
  // truncation behaves like 1/(6 k^2) at the k-th node out, so the map is
  // only small once five or more cells separate a node from the interface.
  double spike = 0.0;
  for (int i = 1; i < 8; ++i) spike = std::max(spike, m.at(i));
  CHECK(spike > 0.05);
  for (int i = 5; i < g.nx() - 1; ++i) CHECK(m.at(i) <= 1e-2);
}

TEST_CASE("gradient growth diagnostic on classical and log profiles") {
  Grid g0 = grid_2d(0.0, 0.0, 0.1, 11, 11);
  ScalarField zero = constant_field(g0, 0.0);
  CHECK_THROWS_AS(gradient_log_lipschitz_check(zero, extract(zero)), EmptyFreeBoundary);

  double h = 1.0 / 256.0;
  int n = 513;
  Grid g = grid_2d(-1.0, -1.0, h, n, n);
  ScalarField u = field_from(g, half_profile);
  FreeBoundarySet fb = extract(u);
  std::vector<std::pair<double, double>> samples;
  double worst = gradient_log_lipschitz_check(u, fb, &samples);
  CHECK(worst > 0.40);
  CHECK(worst < 0.50);
  REQUIRE(samples.size() > 100);
  // For the classical profile the ratio is 1/log(1/d): it shrinks toward the
  // interface. Compare bin means on either end of the window.
  double lo_sum = 0.0, hi_sum = 0.0;
  int lo_n = 0, hi_n = 0;
  for (const auto& s : samples) {
    if (s.first < 0.02) {
      lo_sum += s.second;
      ++lo_n;
    } else if (s.first > 0.06) {
      hi_sum += s.second;
      ++hi_n;
    }
  }
  REQUIRE(lo_n > 0);
  REQUIRE(hi_n > 0);
  CHECK(lo_sum / lo_n < hi_sum / hi_n);
}

TEST_CASE("planar log solve: profile accuracy and gradient ratio window") {
  OracleSolution1D sol = shoot(1e-3, 0.32, ForcingMode::Logarithmic);
  double h = 1.0 / 200.0;
  int n = 129;
  Grid g = grid_2d(-0.32, -0.32, h, n, n);
  auto profile = [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  };
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic, profile);
  spec.relax_omega = 1.98;
  spec.tol = 1e-9;
  SolveResult res = solve(spec);

  double linf = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      linf = std::max(linf, std::abs(res.u.at(i, j) - profile(g.node(i, j))));
  CHECK(linf <= 1e-3);

  FreeBoundarySet fb = extract(res.u);
  REQUIRE(!fb.points.empty());
  std::vector<std::pair<double, double>> samples;
  double worst = gradient_log_lipschitz_check(res.u, fb, &samples);
  CHECK(worst < 10.0);
  // Nodes on the zero-set side carry a vanishing gradient; the bound is
  // about the positive side, so only nonzero ratios enter the spread.
  double lo = 1e30, hi = 0.0;
  for (const auto& s : samples) {
    if (s.first < 4.0 * h || s.second == 0.0) continue;
    lo = std::min(lo, s.second);
    hi = std::max(hi, s.second);
  }
  REQUIRE(lo < hi);
  CHECK(hi / lo < 3.0);
}

TEST_CASE("mesh convergence trend in constant mode") {
  std::vector<double> energies;
  for (double h : {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0}) {
    ProblemSpec spec = constant_1d_spec(h);
    spec.relax_omega = 1.99;
    spec.tol = 1e-11;
    energies.push_back(solve(spec).report.final_energy);
  }
  double d1 = std::abs(energies[0] - energies[1]);
  double d2 = std::abs(energies[1] - energies[2]);
  CHECK(d2 > 1e-8);
  CHECK(d2 < d1);
  CHECK(d2 <= 0.5 * d1);
  CHECK(energies[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("repeated solves are bitwise identical") {
  OracleSolution1D sol = shoot(1e-3, 0.5, ForcingMode::Logarithmic);
  Grid g = grid_1d(0.0, 1.0 / 256.0, 129);
  ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic, [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  });
  spec.tol = 1e-10;
  SolveResult a = solve(spec);
  SolveResult b = solve(spec);
  REQUIRE(a.u.values.size() == b.u.values.size());
  CHECK(std::memcmp(a.u.values.data(), b.u.values.data(),
                    a.u.values.size() * sizeof(double)) == 0);
  CHECK(a.report.final_energy == b.report.final_energy);
  CHECK(a.report.sweeps_used == b.report.sweeps_used);
  CHECK(a.report.residual == b.report.residual);
}

TEST_CASE("energy of the shooting interpolant is mesh-stable") {
  OracleSolution1D sol = shoot(1e-3, 0.5, ForcingMode::Logarithmic);
  auto energy_at = [&](double h, int n) {
    Grid g = grid_1d(0.0, h, n);
    ProblemSpec spec = make_problem(g, ForcingMode::Logarithmic, [&](const Vec2& p) {
      return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
    });
    ScalarField u = field_from(g, [&](const Vec2& p) {
      return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
    });
    return discrete_energy(u, spec, 0.0);
  };
  double coarse = energy_at(1.0 / 256.0, 129);
  double fine = energy_at(1.0 / 1024.0, 513);
  CHECK(std::abs(coarse - fine) < 1e-4);
}

TEST_CASE("report serialization round-trips through text and json") {
  ProblemSpec spec = constant_1d_spec(1.0 / 64.0);
  spec.relax_omega = 1.95;
  SolveResult res = solve(spec);
  std::string text = report_to_text(res.report);
  CHECK(text.find("final_energy") != std::string::npos);
  CHECK(text.find("kkt_violation") != std::string::npos);
  CHECK(text.find("sweeps_used") != std::string::npos);

  nlohmann::json parsed = nlohmann::json::parse(report_to_json(res.report));
  CHECK(parsed["final_energy"].get<double>() == res.report.final_energy);
  CHECK(parsed["sweeps_used"].get<long>() == res.report.sweeps_used);
  CHECK(parsed["epsilon_trace"].size() == res.report.epsilon_trace.size());
}

}  // TEST_SUITE
