#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "logobs/blowup.hpp"
#include "logobs/errors.hpp"
#include "logobs/field.hpp"
#include "logobs/field_io.hpp"
#include "logobs/oracle1d.hpp"
#include "logobs/quadrature.hpp"
#include "logobs/scaling.hpp"
#include "logobs/weiss.hpp"

using namespace logobs;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureConfig fast_quad() {
  QuadratureConfig q;
  q.n_theta = 256;
  q.n_rad = 128;
  return q;
}

WeissConfig fast_cfg() {
  WeissConfig cfg;
  cfg.quadrature = fast_quad();
  return cfg;
}

// Planar reference field: the 1D shooting profile extended along x, zero for
// x <= 0, sampled onto a 257^2 grid over [-0.32, 0.32]^2. The interface runs
// through the origin, which is the blow-up center everywhere below.
const ScalarField& planar_field() {
  static const ScalarField f = [] {
    OracleSolution1D sol = shoot(1e-3, 0.33, ForcingMode::Logarithmic);
    Grid g = grid_2d(-0.32, -0.32, 1.0 / 400.0, 257, 257);
    return field_from(g, [&](const Vec2& p) {
      return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
    });
  }();
  return f;
}

// An ideal half-space trace: (1/2) max(cos(theta - phi), 0)^2 at the profile
// angles. This is the exact rescaling limit of a flat interface oriented
// along (cos phi, sin phi).
std::vector<double> halfspace_trace(int n, double phi) {
  std::vector<double> t(n);
  const auto angles = profile_angles(n);
  for (int j = 0; j < n; ++j) {
    double c = std::cos(angles[j] - phi);
    t[j] = c > 0.0 ? 0.5 * c * c : 0.0;
  }
  return t;
}

double nu_angle(const Vec2& nu) { return std::atan2(nu[1], nu[0]); }

// Wraps an angle difference into (-pi, pi] so orientations can be compared
// without worrying about branch cuts.
double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Hand-built scan with a prescribed energy gap above the limit estimate.
// Only the fields decay_fit reads are populated.
WeissScan synthetic_scan(const std::vector<double>& radii,
                         const std::vector<double>& gaps, double limit) {
  WeissScan s;
  s.center = {0.0, 0.0};
  s.dim = 2;
  s.Wbar_limit_estimate = limit;
  s.Wbar_limit_cross_check = limit;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    WeissRecord rec;
    rec.r = radii[k];
    rec.Wbar = limit + gaps[k];
    s.records.push_back(rec);
  }
  return s;
}

std::vector<BlowupProfile> planar_profiles() {
  static const std::vector<BlowupProfile> profiles = [] {
    std::vector<BlowupProfile> out;
    for (double r : {0.2, 0.1, 0.05, 0.025})
      out.push_back(make_profile(planar_field(), {0.0, 0.0}, r, fast_cfg()));
    return out;
  }();
  return profiles;
}

}  // namespace

TEST_SUITE("blowup") {

TEST_CASE("rescale is exact on centered quadratics") {
  Grid g = grid_2d(-1.05, -1.05, 0.0025, 841, 841);
  const Vec2 x0 = {0.1, -0.05};
  ScalarField u = field_from(g, [&](const Vec2& p) {
    double dx = p[0] - x0[0], dy = p[1] - x0[1];
    return dx * dx + dy * dy;
  });

  // u(x0 + r x) / mu(r) = |x|^2 r^2 / mu(r) at every output node. Cubic
  // sampling reproduces quadratics exactly; bilinear carries the chord error
  // of the source grid, at worst h^2/4 per axis before the mu division,
  // h^2 / (2 mu) = 1.02e-5 in total.
  const double r = 0.3;
  const double scale = r * r / mu(r);
  ScalarField cubic = rescale(u, x0, r, 3);
  ScalarField linear = rescale(u, x0, r);
  double worst3 = 0.0, worst1 = 0.0;
  for (int j = 0; j < cubic.grid.ny(); ++j)
    for (int i = 0; i < cubic.grid.nx(); ++i) {
      Vec2 p = cubic.grid.node(i, j);
      double exact = (p[0] * p[0] + p[1] * p[1]) * scale;
      worst3 = std::max(worst3, std::abs(cubic.at(i, j) - exact));
      worst1 = std::max(worst1, std::abs(linear.at(i, j) - exact));
    }
  CHECK(worst3 <= 1e-10);
  CHECK(worst1 <= 1.05e-5);

  // Output grid shape is pinned: 257 nodes per axis spanning [-1.2, 1.2].
  CHECK(cubic.grid.nx() == 257);
  CHECK(cubic.grid.ny() == 257);
  CHECK(cubic.grid.min(0) == doctest::Approx(-1.2).epsilon(1e-14));
  CHECK(cubic.grid.max(1) == doctest::Approx(1.2).epsilon(1e-14));

  // At r = e^{-1/2} the rescaling of |x|^2 about the origin is |x|^2 / 2:
  // mu(r) = 2/e and r^2 / mu(r) = 1/2, so the value at (1, 0) is 1/2.
  ScalarField v = field_from(g, [](const Vec2& p) {
    return p[0] * p[0] + p[1] * p[1];
  });
  ScalarField vr = rescale(v, {0.0, 0.0}, std::exp(-0.5), 3);
  CHECK(sample(vr, {1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("rescale of the zero field is zero and bad geometry throws") {
  Grid g = grid_2d(-1.05, -1.05, 0.01, 211, 211);
  ScalarField zero = constant_field(g, 0.0);
  ScalarField out = rescale(zero, {0.0, 0.0}, 0.5);
  CHECK(*std::max_element(out.values.begin(), out.values.end()) == 0.0);
  CHECK(*std::min_element(out.values.begin(), out.values.end()) == 0.0);

  // The sampled square x0 + r [-1.2, 1.2]^2 must fit inside the source hull.
  CHECK_THROWS_AS(rescale(zero, {0.9, 0.0}, 0.5), BallOutsideDomain);
  CHECK_THROWS_AS(rescale(zero, {0.0, 0.0}, 0.9), BallOutsideDomain);
  CHECK_THROWS_AS(rescale(zero, {0.0, 0.0}, 1.0), RadiusOutOfRange);
  CHECK_THROWS_AS(rescale(zero, {0.0, 0.0}, 0.0), RadiusOutOfRange);
  CHECK_THROWS_AS(rescale(zero, {0.0, 0.0}, -0.1), RadiusOutOfRange);
}

TEST_CASE("rescale reproduces the one-dimensional contact profile") {
  // Blow-up of the 1D shooting solution at its free boundary. At r = 1e-3
  // the rescaled value at x = 1 is U(r) / mu(r); the shooting profile gives
  // 0.49451..., comfortably within the 0.5 +- 0.1 band of the continuum
  // half-space limit.
  OracleSolution1D sol = shoot(1e-3, 0.002, ForcingMode::Logarithmic);
  Grid g = grid_1d(-0.0015, 3e-6, 1001);
  ScalarField u = field_from(g, [&](const Vec2& p) {
    return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
  });
  ScalarField ur = rescale(u, {0.0, 0.0}, 1e-3);
  CHECK(ur.grid.dim == 1);
  CHECK(ur.grid.nx() == 257);
  double at_one = sample(ur, {1.0, 0.0});
  CHECK(at_one == doctest::Approx(0.4945134671561639).epsilon(4e-3));
  CHECK(at_one == doctest::Approx(0.5).epsilon(0.2));
  CHECK(std::abs(at_one - 0.5) <= 0.1);
  // Left of the contact point the rescaled field vanishes identically.
  CHECK(sample(ur, {-1.0, 0.0}) == 0.0);
  CHECK(ur.at(0) == 0.0);
}

TEST_CASE("half-space fits recover orientation and residual") {
  const int n = 1024;

  // A perfectly aligned trace: the minimizer sits on the coarse-scan grid,
  // so the refined residual is numerically zero.
  HalfspaceFit aligned = halfspace_fit(halfspace_trace(n, 0.0));
  CHECK(std::abs(std::hypot(aligned.nu[0], aligned.nu[1]) - 1.0) <= 1e-6);
  CHECK(aligned.residual <= 1e-8);
  CHECK(std::abs(wrap_angle(nu_angle(aligned.nu))) <= 1e-4);

  // Rotated by 30 degrees: off the coarse grid, recovered by the golden
  // section refinement.
  HalfspaceFit rot = halfspace_fit(halfspace_trace(n, kPi / 6.0));
  CHECK(std::abs(wrap_angle(nu_angle(rot.nu) - kPi / 6.0)) <=
        0.5 * kPi / 180.0);
  CHECK(rot.residual <= 1e-6);

  // The constant trace |x|^2 / 4 on the unit circle: every orientation gives
  // the same L1 distance, integral |1/4 - (1/2) max(cos,0)^2| = pi/4 + 1/2.
  std::vector<double> quarter(n, 0.25);
  HalfspaceFit flat = halfspace_fit(quarter);
  CHECK(flat.residual ==
        doctest::Approx(1.2853981633974483).epsilon(1e-4));
  CHECK(std::abs(std::hypot(flat.nu[0], flat.nu[1]) - 1.0) <= 1e-6);

  CHECK_THROWS_AS(halfspace_fit(std::vector<double>(4, 0.0)), ConfigError);
}

TEST_CASE("half-space fitting is equivariant under trace rotation") {
  const int n = 1024;
  const auto angles = profile_angles(n);
  // A bumpy but clearly oriented trace; rotating it by a whole number of
  // angular steps is an index shift.
  std::vector<double> base(n);
  for (int j = 0; j < n; ++j) {
    double c = std::max(std::cos(angles[j]), 0.0);
    base[j] = 0.5 * c * c + 0.02 * (1.0 + std::sin(5.0 * angles[j]));
  }
  const int shift = 37;
  std::vector<double> rotated(n);
  for (int j = 0; j < n; ++j) rotated[(j + shift) % n] = base[j];

  HalfspaceFit f0 = halfspace_fit(base);
  HalfspaceFit f1 = halfspace_fit(rotated);
  double expected = shift * 2.0 * kPi / n;
  CHECK(std::abs(wrap_angle(nu_angle(f1.nu) - nu_angle(f0.nu) - expected)) <=
        1e-5);
  CHECK(std::abs(f1.residual - f0.residual) <= 1e-8);
}

TEST_CASE("planar profiles straighten as the radius shrinks") {
  const auto profiles = planar_profiles();
  REQUIRE(profiles.size() == 4);

  // Semi-analytic L1 residuals against the ideal half-space trace:
  // 0.19273, 0.12338, 0.08379, 0.05875 at r = 0.2, 0.1, 0.05, 0.025.
  const double expected[] = {0.192729, 0.123383, 0.083789, 0.058746};
  for (int k = 0; k < 4; ++k) {
    CHECK(profiles[k].fit_residual ==
          doctest::Approx(expected[k]).epsilon(0.15));
    // Orientation locks onto the interface normal e_1.
    CHECK(profiles[k].best_nu[0] > 0.99);
    CHECK(std::abs(profiles[k].best_nu[1]) < 0.05);
    CHECK(*std::min_element(profiles[k].trace.begin(),
                            profiles[k].trace.end()) >= 0.0);
  }
  for (int k = 0; k + 1 < 4; ++k)
    CHECK(profiles[k + 1].fit_residual < profiles[k].fit_residual);

  // Homogeneity defect drops by far more than the required factor of two
  // between r = 0.2 and r = 0.05 (the semi-analytic ratio is ~9.6).
  CHECK(profiles[2].hdefect <= 0.5 * profiles[0].hdefect);
  CHECK(profiles[2].hdefect > 0.0);
  CHECK(profiles[0].hdefect ==
        homogeneity_defect(planar_field(), {0.0, 0.0}, 0.2, fast_cfg()));

  // Uniqueness proxy: successive dyadic traces approach each other.
  // Semi-analytic distances 0.06935, 0.03959, 0.02504.
  double d01 = trace_distance(profiles[0].trace, profiles[1].trace);
  double d12 = trace_distance(profiles[1].trace, profiles[2].trace);
  double d23 = trace_distance(profiles[2].trace, profiles[3].trace);
  CHECK(d01 == doctest::Approx(0.069346).epsilon(0.15));
  CHECK(d12 == doctest::Approx(0.039594).epsilon(0.15));
  CHECK(d23 == doctest::Approx(0.025042).epsilon(0.15));
  CHECK(d01 > d12);
  CHECK(d12 > d23);
}

TEST_CASE("homogeneity defect of a half-plane profile matches closed form") {
  // u = (1/2) max(x1, 0)^2 rescales to max(x1, 0)^2 / (2 Lambda), which is
  // 2-homogeneous, so the defect integrand reduces to (2 u_r / Lambda)^2 and
  // the integral is (3 pi / 8) / Lambda^4. At r = e^{-1/2}, Lambda = 2 and
  // the defect is 3 pi / 128.
  Grid g = grid_2d(-1.05, -1.05, 0.0025, 841, 841);
  ScalarField u = field_from(g, [](const Vec2& p) {
    double s = std::max(p[0], 0.0);
    return 0.5 * s * s;
  });
  WeissConfig cfg;
  cfg.quadrature.interp_order = 3;
  double defect = homogeneity_defect(u, {0.0, 0.0}, std::exp(-0.5), cfg);
  CHECK(defect == doctest::Approx(3.0 * kPi / 128.0).epsilon(1e-6));

  ScalarField zero = constant_field(g, 0.0);
  CHECK(homogeneity_defect(zero, {0.0, 0.0}, 0.3, cfg) == 0.0);
}

TEST_CASE("decay fit recovers a synthetic power law") {
  std::vector<double> radii = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> gaps;
  for (double r : radii) gaps.push_back(std::pow(r, 0.8));
  WeissScan scan = synthetic_scan(radii, gaps, 0.25);

  DecayFit fit = decay_fit(scan, {});
  CHECK(fit.delta_hat == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(fit.delta_hat == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(fit.eta_hat == doctest::Approx(0.8 / 4.8).epsilon(1e-9));
  CHECK(fit.beta_hat == doctest::Approx(0.8 / 2.8).epsilon(1e-9));
  CHECK(fit.beta_hat ==
        doctest::Approx(0.2857142857142857).epsilon(1e-3));
  CHECK(std::abs(fit.beta_hat - fit.beta_hat_from_eta) <= 1e-12);
  CHECK_FALSE(fit.no_decay);
  REQUIRE(fit.radii.size() == 4);
  REQUIRE(fit.energy_gap.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(fit.radii[k] == radii[k]);
    CHECK(fit.energy_gap[k] == doctest::Approx(gaps[k]).epsilon(1e-14));
  }
}

TEST_CASE("decay fit flags missing decay and rejects bad scans") {
  std::vector<double> radii = {0.4, 0.2, 0.1, 0.05};

  // Constant gap: slope zero, flagged as no decay.
  WeissScan flat = synthetic_scan(radii, {0.07, 0.07, 0.07, 0.07}, 0.25);
  DecayFit fit = decay_fit(flat, {});
  CHECK(std::abs(fit.delta_hat) <= 1e-3);
  CHECK(fit.no_decay);

  // All gaps at numerical zero: nothing to fit, flagged rather than thrown.
  WeissScan zero = synthetic_scan(radii, {0.0, 0.0, 0.0, 0.0}, 0.25);
  DecayFit zfit = decay_fit(zero, {});
  CHECK(zfit.no_decay);
  CHECK(zfit.delta_hat == 0.0);

  // A gap below -tol violates monotonicity of the averaged energy.
  WeissScan bad = synthetic_scan(radii, {0.3, 0.2, 0.1, -1e-3}, 0.25);
  CHECK_THROWS_AS(decay_fit(bad, {}), NonPositiveEnergyGap);

  // A single zero gap is excluded from the log fit, not fatal.
  std::vector<double> gaps = {std::pow(0.4, 0.8), std::pow(0.2, 0.8),
                              std::pow(0.1, 0.8), 0.0};
  DecayFit partial = decay_fit(synthetic_scan(radii, gaps, 0.25), {});
  CHECK(partial.delta_hat == doctest::Approx(0.8).epsilon(1e-9));

  // Too few radii, or too narrow a span.
  WeissScan three = synthetic_scan({0.4, 0.2, 0.1}, {0.3, 0.2, 0.1}, 0.25);
  CHECK_THROWS_AS(decay_fit(three, {}), TooFewPoints);
  WeissScan narrow =
      synthetic_scan({0.4, 0.3, 0.2, 0.15}, {0.4, 0.3, 0.2, 0.15}, 0.25);
  CHECK_THROWS_AS(decay_fit(narrow, {}), TooFewPoints);
}

TEST_CASE("decay fit of the planar solution shows a positive rate") {
  WeissScan scan = wbar_scan(planar_field(), {0.0, 0.0},
                             {0.2, 0.1, 0.05, 0.025}, fast_cfg());
  const auto profiles = planar_profiles();
  DecayFit fit = decay_fit(scan, profiles);

  // Semi-analytic rate over these radii, with the gap measured against the
  // scan's own limit estimate, is 0.1665.
  CHECK(fit.delta_hat > 0.0);
  CHECK(fit.delta_hat > 0.08);
  CHECK(fit.delta_hat < 0.28);
  CHECK_FALSE(fit.no_decay);
  for (double e : fit.energy_gap) CHECK(e > 0.0);
  CHECK(std::abs(fit.beta_hat - fit.beta_hat_from_eta) <= 1e-12);

  // Distances to the r = 0.025 trace: semi-analytic 0.13398, 0.06464,
  // 0.02504 and zero for the reference itself.
  REQUIRE(fit.trace_distances.size() == 4);
  CHECK(fit.trace_distances[0] == doctest::Approx(0.133982).epsilon(0.15));
  CHECK(fit.trace_distances[1] == doctest::Approx(0.064637).epsilon(0.15));
  CHECK(fit.trace_distances[2] == doctest::Approx(0.025042).epsilon(0.15));
  CHECK(fit.trace_distances[3] == 0.0);
  CHECK(fit.trace_distances[0] > fit.trace_distances[1]);
  CHECK(fit.trace_distances[1] > fit.trace_distances[2]);

  // Fitted slope of those distances (semi-analytic 1.21) dominates half the
  // energy rate.
  CHECK(fit.trace_slope > 0.9);
  CHECK(fit.trace_slope < 1.5);
  CHECK(fit.trace_slope >= 0.5 * fit.delta_hat - 0.1);
}

TEST_CASE("profile and decay serialization round-trip") {
  BlowupProfile prof = make_profile(planar_field(), {0.0, 0.0}, 0.1,
                                    fast_cfg());
  const std::string path = "blowup_profile_test.csv";
  write_csv(path, prof);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta,value");
  const auto angles = profile_angles(int(prof.trace.size()));
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string ts, vs;
    std::getline(ls, ts, ',');
    std::getline(ls, vs, ',');
    CHECK(std::stod(ts) == doctest::Approx(angles[rows]).epsilon(1e-14));
    CHECK(std::stod(vs) == prof.trace[rows]);
    ++rows;
  }
  CHECK(rows == int(prof.trace.size()));
  std::remove(path.c_str());

  std::vector<double> radii = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> gaps;
  for (double r : radii) gaps.push_back(std::pow(r, 0.8));
  DecayFit fit = decay_fit(synthetic_scan(radii, gaps, 0.25), {});
  nlohmann::json j = nlohmann::json::parse(decay_to_json(fit));
  CHECK(j["delta_hat"].get<double>() == fit.delta_hat);
  CHECK(j["eta_hat"].get<double>() == fit.eta_hat);
  CHECK(j["beta_hat"].get<double>() == fit.beta_hat);
  CHECK(j["beta_hat_from_eta"].get<double>() == fit.beta_hat_from_eta);
  CHECK(j["no_decay"].get<bool>() == false);
  CHECK(j["radii"].size() == 4);
  CHECK(j["energy_gap"].size() == 4);
  CHECK(j["radii"][2].get<double>() == 0.1);
  CHECK(j["trace_distances"].size() == 0);
  CHECK(j["trace_slope"].get<double>() == 0.0);
}

}  // TEST_SUITE
