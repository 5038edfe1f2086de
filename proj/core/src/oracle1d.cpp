#include "logobs/oracle1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logobs/errors.hpp"

namespace logobs {

namespace {

// Expansion coefficients for v(L) = L + a log L + b + (c log L + d)/L.
constexpr double kA = -0.5;
constexpr double kB = 1.5;
constexpr double kC = 0.25;
constexpr double kD = -1.5;

struct SeedTerms {
  double v;
  double vp;   // dv/dL
  double vpp;  // d2v/dL2
};

SeedTerms seed_terms(double x) {
  const double L = -std::log(x);
  const double lnL = std::log(L);
  SeedTerms t;
  t.v = L + kA * lnL + kB + (kC * lnL + kD) / L;
  t.vp = 1.0 + kA / L + (kC - kC * lnL - kD) / (L * L);
  t.vpp = -kA / (L * L) + (2.0 * kC * lnL - 3.0 * kC + 2.0 * kD) / (L * L * L);
  return t;
}

struct State {
  double u;
  double up;
};

State rhs(const State& y) { return {y.up, -std::log(y.u)}; }

// One Cash-Karp trial step. Returns the 5th order result and the scaled
// error estimate against the embedded 4th order solution.
double try_step(const State& y, double h, State* out) {
  static constexpr double b21 = 1.0 / 5.0;
  static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  static constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                          b54 = 35.0 / 27.0;
  static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                          b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                          c6 = 512.0 / 1771.0;
  static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                          d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;
  static constexpr double kRtol = 1e-12;
  static constexpr double kAtol = 1e-18;

  const double inf = std::numeric_limits<double>::infinity();
  auto stage = [&](double cu, double cup) -> State {
    return {y.u + h * cu, y.up + h * cup};
  };

  State k1 = rhs(y);
  State y2 = stage(b21 * k1.u, b21 * k1.up);
  if (y2.u <= 0.0) return inf;
  State k2 = rhs(y2);
  State y3 = stage(b31 * k1.u + b32 * k2.u, b31 * k1.up + b32 * k2.up);
  if (y3.u <= 0.0) return inf;
  State k3 = rhs(y3);
  State y4 = stage(b41 * k1.u + b42 * k2.u + b43 * k3.u, b41 * k1.up + b42 * k2.up + b43 * k3.up);
  if (y4.u <= 0.0) return inf;
  State k4 = rhs(y4);
  State y5 = stage(b51 * k1.u + b52 * k2.u + b53 * k3.u + b54 * k4.u,
                   b51 * k1.up + b52 * k2.up + b53 * k3.up + b54 * k4.up);
  if (y5.u <= 0.0) return inf;
  State k5 = rhs(y5);
  State y6 = stage(b61 * k1.u + b62 * k2.u + b63 * k3.u + b64 * k4.u + b65 * k5.u,
                   b61 * k1.up + b62 * k2.up + b63 * k3.up + b64 * k4.up + b65 * k5.up);
  if (y6.u <= 0.0) return inf;
  State k6 = rhs(y6);

  State hi = {y.u + h * (c1 * k1.u + c3 * k3.u + c4 * k4.u + c6 * k6.u),
              y.up + h * (c1 * k1.up + c3 * k3.up + c4 * k4.up + c6 * k6.up)};
  State lo = {y.u + h * (d1 * k1.u + d3 * k3.u + d4 * k4.u + d5 * k5.u + d6 * k6.u),
              y.up + h * (d1 * k1.up + d3 * k3.up + d4 * k4.up + d5 * k5.up + d6 * k6.up)};
  if (hi.u <= 0.0) return inf;

  double sc_u = kAtol + kRtol * std::max(std::abs(y.u), std::abs(hi.u));
  double sc_up = kAtol + kRtol * std::max(std::abs(y.up), std::abs(hi.up));
  double err = std::max(std::abs(hi.u - lo.u) / sc_u, std::abs(hi.up - lo.up) / sc_up);
  *out = hi;
  return err;
}

void advance(double x0, double x1, State* y) {
  double x = x0;
  double h = x1 - x0;
  int rejects = 0;
  while (x < x1 * (1.0 - 1e-15)) {
    h = std::min(h, x1 - x);
    State next;
    double err = try_step(*y, h, &next);
    if (err <= 1.0) {
      x += h;
      *y = next;
      if (y->u >= 1.0) throw BlowThrough("u reached 1 before x_max");
      rejects = 0;
      double grow = (err == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h *= std::max(1.0, grow);
    } else {
      if (++rejects > 60) throw NonConvergence("step control stalled in shoot");
      double shrink = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= shrink;
    }
  }
}

// Second derivative at t of the quintic matching (x, u, u') at three
// consecutive samples, via Newton divided differences with doubled nodes.
double refit_upp(const OracleSample& s0, const OracleSample& s1, const OracleSample& s2,
                 double t) {
  const double z[6] = {s0.x, s0.x, s1.x, s1.x, s2.x, s2.x};
  double row[6] = {s0.u, s0.u, s1.u, s1.u, s2.u, s2.u};
  double c[6];
  c[0] = row[0];
  double first[5] = {s0.up, (s1.u - s0.u) / (s1.x - s0.x), s1.up,
                     (s2.u - s1.u) / (s2.x - s1.x), s2.up};
  for (int i = 0; i < 5; ++i) row[i] = first[i];
  c[1] = row[0];
  for (int k = 2; k <= 5; ++k) {
    for (int i = 0; i + k <= 5; ++i) row[i] = (row[i + 1] - row[i]) / (z[i + k] - z[i]);
    c[k] = row[0];
  }
  double p = c[5], dp = 0.0, ddp = 0.0;
  for (int j = 4; j >= 0; --j) {
    ddp = ddp * (t - z[j]) + 2.0 * dp;
    dp = dp * (t - z[j]) + p;
    p = p * (t - z[j]) + c[j];
  }
  return ddp;
}

std::vector<double> geometric_abscissas(double x_seed, double x_max) {
  std::vector<double> xs;
  for (double x = x_seed; x < x_max * (1.0 - 1e-12); x *= 1.01) xs.push_back(x);
  xs.push_back(x_max);
  return xs;
}

}  // namespace

double seed_u(double x) {
  if (!(x > 0.0)) throw OutOfRange("seed_u: x must be positive");
  return x * x * seed_terms(x).v;
}

double seed_up(double x) {
  if (!(x > 0.0)) throw OutOfRange("seed_up: x must be positive");
  SeedTerms t = seed_terms(x);
  return x * (2.0 * t.v - t.vp);
}

double seed_residual(double x) {
  if (!(x > 0.0)) throw OutOfRange("seed_residual: x must be positive");
  SeedTerms t = seed_terms(x);
  const double L = -std::log(x);
  return std::abs((2.0 * t.v - 3.0 * t.vp + t.vpp) - (2.0 * L - std::log(t.v)));
}

OracleSolution1D shoot(double x_seed, double x_max, ForcingMode mode) {
  if (!(x_seed > 0.0) || !std::isfinite(x_seed)) throw OutOfRange("x_seed must be positive");
  if (!(x_max > x_seed) || !std::isfinite(x_max)) throw OutOfRange("x_max must exceed x_seed");

  OracleSolution1D sol;
  sol.x_seed = x_seed;
  sol.x_max = x_max;
  sol.mode = mode;

  std::vector<double> xs = geometric_abscissas(x_seed, x_max);
  sol.samples.reserve(xs.size());

  if (mode == ForcingMode::Constant) {
    for (double x : xs) sol.samples.push_back({x, 0.5 * x * x, x});
    return sol;
  }

  if (x_seed > 1e-3 * (1.0 + 1e-12))
    throw SeedTooLarge("x_seed exceeds the validated range of the expansion");
  if (seed_residual(x_seed) > 0.15)
    throw SeedTooLarge("expansion residual too large at x_seed");

  State y = {seed_u(x_seed), seed_up(x_seed)};
  sol.samples.push_back({x_seed, y.u, y.up});
  for (std::size_t k = 1; k < xs.size(); ++k) {
    advance(xs[k - 1], xs[k], &y);
    sol.samples.push_back({xs[k], y.u, y.up});
  }

  double worst = 0.0;
  const std::size_t n = sol.samples.size();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const OracleSample& a = sol.samples[k];
    const OracleSample& b = sol.samples[k + 1];
    const OracleSample& c = sol.samples[k + 2];
    worst = std::max(worst, std::abs(refit_upp(a, b, c, b.x) + std::log(b.u)));
    if (k == 0) worst = std::max(worst, std::abs(refit_upp(a, b, c, a.x) + std::log(a.u)));
    if (k + 3 == n) worst = std::max(worst, std::abs(refit_upp(a, b, c, c.x) + std::log(c.u)));
  }
  sol.residual_max = worst;
  return sol;
}

OracleValue interpolate(const OracleSolution1D& sol, double x) {
  if (!(x >= 0.0) || x > sol.x_max * (1.0 + 1e-12))
    throw OutOfRange("interpolate: x outside [0, x_max]");
  if (x == 0.0) return {0.0, 0.0};
  if (x < sol.x_seed) {
    if (sol.mode == ForcingMode::Constant) return {0.5 * x * x, x};
    return {seed_u(x), seed_up(x)};
  }
  const auto& s = sol.samples;
  auto it = std::lower_bound(s.begin(), s.end(), x,
                             [](const OracleSample& a, double v) { return a.x < v; });
  if (it == s.end()) return {s.back().u, s.back().up};
  if (it->x == x) return {it->u, it->up};
  const OracleSample& b = *it;
  const OracleSample& a = *(it - 1);
  const double h = b.x - a.x;
  const double t = (x - a.x) / h;
  const double t2 = t * t;
  const double omt = 1.0 - t;
  double u = (1.0 + 2.0 * t) * omt * omt * a.u + t * omt * omt * h * a.up +
             t2 * (3.0 - 2.0 * t) * b.u + t2 * (t - 1.0) * h * b.up;
  double up = (6.0 * t2 - 6.0 * t) / h * a.u + (3.0 * t2 - 4.0 * t + 1.0) * a.up +
              (6.0 * t - 6.0 * t2) / h * b.u + (3.0 * t2 - 2.0 * t) * b.up;
  return {u, up};
}

}  // namespace logobs
