#include "logobs/weiss.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>

#include "logobs/errors.hpp"
#include "logobs/field_io.hpp"
#include "logobs/scaling.hpp"

namespace logobs {

namespace {

// Unit-ball view of u about (x0, r): value u(x0 + r x)/mu(r) clamped at
// zero, gradient r grad u(x0 + r x)/mu(r) through the materialized
// finite-difference gradient. All rescaled-coordinate integrals below run
// over B_1 or dB_1 with this probe.
struct RescaledProbe {
  const ScalarField& u;
  const VectorField& gu;
  Vec2 x0;
  double r;
  double m;
  int order;

  Vec2 physical(const Vec2& p) const {
    return {x0[0] + r * p[0], x0[1] + r * p[1]};
  }
  double value(const Vec2& p) const {
    return std::max(0.0, sample(u, physical(p), order)) / m;
  }
  Vec2 grad(const Vec2& p) const {
    Vec2 g = sample(gu, physical(p), order);
    return {r * g[0] / m, r * g[1] / m};
  }
};

RescaledProbe make_probe(const ScalarField& u, const VectorField& gu, const Vec2& x0,
                         double r, const WeissConfig& cfg) {
  return RescaledProbe{u, gu, x0, r, mu(r), cfg.quadrature.interp_order};
}

double w_physical(const ScalarField& u, const VectorField& gu, const Vec2& x0, double r,
                  const WeissConfig& cfg) {
  int dim = u.grid.dim;
  int order = cfg.quadrature.interp_order;
  double a = alpha(r);
  double lam = capital_lambda(r);

  double ball = ball_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = sample(gu, p, order);
        double v = std::max(0.0, sample(u, p, order));
        return 0.5 * (g[0] * g[0] + g[1] * g[1]) + F_energy(v, ForcingMode::Logarithmic);
      },
      x0, r, cfg.quadrature);
  double sphere = sphere_integral_fn(
      dim,
      [&](const Vec2& p) {
        double v = std::max(0.0, sample(u, p, order));
        return v * v;
      },
      x0, r, cfg.quadrature);

  return a / (std::pow(r, dim + 2) * lam * lam) * ball -
         1.0 / (std::pow(r, dim + 3) * lam * lam) * sphere;
}

double hdefect_probe(const RescaledProbe& probe, int dim, const QuadratureConfig& q,
                     double a) {
  return sphere_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = probe.grad(p);
        double d = g[0] * p[0] + g[1] * p[1] - (2.0 / a) * probe.value(p);
        return d * d;
      },
      {0.0, 0.0}, 1.0, q);
}

double q_probe(const RescaledProbe& probe, int dim, const QuadratureConfig& q, double r,
               bool derivation_form) {
  double grad_ball = ball_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = probe.grad(p);
        return 0.5 * (g[0] * g[0] + g[1] * g[1]) + G_integrand(r, probe.value(p));
      },
      {0.0, 0.0}, 1.0, q);
  double g1_ball = ball_integral_fn(
      dim, [&](const Vec2& p) { return G1_integrand(r, probe.value(p)); }, {0.0, 0.0},
      1.0, q);

  double lg = std::log(r);
  double front = derivation_form ? alpha_prime(r) : 1.0 / (2.0 * r * lg * lg);
  return front * grad_ball + alpha(r) * g1_ball;
}

double phi_probe(const RescaledProbe& probe, int dim, const QuadratureConfig& q, double r,
                 double w) {
  double sphere_v = sphere_integral_fn(
      dim, [&](const Vec2& p) { return probe.value(p); }, {0.0, 0.0}, 1.0, q);
  double lg = std::log(r);
  double coef = 2.0 * alpha(r) * lg / ((4.0 * lg - 1.0) * (dim + 2));
  return w - coef * sphere_v;
}

void require_scan_inputs(const ScalarField& u, const Vec2& x0, double r,
                         const WeissConfig& cfg) {
  validate(cfg);
  capital_lambda(r);  // rejects r outside (0,1)
  require_ball_inside(u.grid, x0, r);
}

// int_0^r s^{-1} Lambda(s)^{-(1+gamma)} ds = Lambda(r)^{-gamma}/(2 gamma)
double subtraction_tail(double r, double gamma) {
  return std::pow(capital_lambda(r), -gamma) / (2.0 * gamma);
}


}  // namespace

void validate(const WeissConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !(cfg.gamma < 1.0))
    throw ConfigError("weiss gamma must lie strictly inside (0,1)");
  if (!(cfg.fd_step > 0.0) || !(cfg.fd_step < 0.5))
    throw ConfigError("weiss fd_step must lie in (0, 0.5)");
  validate(cfg.quadrature);
}

double weiss_energy(const ScalarField& u, const Vec2& x0, double r,
                    const WeissConfig& cfg) {
  require_scan_inputs(u, x0, r, cfg);
  VectorField gu = gradient(u);
  return w_physical(u, gu, x0, r, cfg);
}

double weiss_energy_derivative_fd(const ScalarField& u, const Vec2& x0, double r,
                                  const WeissConfig& cfg) {
  double d = cfg.fd_step * r;
  require_scan_inputs(u, x0, r + d, cfg);
  VectorField gu = gradient(u);
  return (w_physical(u, gu, x0, r + d, cfg) - w_physical(u, gu, x0, r - d, cfg)) /
         (2.0 * d);
}

double homogeneity_defect(const ScalarField& u, const Vec2& x0, double r,
                          const WeissConfig& cfg) {
  require_scan_inputs(u, x0, r, cfg);
  VectorField gu = gradient(u);
  RescaledProbe probe = make_probe(u, gu, x0, r, cfg);
  return hdefect_probe(probe, u.grid.dim, cfg.quadrature, alpha(r));
}

double K_term(const ScalarField& u, const Vec2& x0, double r, const WeissConfig& cfg) {
  return alpha(r) / r * homogeneity_defect(u, x0, r, cfg);
}

double Q_term(const ScalarField& u, const Vec2& x0, double r, const WeissConfig& cfg) {
  require_scan_inputs(u, x0, r, cfg);
  VectorField gu = gradient(u);
  RescaledProbe probe = make_probe(u, gu, x0, r, cfg);
  return q_probe(probe, u.grid.dim, cfg.quadrature, r, false);
}

double Q_term_derivation_form(const ScalarField& u, const Vec2& x0, double r,
                              const WeissConfig& cfg) {
  require_scan_inputs(u, x0, r, cfg);
  VectorField gu = gradient(u);
  RescaledProbe probe = make_probe(u, gu, x0, r, cfg);
  return q_probe(probe, u.grid.dim, cfg.quadrature, r, true);
}

double Qbar_term(const ScalarField& u, const Vec2& x0, double r, const WeissConfig& cfg) {
  return Q_term(u, x0, r, cfg) -
         1.0 / (r * std::pow(capital_lambda(r), 1.0 + cfg.gamma));
}

double phi_diagnostic(const ScalarField& u, const Vec2& x0, double r,
                      const WeissConfig& cfg) {
  require_scan_inputs(u, x0, r, cfg);
  VectorField gu = gradient(u);
  RescaledProbe probe = make_probe(u, gu, x0, r, cfg);
  double w = w_physical(u, gu, x0, r, cfg);
  return phi_probe(probe, u.grid.dim, cfg.quadrature, r, w);
}

WeissScan wbar_scan(const ScalarField& u, const Vec2& x0,
                    const std::vector<double>& radii, const WeissConfig& cfg) {
  validate(cfg);
  if (radii.size() < 3)
    throw ConfigError("wbar_scan needs at least three radii to extrapolate the limit");
  for (double r : radii) capital_lambda(r);
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] < radii[k - 1]))
      throw ConfigError("wbar_scan radii must be strictly decreasing");
  require_ball_inside(u.grid, x0, radii.front());

  int dim = u.grid.dim;
  const QuadratureConfig& q = cfg.quadrature;
  VectorField gu = gradient(u);

  WeissScan scan;
  scan.center = x0;
  scan.dim = dim;
  scan.records.reserve(radii.size());

  auto qbar_at = [&](double s) {
    RescaledProbe probe = make_probe(u, gu, x0, s, cfg);
    return q_probe(probe, dim, q, s, false) -
           1.0 / (s * std::pow(capital_lambda(s), 1.0 + cfg.gamma));
  };

  for (double r : radii) {
    RescaledProbe probe = make_probe(u, gu, x0, r, cfg);
    WeissRecord rec;
    rec.r = r;
    rec.W = w_physical(u, gu, x0, r, cfg);
    rec.hdefect = hdefect_probe(probe, dim, q, alpha(r));
    rec.K = alpha(r) / r * rec.hdefect;
    rec.Q = q_probe(probe, dim, q, r, false);
    rec.Qbar = rec.Q - 1.0 / (r * std::pow(capital_lambda(r), 1.0 + cfg.gamma));
    rec.Phi = phi_probe(probe, dim, q, r, rec.W);
    scan.records.push_back(rec);
  }

  // int_{r_min}^{r_k} Qbar ds by composite Gauss-Legendre between
  // consecutive scan radii, accumulated upward from the smallest radius.
  std::size_t m = radii.size();
  std::vector<double> cum(m, 0.0);
  const GaussLegendre& gl = gauss_legendre(8);
  for (std::size_t k = m - 1; k > 0; --k) {
    double lo = radii[k], hi = radii[k - 1];
    double seg = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i)
      seg += (hi - lo) * gl.w[i] * qbar_at(lo + (hi - lo) * gl.x[i]);
    cum[k - 1] = cum[k] + seg;
  }

  double rmin = radii.back();
  double tail = subtraction_tail(rmin, cfg.gamma);
  for (std::size_t k = 0; k < m; ++k) scan.records[k].Wbar = scan.records[k].W - cum[k] + tail;

  // Limit estimate: least-squares line of Wbar against
  // xi(r) = Lambda(r)^{-gamma}/(2 gamma) over the three smallest radii; the
  // intercept removes the divergent closed-form part of the tail.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = m - 3; k < m; ++k) {
    double x = subtraction_tail(radii[k], cfg.gamma);
    double y = scan.records[k].Wbar;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = 3.0 * sxx - sx * sx;
  double slope = (3.0 * sxy - sx * sy) / denom;
  scan.Wbar_limit_estimate = (sy - slope * sx) / 3.0;

  RescaledProbe probe_min = make_probe(u, gu, x0, rmin, cfg);
  scan.Wbar_limit_cross_check =
      0.5 * ball_integral_fn(dim, [&](const Vec2& p) { return probe_min.value(p); },
                             {0.0, 0.0}, 1.0, q);

  double T = -std::log(rmin);
  scan.tail_bound = 1.5 * (std::log(T) + 1.0) / T;
  // The 1e-9 floor keeps two estimates that are both numerical zeros (a scan
  // of the zero field) from counting as a disagreement.
  double scale = std::max({std::abs(scan.Wbar_limit_estimate),
                           std::abs(scan.Wbar_limit_cross_check), 1e-9});
  scan.flagged =
      std::abs(scan.Wbar_limit_estimate - scan.Wbar_limit_cross_check) > 0.1 * scale;
  return scan;
}

namespace {

void require_unit_ball_covered(const Grid& g) {
  for (int a = 0; a < g.dim; ++a)
    if (g.min(a) > -1.0 || g.max(a) < 1.0)
      throw DomainTooSmall("field grid must cover the closed unit ball");
}

double m_like_energy(const ScalarField& v, const QuadratureConfig& q, double a,
                     const std::function<double(double)>& potential) {
  validate(q);
  require_unit_ball_covered(v.grid);
  int dim = v.grid.dim;
  VectorField gv = gradient(v);
  double ball = ball_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = sample(gv, p, q.interp_order);
        return 0.5 * (g[0] * g[0] + g[1] * g[1]) +
               potential(std::max(0.0, sample(v, p, q.interp_order)));
      },
      {0.0, 0.0}, 1.0, q);
  double sphere = sphere_integral_fn(
      dim,
      [&](const Vec2& p) {
        double val = std::max(0.0, sample(v, p, q.interp_order));
        return val * val;
      },
      {0.0, 0.0}, 1.0, q);
  return a * ball - sphere;
}

}  // namespace

double M_energy(double r, const ScalarField& v, const QuadratureConfig& q) {
  double a = alpha(r);  // rejects r outside (0,1)
  return m_like_energy(v, q, a, [r](double val) { return G_integrand(r, val); });
}

double M0_energy(const ScalarField& v, const QuadratureConfig& q) {
  return m_like_energy(v, q, 1.0, [](double val) { return val; });
}

double M_energy_fn(int dim, double r, const PointFn& value, const PointVecFn& grad,
                   const QuadratureConfig& q) {
  validate(q);
  double a = alpha(r);
  double ball = ball_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = grad(p);
        return 0.5 * (g[0] * g[0] + g[1] * g[1]) + G_integrand(r, value(p));
      },
      {0.0, 0.0}, 1.0, q);
  double sphere = sphere_integral_fn(
      dim,
      [&](const Vec2& p) {
        double v = value(p);
        return v * v;
      },
      {0.0, 0.0}, 1.0, q);
  return a * ball - sphere;
}

double M0_energy_fn(int dim, const PointFn& value, const PointVecFn& grad,
                    const QuadratureConfig& q) {
  validate(q);
  double ball = ball_integral_fn(
      dim,
      [&](const Vec2& p) {
        Vec2 g = grad(p);
        return 0.5 * (g[0] * g[0] + g[1] * g[1]) + value(p);
      },
      {0.0, 0.0}, 1.0, q);
  double sphere = sphere_integral_fn(
      dim,
      [&](const Vec2& p) {
        double v = value(p);
        return v * v;
      },
      {0.0, 0.0}, 1.0, q);
  return ball - sphere;
}

double omega_half(int n) {
  if (n < 1) throw ConfigError("omega_half needs dimension n >= 1");
  double surface = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  return surface / (8.0 * n * (n + 2));
}

Regularity energy_density_classify(double Wbar_limit, int n, double tol) {
  return std::abs(Wbar_limit - omega_half(n)) <= tol ? Regularity::Regular
                                                     : Regularity::NotRegular;
}

void write_csv(const std::string& path, const WeissScan& scan) {
  std::vector<std::vector<double>> rows;
  rows.reserve(scan.records.size());
  for (const WeissRecord& rec : scan.records)
    rows.push_back({rec.r, rec.W, rec.K, rec.Q, rec.Qbar, rec.Wbar, rec.Phi, rec.hdefect});
  write_csv(path, "r,W,K,Q,Qbar,Wbar,Phi,hdefect", rows);
}

std::string scan_to_json(const WeissScan& scan) {
  std::ostringstream out;
  out << "{\"center\":[";
  for (int a = 0; a < scan.dim; ++a) {
    if (a) out << ",";
    out << fmt_g17(scan.center[a]);
  }
  out << "],\"dim\":" << scan.dim << ",\"records\":[";
  for (std::size_t k = 0; k < scan.records.size(); ++k) {
    const WeissRecord& rec = scan.records[k];
    if (k) out << ",";
    out << "{\"r\":" << fmt_g17(rec.r) << ",\"W\":" << fmt_g17(rec.W)
        << ",\"K\":" << fmt_g17(rec.K) << ",\"Q\":" << fmt_g17(rec.Q)
        << ",\"Qbar\":" << fmt_g17(rec.Qbar) << ",\"Wbar\":" << fmt_g17(rec.Wbar)
        << ",\"Phi\":" << fmt_g17(rec.Phi)
        << ",\"hdefect\":" << fmt_g17(rec.hdefect) << "}";
  }
  out << "],\"Wbar_limit_estimate\":" << fmt_g17(scan.Wbar_limit_estimate)
      << ",\"Wbar_limit_cross_check\":" << fmt_g17(scan.Wbar_limit_cross_check)
      << ",\"tail_bound\":" << fmt_g17(scan.tail_bound)
      << ",\"flagged\":" << (scan.flagged ? "true" : "false") << "}";
  return out.str();
}

}  // namespace logobs
