#include "logobs/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "logobs/errors.hpp"

namespace logobs {

void validate(const QuadratureConfig& q) {
  if (q.n_theta < 64) throw ConfigError("n_theta must be >= 64, got " + std::to_string(q.n_theta));
  if (q.n_rad < 64) throw ConfigError("n_rad must be >= 64, got " + std::to_string(q.n_rad));
  if (q.interp_order != 1 && q.interp_order != 3)
    throw ConfigError("interp_order must be 1 or 3, got " + std::to_string(q.interp_order));
}

namespace {

// Legendre nodes by Newton iteration on P_n, then mapped from [-1,1] to [0,1].
GaussLegendre compute_gl(int n) {
  GaussLegendre gl;
  gl.x.resize(n);
  gl.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.x[n - 1 - i] = 0.5 * (x + 1.0);
    gl.w[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);  // already halved by the [0,1] map
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::map<int, GaussLegendre> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

double ball_integral_fn(int dim, const PointFn& fn, const Vec2& center, double r,
                        const QuadratureConfig& q) {
  validate(q);
  const GaussLegendre& gl = gauss_legendre(q.n_rad);
  if (dim == 1) {
    double s = 0.0;
    for (int i = 0; i < q.n_rad; ++i) {
      double rho = r * gl.x[i];
      s += gl.w[i] * (fn({center[0] + rho, 0.0}) + fn({center[0] - rho, 0.0}));
    }
    return r * s;
  }
  const double dtheta = 2.0 * std::numbers::pi / q.n_theta;
  double s = 0.0;
  for (int i = 0; i < q.n_rad; ++i) {
    double rho = r * gl.x[i];
    double ring = 0.0;
    for (int j = 0; j < q.n_theta; ++j) {
      double th = (j + 0.5) * dtheta;
      ring += fn({center[0] + rho * std::cos(th), center[1] + rho * std::sin(th)});
    }
    s += gl.w[i] * rho * ring;
  }
  return r * dtheta * s;
}

double sphere_integral_fn(int dim, const PointFn& fn, const Vec2& center, double r,
                          const QuadratureConfig& q) {
  validate(q);
  if (dim == 1)
    return fn({center[0] - r, 0.0}) + fn({center[0] + r, 0.0});
  const double dtheta = 2.0 * std::numbers::pi / q.n_theta;
  double s = 0.0;
  for (int j = 0; j < q.n_theta; ++j) {
    double th = (j + 0.5) * dtheta;
    s += fn({center[0] + r * std::cos(th), center[1] + r * std::sin(th)});
  }
  return r * dtheta * s;
}

void require_ball_inside(const Grid& g, const Vec2& center, double r) {
  const double slack = 1e-9 * g.h;
  for (int a = 0; a < g.dim; ++a) {
    if (center[a] - r < g.min(a) - slack || center[a] + r > g.max(a) + slack)
      throw BallOutsideDomain("ball of radius " + std::to_string(r) + " at (" +
                              std::to_string(center[0]) + ", " + std::to_string(center[1]) +
                              ") leaves the grid hull");
  }
}

double ball_integral(const ScalarField& f, const Vec2& center, double r,
                     const QuadratureConfig& q) {
  require_ball_inside(f.grid, center, r);
  return ball_integral_fn(f.grid.dim, [&](const Vec2& p) { return sample(f, p, q.interp_order); },
                          center, r, q);
}

double sphere_integral(const ScalarField& f, const Vec2& center, double r,
                       const QuadratureConfig& q) {
  require_ball_inside(f.grid, center, r);
  return sphere_integral_fn(f.grid.dim, [&](const Vec2& p) { return sample(f, p, q.interp_order); },
                            center, r, q);
}

}  // namespace logobs
