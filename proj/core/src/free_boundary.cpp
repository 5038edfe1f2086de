#include "logobs/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logobs/errors.hpp"
#include "logobs/field_io.hpp"
#include "logobs/quadrature.hpp"
#include "logobs/scaling.hpp"

namespace logobs {

namespace {

// Box-filtered indicator of {u > tau}: 3 nodes per axis, clamped at faces.
ScalarField smoothed_indicator(const ScalarField& u, double tau) {
  const Grid& g = u.grid;
  ScalarField s{g, std::vector<double>(u.values.size(), 0.0)};
  const int nx = g.nx(), ny = g.ny();
  auto chi = [&](int i, int j) {
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return u.at(i, j) > tau ? 1.0 : 0.0;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      if (g.dim == 1) {
        for (int di = -1; di <= 1; ++di) acc += chi(i + di, j);
        acc /= 3.0;
      } else {
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) acc += chi(i + di, j + dj);
        acc /= 9.0;
      }
      s.values[static_cast<std::size_t>(j) * nx + i] = acc;
    }
  return s;
}

Vec2 normal_at(const VectorField& grad_s, const Vec2& p, int dim) {
  Vec2 v = sample(grad_s, p);
  if (dim == 1) v[1] = 0.0;
  double len = std::hypot(v[0], v[1]);
  if (len < 1e-12) return {0.0, 0.0};
  return {v[0] / len, v[1] / len};
}

}  // namespace

double pos_threshold(double h) {
  if (!(h > 0.0)) throw GridTooSmall("pos_threshold: spacing must be positive");
  return h * h * (1.0 + 2.0 * std::abs(std::log(h))) * 0.1;
}

FreeBoundarySet extract(const ScalarField& u) { return extract(u, pos_threshold(u.grid.h)); }

FreeBoundarySet extract(const ScalarField& u, double tau) {
  validate(u.grid);
  const Grid& g = u.grid;
  FreeBoundarySet fb;
  fb.pos_threshold = tau;
  fb.spacing = g.h;

  ScalarField s = smoothed_indicator(u, tau);
  VectorField grad_s = gradient(s);

  const int nx = g.nx(), ny = g.ny();
  auto emit = [&](double a, double b, const Vec2& base, int axis) {
    if ((a > tau) == (b > tau)) return;
    double t = (tau - a) / (b - a);
    Vec2 p = base;
    p[axis] += t * g.h;
    fb.points.push_back(p);
    fb.normals.push_back(normal_at(grad_s, p, g.dim));
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) emit(u.at(i, j), u.at(i + 1, j), g.node(i, j), 0);
  if (g.dim == 2)
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) emit(u.at(i, j), u.at(i, j + 1), g.node(i, j), 1);
  return fb;
}

GrowthStats growth_stats(const ScalarField& u, const Vec2& x0, const std::vector<double>& radii) {
  FreeBoundarySet fb = extract(u);
  double dmin = std::numeric_limits<double>::infinity();
  for (const Vec2& p : fb.points)
    dmin = std::min(dmin, std::hypot(p[0] - x0[0], p[1] - x0[1]));
  if (!(dmin <= u.grid.h * (1.0 + 1e-9)))
    throw NotAFreeBoundaryPoint("growth_stats: x0 is not near the extracted interface");

  QuadratureConfig q;
  const GaussLegendre& gl = gauss_legendre(q.n_rad);
  GrowthStats out;
  out.center = x0;
  out.radii = radii;
  for (double r : radii) {
    require_ball_inside(u.grid, x0, r);
    double sup = 0.0;
    if (u.grid.dim == 1) {
      for (double rho : gl.x) {
        sup = std::max(sup, sample(u, {x0[0] + r * rho, 0.0}));
        sup = std::max(sup, sample(u, {x0[0] - r * rho, 0.0}));
      }
      sup = std::max(sup, sample(u, {x0[0] + r, 0.0}));
      sup = std::max(sup, sample(u, {x0[0] - r, 0.0}));
    } else {
      const double dtheta = 2.0 * M_PI / q.n_theta;
      for (int jt = 0; jt < q.n_theta; ++jt) {
        const double th = (jt + 0.5) * dtheta;
        const double cx = std::cos(th), sx = std::sin(th);
        for (double rho : gl.x)
          sup = std::max(sup, sample(u, {x0[0] + r * rho * cx, x0[1] + r * rho * sx}));
        sup = std::max(sup, sample(u, {x0[0] + r * cx, x0[1] + r * sx}));
      }
    }
    out.g.push_back(sup / (r * r * std::abs(std::log(r))));
  }
  return out;
}

HolderFit normal_holder_exponent(const FreeBoundarySet& fb) {
  const std::size_t n = fb.points.size();
  if (n < 8) throw TooFewPoints("normal_holder_exponent: need at least 8 points");

  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      diam = std::max(diam, std::hypot(fb.points[i][0] - fb.points[j][0],
                                       fb.points[i][1] - fb.points[j][1]));

  const double lo = 4.0 * fb.spacing, hi = diam / 4.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fb.normals[i][0] == 0.0 && fb.normals[i][1] == 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (fb.normals[j][0] == 0.0 && fb.normals[j][1] == 0.0) continue;
      double d = std::hypot(fb.points[i][0] - fb.points[j][0],
                            fb.points[i][1] - fb.points[j][1]);
      if (!(d > lo && d < hi)) continue;
      double dn = std::hypot(fb.normals[i][0] - fb.normals[j][0],
                             fb.normals[i][1] - fb.normals[j][1]);
      if (dn < 1e-3) continue;
      double x = std::log(d), y = std::log(dn);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }

  HolderFit fit;
  fit.pairs_used = m;
  double denom = m * sxx - sx * sx;
  if (m < 2 || denom <= 1e-12 * (std::abs(sxx) + 1.0) * m) {
    fit.flat = true;
    fit.pairs_used = (m < 2) ? 0 : m;
    return fit;
  }
  fit.beta_hat = (m * sxy - sx * sy) / denom;
  return fit;
}

Vec2 refine_center(const ScalarField& u, const Vec2& near_point) {
  FreeBoundarySet fb = extract(u);
  if (fb.points.empty()) throw NotAFreeBoundaryPoint("refine_center: empty interface");

  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fb.points.size(); ++k) {
    double d = std::hypot(fb.points[k][0] - near_point[0], fb.points[k][1] - near_point[1]);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  const Vec2 p = fb.points[best];
  const Vec2 m = fb.normals[best];
  if (m[0] == 0.0 && m[1] == 0.0) return p;

  const double h = u.grid.h;
  const Vec2 q1 = {p[0] + 2.0 * h * m[0], p[1] + 2.0 * h * m[1]};
  const Vec2 q2 = {p[0] + 4.0 * h * m[0], p[1] + 4.0 * h * m[1]};
  if (!u.grid.contains(q1) || !u.grid.contains(q2)) return p;
  const double u1 = sample(u, q1);
  const double u2 = sample(u, q2);
  if (!(u1 > fb.pos_threshold) || !(u2 > u1)) return p;

  const double target = u2 / u1;
  auto ratio = [&](double s) { return mu(4.0 * h - s) / mu(2.0 * h - s); };
  double a = -1.9 * h, b = 1.9 * h;
  double fa = ratio(a) - target, fb_ = ratio(b) - target;
  if (fa * fb_ > 0.0) return p;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    double fm = ratio(mid) - target;
    if (fa * fm <= 0.0) {
      b = mid;
      fb_ = fm;
    } else {
      a = mid;
      fa = fm;
    }
    if (b - a < 1e-3 * h) break;
  }
  const double s = 0.5 * (a + b);
  return {p[0] + s * m[0], p[1] + s * m[1]};
}

void write_csv(const std::string& path, const FreeBoundarySet& fb) {
  std::vector<std::vector<double>> rows;
  rows.reserve(fb.points.size());
  for (std::size_t k = 0; k < fb.points.size(); ++k)
    rows.push_back({fb.points[k][0], fb.points[k][1], fb.normals[k][0], fb.normals[k][1]});
  write_csv(path, "x,y,nx,ny", rows);
}

}  // namespace logobs
