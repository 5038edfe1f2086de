#include "logobs/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logobs/errors.hpp"

namespace logobs {

namespace {

std::string point_str(const Vec2& p, int dim) {
  std::string s = "(" + std::to_string(p[0]);
  if (dim == 2) s += ", " + std::to_string(p[1]);
  return s + ")";
}

// Fractional grid coordinate along one axis, clamped so points that sit on
// the hull boundary (or within round-off of it) index a valid cell.
void locate(double coord, double origin, double h, int count, int& cell, double& t) {
  double s = (coord - origin) / h;
  cell = static_cast<int>(std::floor(s));
  cell = std::clamp(cell, 0, count - 2);
  t = s - cell;
}

// Catmull-Rom weights for local coordinate t in [0,1].
void cubic_weights(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

double sample_values(const Grid& g, const std::vector<double>& vals, const Vec2& p,
                     int interp_order) {
  const double slack = 1e-9 * g.h;
  if (!g.contains(p, slack))
    throw OutOfDomain("point " + point_str(p, g.dim) + " outside grid hull");

  int ci, cj = 0;
  double tx, ty = 0.0;
  locate(p[0], g.origin[0], g.h, g.counts[0], ci, tx);
  if (g.dim == 2) locate(p[1], g.origin[1], g.h, g.counts[1], cj, ty);

  const int nx = g.nx();
  auto v = [&](int i, int j) {
    i = std::clamp(i, 0, g.counts[0] - 1);
    if (g.dim == 2) j = std::clamp(j, 0, g.counts[1] - 1);
    else j = 0;
    return vals[static_cast<std::size_t>(j) * nx + i];
  };

  if (interp_order == 1) {
    double a = v(ci, cj) * (1.0 - tx) + v(ci + 1, cj) * tx;
    if (g.dim == 1) return a;
    double b = v(ci, cj + 1) * (1.0 - tx) + v(ci + 1, cj + 1) * tx;
    return a * (1.0 - ty) + b * ty;
  }
  if (interp_order == 3) {
    double wx[4];
    cubic_weights(tx, wx);
    if (g.dim == 1) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += wx[a] * v(ci - 1 + a, 0);
      return s;
    }
    double wy[4];
    cubic_weights(ty, wy);
    double s = 0.0;
    for (int b = 0; b < 4; ++b) {
      double row = 0.0;
      for (int a = 0; a < 4; ++a) row += wx[a] * v(ci - 1 + a, cj - 1 + b);
      s += wy[b] * row;
    }
    return s;
  }
  throw OutOfDomain("interp_order must be 1 or 3, got " + std::to_string(interp_order));
}

}  // namespace

ScalarField field_from(const Grid& g, const std::function<double(const Vec2&)>& fn) {
  validate(g);
  ScalarField f;
  f.grid = g;
  f.values.resize(g.node_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f.at(i, j) = fn(g.node(i, j));
  return f;
}

ScalarField constant_field(const Grid& g, double value) {
  validate(g);
  ScalarField f;
  f.grid = g;
  f.values.assign(g.node_count(), value);
  return f;
}

double sample(const ScalarField& f, const Vec2& p, int interp_order) {
  return sample_values(f.grid, f.values, p, interp_order);
}

Vec2 sample(const VectorField& f, const Vec2& p, int interp_order) {
  Vec2 out{sample_values(f.grid, f.vx, p, interp_order), 0.0};
  if (f.grid.dim == 2) out[1] = sample_values(f.grid, f.vy, p, interp_order);
  return out;
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid;
  validate(g);
  VectorField out;
  out.grid = g;
  out.vx.assign(g.node_count(), 0.0);
  if (g.dim == 2) out.vy.assign(g.node_count(), 0.0);
  else out.vy.clear();

  const double inv2h = 1.0 / (2.0 * g.h);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * g.nx() + i;
      double dx;
      if (i == 0)
        dx = (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) * inv2h;
      else if (i == g.nx() - 1)
        dx = (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) * inv2h;
      else
        dx = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h;
      out.vx[k] = dx;

      if (g.dim == 2) {
        double dy;
        if (j == 0)
          dy = (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) * inv2h;
        else if (j == g.ny() - 1)
          dy = (3.0 * f.at(i, j) - 4.0 * f.at(i, j - 1) + f.at(i, j - 2)) * inv2h;
        else
          dy = (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h;
        out.vy[k] = dy;
      }
    }
  }
  return out;
}

}  // namespace logobs
