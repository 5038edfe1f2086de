// Uniform grid over an axis-aligned box in 1 or 2 dimensions.
// Node (i,j) sits at origin + (i,j)*h; extent per axis is (counts-1)*h.
#pragma once

#include <array>
#include <cstddef>

#include "logobs/errors.hpp"

namespace logobs {

using Vec2 = std::array<double, 2>;

struct Grid {
  int dim = 2;
  std::array<int, 2> counts{0, 0};  // counts[1] ignored when dim == 1
  Vec2 origin{0.0, 0.0};
  double h = 0.0;

  int nx() const { return counts[0]; }
  int ny() const { return dim == 2 ? counts[1] : 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny());
  }
  double min(int axis) const { return origin[axis]; }
  double max(int axis) const { return origin[axis] + (counts[axis] - 1) * h; }
  Vec2 node(int i, int j = 0) const {
    return {origin[0] + i * h, dim == 2 ? origin[1] + j * h : 0.0};
  }
  bool contains(const Vec2& p, double slack = 0.0) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < min(a) - slack || p[a] > max(a) + slack) return false;
    return true;
  }
};

inline void validate(const Grid& g) {
  if (g.dim != 1 && g.dim != 2) throw GridTooSmall("dim must be 1 or 2");
  if (!(g.h > 0.0)) throw GridTooSmall("spacing must be positive");
  for (int a = 0; a < g.dim; ++a)
    if (g.counts[a] < 3) throw GridTooSmall("counts must be >= 3 per axis");
}

inline Grid grid_1d(double xmin, double h, int n) {
  Grid g;
  g.dim = 1;
  g.counts = {n, 1};
  g.origin = {xmin, 0.0};
  g.h = h;
  validate(g);
  return g;
}

inline Grid grid_2d(double xmin, double ymin, double h, int nx, int ny) {
  Grid g;
  g.dim = 2;
  g.counts = {nx, ny};
  g.origin = {xmin, ymin};
  g.h = h;
  validate(g);
  return g;
}

}  // namespace logobs
