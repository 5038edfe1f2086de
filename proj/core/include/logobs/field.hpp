// Scalar and vector fields on uniform grids, point sampling (bilinear or
// bicubic) and second-order finite-difference gradients.
#pragma once

#include <functional>
#include <vector>

#include "logobs/grid.hpp"

namespace logobs {

struct ScalarField {
  Grid grid;
  std::vector<double> values;  // row-major, x fastest: values[j*nx + i]

  double& at(int i, int j = 0) { return values[static_cast<std::size_t>(j) * grid.nx() + i]; }
  double at(int i, int j = 0) const { return values[static_cast<std::size_t>(j) * grid.nx() + i]; }
};

struct VectorField {
  Grid grid;
  std::vector<double> vx, vy;  // vy unused when dim == 1

  double x_at(int i, int j = 0) const { return vx[static_cast<std::size_t>(j) * grid.nx() + i]; }
  double y_at(int i, int j = 0) const { return vy[static_cast<std::size_t>(j) * grid.nx() + i]; }
};

// Fill a field by evaluating fn at every node.
ScalarField field_from(const Grid& g, const std::function<double(const Vec2&)>& fn);

ScalarField constant_field(const Grid& g, double value);

// Interpolated value at a point inside the grid hull. interp_order 1 is
// bilinear (exact on affine fields), 3 is cubic convolution (Catmull-Rom,
// clamped stencil at the hull edges). Throws OutOfDomain outside the hull.
double sample(const ScalarField& f, const Vec2& p, int interp_order = 1);

// Component-wise interpolation of a vector field.
Vec2 sample(const VectorField& f, const Vec2& p, int interp_order = 1);

// Central differences in the interior, one-sided second-order stencils on the
// hull faces; exact for affine fields. Throws GridTooSmall below 3 nodes/axis.
VectorField gradient(const ScalarField& f);

}  // namespace logobs
