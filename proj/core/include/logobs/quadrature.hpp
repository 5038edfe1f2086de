// Ball and sphere quadrature around a center point.
//   2D ball:   Gauss-Legendre radial nodes x equispaced angular nodes (polar).
//   2D sphere: trapezoidal rule over the angles, scaled by r^{n-1}.
//   1D ball:   Gauss-Legendre on the interval [c-r, c+r].
//   1D sphere: the two endpoints with counting measure.
// Angular nodes are offset by half a step so axis-aligned kinks in test
// fields do not coincide with sample points.
#pragma once

#include <functional>
#include <vector>

#include "logobs/field.hpp"

namespace logobs {

struct QuadratureConfig {
  int n_theta = 1024;  // >= 64
  int n_rad = 512;     // >= 64
  int interp_order = 1;
};

void validate(const QuadratureConfig& q);

// Gauss-Legendre nodes and weights on [0,1], cached per n.
struct GaussLegendre {
  std::vector<double> x, w;
};
const GaussLegendre& gauss_legendre(int n);

using PointFn = std::function<double(const Vec2&)>;

// Quadrature of a callable; dim selects the 1D or 2D rule. The node layout
// for radius r is exactly the unit layout scaled by r about the center.
double ball_integral_fn(int dim, const PointFn& fn, const Vec2& center, double r,
                        const QuadratureConfig& q);
double sphere_integral_fn(int dim, const PointFn& fn, const Vec2& center, double r,
                          const QuadratureConfig& q);

// Field versions sample through `sample`; the closed ball must lie inside the
// grid hull (BallOutsideDomain otherwise).
double ball_integral(const ScalarField& f, const Vec2& center, double r,
                     const QuadratureConfig& q);
double sphere_integral(const ScalarField& f, const Vec2& center, double r,
                       const QuadratureConfig& q);

void require_ball_inside(const Grid& g, const Vec2& center, double r);

}  // namespace logobs
