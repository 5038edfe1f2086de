#pragma once

#include <string>
#include <vector>

#include "logobs/field.hpp"

namespace logobs {

// Positivity cutoff tau(h) = h^2 (1 + 2|log h|) / 10, matched to the
// intrinsic growth scale of the solution so the interface location does not
// drift with the mesh.
double pos_threshold(double h);

// Interface of {u > tau}: sub-cell crossing points on grid edges plus unit
// normals pointing into the positive set. A normal is (0, 0) where the
// smoothed-indicator gradient is too flat to orient.
struct FreeBoundarySet {
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  double pos_threshold = 0.0;
  double spacing = 0.0;
};

FreeBoundarySet extract(const ScalarField& u);
FreeBoundarySet extract(const ScalarField& u, double tau);

struct GrowthStats {
  Vec2 center{};
  std::vector<double> radii;
  std::vector<double> g;  // sup over B_r of u, divided by r^2 |log r|
};

// Growth ratios around a free boundary point x0 (must lie within one grid
// spacing of the extracted interface; every ball must fit in the hull).
GrowthStats growth_stats(const ScalarField& u, const Vec2& x0, const std::vector<double>& radii);

struct HolderFit {
  double beta_hat = 0.0;
  int pairs_used = 0;
  bool flat = false;
};

// Log-log least squares of |nu(y)-nu(z)| against |y-z| over point pairs in
// the window (4 spacing, diam/4), skipping pairs whose normal difference is
// below the 1e-3 resolution floor. flat is set when nothing survives.
HolderFit normal_holder_exponent(const FreeBoundarySet& fb);

// Sub-cell correction of an interface location: fits the growth model
// u(p + t nu) ~ A mu(t - s) to two probes along the normal and returns the
// shifted point. Falls back to the nearest extracted point when the probes
// leave the hull or the fit does not bracket.
Vec2 refine_center(const ScalarField& u, const Vec2& near_point);

void write_csv(const std::string& path, const FreeBoundarySet& fb);

}  // namespace logobs
