#pragma once

#include <string>
#include <vector>

#include "logobs/field.hpp"
#include "logobs/weiss.hpp"

namespace logobs {

// Rescaled boundary trace of a solution around a contact point, together
// with its best half-space approximation.
struct BlowupProfile {
  Vec2 center = {0.0, 0.0};
  double radius = 0.0;
  // Values of the rescaled solution on the unit circle, one per profile
  // angle (see profile_angles).
  std::vector<double> trace;
  // Orientation of the best-fitting half-space profile, a unit vector.
  Vec2 best_nu = {1.0, 0.0};
  // L1 distance on the unit circle between the trace and the fitted
  // half-space profile (1/2) max(x . nu, 0)^2.
  double fit_residual = 0.0;
  // Integral over the unit circle of the squared deviation from
  // 2/alpha(r)-homogeneity; see homogeneity_defect in weiss.hpp.
  double hdefect = 0.0;
};

struct HalfspaceFit {
  Vec2 nu = {1.0, 0.0};
  double residual = 0.0;
};

// Power-law fit of the averaged-energy gap along a scan, plus the trace
// convergence read off from a family of profiles.
struct DecayFit {
  std::vector<double> radii;
  // Gap between the averaged energy at each radius and the scan's limit
  // estimate. Both carry the same truncation offset from the smallest scan
  // radius, so the offset cancels in the difference.
  std::vector<double> energy_gap;
  // Log-log least-squares slope of the gap: energy_gap ~ r^delta_hat.
  double delta_hat = 0.0;
  // Exponent transforms used downstream: eta = delta / (n + 2 + delta) and
  // beta = delta / (2 + delta), with the second form recomputed from eta as
  // a consistency check.
  double eta_hat = 0.0;
  double beta_hat = 0.0;
  double beta_hat_from_eta = 0.0;
  // Set when the fitted slope is indistinguishable from zero or when too few
  // gaps are positive to fit one.
  bool no_decay = false;
  std::vector<double> trace_radii;
  // L1 distances between each profile's trace and the smallest-radius trace;
  // the reference entry itself is zero.
  std::vector<double> trace_distances;
  // Log-log slope of the nonzero trace distances.
  double trace_slope = 0.0;
};

// Resamples u around x0 at scale r onto a fixed unit grid, dividing by the
// scale factor mu(r): out(x) = max(u(x0 + r x), 0) / mu(r). The output grid
// spans [-1.2, 1.2] per axis with 257 nodes, so the closed unit ball stays
// well interior. Requires the sampled square x0 + r [-1.2, 1.2]^dim to lie
// inside the source hull (BallOutsideDomain) and r in (0, 1)
// (RadiusOutOfRange). interp_order selects bilinear (1) or cubic (3) source
// sampling.
ScalarField rescale(const ScalarField& u, const Vec2& x0, double r,
                    int interp_order = 1);

// Angles at which traces are sampled: theta_j = 2 pi (j + 1/2) / n, matching
// the sphere quadrature layout.
std::vector<double> profile_angles(int n);

// Finds the half-space profile (1/2) max(x . nu, 0)^2 closest to the trace
// in L1 on the unit circle: a coarse 64-point orientation scan followed by
// golden-section refinement. The trace must hold at least 8 values
// (ConfigError).
HalfspaceFit halfspace_fit(const std::vector<double>& trace);

// L1 distance on the unit circle between two traces sampled at the same
// angles. Throws ConfigError on length mismatch.
double trace_distance(const std::vector<double>& a,
                      const std::vector<double>& b);

// Assembles the trace of the rescaled solution on the unit circle, its
// half-space fit and its homogeneity defect. Two-dimensional fields only
// (ConfigError).
BlowupProfile make_profile(const ScalarField& u, const Vec2& x0, double r,
                           const WeissConfig& cfg);

// Fits energy_gap(r) = Wbar(r) - Wbar_limit_estimate to a power law over the
// scan radii and reads the trace convergence rate from the profiles, which
// must be ordered by strictly decreasing radius (the last one is the
// reference). Requires at least 4 scan radii spanning a factor of 4
// (TooFewPoints); a gap below -tol throws NonPositiveEnergyGap; gaps below
// +tol are excluded from the log fit.
DecayFit decay_fit(const WeissScan& scan,
                   const std::vector<BlowupProfile>& profiles,
                   double tol = 1e-6);

// Writes "theta,value" rows, one per trace sample.
void write_csv(const std::string& path, const BlowupProfile& profile);

std::string decay_to_json(const DecayFit& fit);

}  // namespace logobs
