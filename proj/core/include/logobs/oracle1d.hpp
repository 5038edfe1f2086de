#pragma once

#include <vector>

#include "logobs/scaling.hpp"

namespace logobs {

struct OracleSample {
  double x;
  double u;
  double up;
};

struct OracleValue {
  double u;
  double up;
};

// One-sided 1D reference profile with contact at the origin, computed by
// shooting from an asymptotic seed on a geometric grid. residual_max is a
// certificate: max |u'' + log u| over the samples, u'' recovered by a local
// degree-5 refit (0 in Constant mode, where the samples are exact).
struct OracleSolution1D {
  double x_seed = 0.0;
  double x_max = 0.0;
  ForcingMode mode = ForcingMode::Logarithmic;
  std::vector<OracleSample> samples;
  double residual_max = 0.0;
};

// Asymptotic expansion near the contact point, u = x^2 v(L) with
// L = log(1/x),  v = L - log(L)/2 + 3/2 + (log(L)/4 - 3/2)/L.
double seed_u(double x);
double seed_up(double x);

// Defect |u'' + log u| of the expansion at x, with derivatives taken
// analytically in the L variable. Decays like log(L)^2 / L^2.
double seed_residual(double x);

// Integrate u'' = -log u (or the classical u'' = 1) from the seed out to
// x_max. Logarithmic mode requires x_seed <= 1e-3; throws SeedTooLarge
// otherwise and BlowThrough if u reaches 1 before x_max.
OracleSolution1D shoot(double x_seed, double x_max, ForcingMode mode);

// Evaluate (u, u') anywhere in [0, x_max]: stored values at sample
// abscissas, cubic Hermite between them, the expansion below x_seed,
// (0, 0) at the origin.
OracleValue interpolate(const OracleSolution1D& sol, double x);

}  // namespace logobs
