#pragma once

namespace logobs {

// Which right-hand side the energy uses: the logarithmic one that this
// project is about, or the constant-one comparison case.
enum class ForcingMode { Logarithmic, Constant };

// mu(r) = r^2 (1 - 2 log r), the natural rescaling factor. Requires 0 < r < 1.
double mu(double r);

// alpha(r) = 1 - 1/(2 log r), the effective homogeneity at scale r.
double alpha(double r);

// d/dr of alpha: 1 / (2 r log^2 r).
double alpha_prime(double r);

// Lambda(r) = 1 - 2 log r. Grows like 2 log(1/r) as r -> 0.
double capital_lambda(double r);

// Potential term in the energy.
//   Logarithmic: F(v) = v (1 - log v), extended by 0 at v = 0.
//   Constant:    F(v) = v.
// Throws NegativeInput for v < 0.
double F_energy(double v, ForcingMode mode);

// Smoothed potential F_eps(v) = (v+eps)(1 - log(v+eps)) - eps(1 - log eps),
// normalized so F_eps(0) = 0. eps = 0 falls back to F_energy. Constant mode
// ignores eps.
double F_energy_eps(double v, double eps, ForcingMode mode);

// Right-hand side of the Euler-Lagrange equation at value v:
//   Logarithmic: -log(v + eps)
//   Constant:    1
double forcing(double v, double eps, ForcingMode mode);

// Potential of the rescaled energy at scale r,
//   G(r; v) = v - (v / Lambda(r)) log(v Lambda(r)),
// extended by 0 at v = 0. Requires 0 < r < 1 and v >= 0.
double G_integrand(double r, double v);

// Partial derivative of G with respect to r,
//   G1(r; v) = (2 v / (r Lambda(r)^2)) (1 - log(v Lambda(r))),
// extended by 0 at v = 0. Requires 0 < r < 1 and v >= 0.
double G1_integrand(double r, double v);

}  // namespace logobs
