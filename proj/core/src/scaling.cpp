#include "logobs/scaling.hpp"

#include <cmath>

#include "logobs/errors.hpp"

namespace logobs {

namespace {

void require_unit_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw RadiusOutOfRange("radius must lie in (0,1)");
}

// Below this the value is treated as exactly zero. v log v underflows to 0
// long before, but the cutoff also shields log from denormal garbage.
constexpr double kTiny = 1e-300;

}  // namespace

double mu(double r) {
  require_unit_radius(r);
  return r * r * (1.0 - 2.0 * std::log(r));
}

double alpha(double r) {
  require_unit_radius(r);
  return 1.0 - 1.0 / (2.0 * std::log(r));
}

double alpha_prime(double r) {
  require_unit_radius(r);
  const double lg = std::log(r);
  return 1.0 / (2.0 * r * lg * lg);
}

double capital_lambda(double r) {
  require_unit_radius(r);
  return 1.0 - 2.0 * std::log(r);
}

double F_energy(double v, ForcingMode mode) {
  if (v < 0.0) throw NegativeInput("F_energy: negative value");
  if (mode == ForcingMode::Constant) return v;
  if (v < kTiny) return 0.0;
  return v * (1.0 - std::log(v));
}

double F_energy_eps(double v, double eps, ForcingMode mode) {
  if (v < 0.0) throw NegativeInput("F_energy_eps: negative value");
  if (eps < 0.0) throw NegativeInput("F_energy_eps: negative eps");
  if (mode == ForcingMode::Constant) return v;
  if (eps == 0.0) return F_energy(v, mode);
  const double a = v + eps;
  return a * (1.0 - std::log(a)) - eps * (1.0 - std::log(eps));
}

double forcing(double v, double eps, ForcingMode mode) {
  if (mode == ForcingMode::Constant) return 1.0;
  return -std::log(v + eps);
}

double G_integrand(double r, double v) {
  require_unit_radius(r);
  if (v < 0.0) throw NegativeInput("G_integrand: negative value");
  if (v < kTiny) return 0.0;
  const double lam = capital_lambda(r);
  return v - (v / lam) * std::log(v * lam);
}

double G1_integrand(double r, double v) {
  require_unit_radius(r);
  if (v < 0.0) throw NegativeInput("G1_integrand: negative value");
  if (v < kTiny) return 0.0;
  const double lam = capital_lambda(r);
  return (2.0 * v / (r * lam * lam)) * (1.0 - std::log(v * lam));
}

}  // namespace logobs
