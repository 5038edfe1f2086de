// Adjusted boundary energies of the log-forced obstacle problem: the
// variable-parameter Weiss energy W(r;u,x0) in physical coordinates, its
// monotonicity decomposition dW/dr = K + Q, the modified Qbar with its
// integrable closed-form tail, truncated scans of Wbar with a limit
// estimate, the rescaled functionals M(r;v) and M0(v), the Phi diagnostic
// and the energy-density classification of free-boundary points.
#pragma once

#include <string>
#include <vector>

#include "logobs/field.hpp"
#include "logobs/quadrature.hpp"

namespace logobs {

struct WeissConfig {
  double gamma = 0.5;          // exponent of the Qbar subtraction, in (0,1)
  QuadratureConfig quadrature;
  double fd_step = 1e-3;       // relative step for derivative checks
};

void validate(const WeissConfig& cfg);

struct WeissRecord {
  double r = 0.0;
  double W = 0.0;
  double K = 0.0;
  double Q = 0.0;
  double Qbar = 0.0;
  double Wbar = 0.0;
  double Phi = 0.0;
  double hdefect = 0.0;  // sphere integral of the squared homogeneity defect
};

// Result of a truncated Wbar scan. Wbar(r) = W(r) - int_0^r Qbar, where the
// integral is composite Gauss-Legendre between the scan radii plus the
// closed-form tail of the subtraction below r_min; the tail of Q itself is
// extrapolated as zero, with tail_bound = C (log T + 1)/T, T = log(1/r_min),
// as the error bar for that truncation. The limit estimate extrapolates the
// three smallest radii linearly in xi(r) = Lambda(r)^{-gamma}/(2 gamma), the
// exact divergent part of the tail; the cross check is half the ball
// integral of the rescaled field at r_min. flagged marks disagreement
// between the two beyond 10%.
struct WeissScan {
  Vec2 center{0.0, 0.0};
  int dim = 2;
  std::vector<WeissRecord> records;  // one per radius, radii decreasing
  double Wbar_limit_estimate = 0.0;
  double Wbar_limit_cross_check = 0.0;
  double tail_bound = 0.0;
  bool flagged = false;
};

// W = alpha(r)/(r^{n+2} Lambda^2) int_{B_r(x0)} (|grad u|^2/2 + F(u))
//   - 1/(r^{n+3} Lambda^2) int_{dB_r(x0)} u^2, evaluated by quadrature in
// physical coordinates. Requires 0 < r < 1 and the closed ball inside the
// grid hull.
double weiss_energy(const ScalarField& u, const Vec2& x0, double r,
                    const WeissConfig& cfg);

// Central difference (W(r+d) - W(r-d))/(2d) with d = fd_step * r, for
// checking dW/dr = K + Q.
double weiss_energy_derivative_fd(const ScalarField& u, const Vec2& x0, double r,
                                  const WeissConfig& cfg);

// K = (alpha/r) int_{dB_1} (grad u_r . x - (2/alpha) u_r)^2 dH, nonnegative.
double K_term(const ScalarField& u, const Vec2& x0, double r,
              const WeissConfig& cfg);

// The sphere integral inside K, without the alpha/r prefactor. Measures how
// far the rescaled field is from 2/alpha-homogeneity on the unit sphere.
double homogeneity_defect(const ScalarField& u, const Vec2& x0, double r,
                          const WeissConfig& cfg);

// Q = 1/(2 r log^2 r) int_{B_1} (|grad u_r|^2/2 + G(r;u_r))
//   + alpha(r) int_{B_1} G1(r;u_r). Contributions where u_r = 0 are zero.
double Q_term(const ScalarField& u, const Vec2& x0, double r,
              const WeissConfig& cfg);

// Same quantity with the 1/(2 r log^2 r) factor written as alpha'(r), the
// form the derivation produces. Agreement with Q_term is asserted by tests;
// a discrepancy would mean the two scaling helpers drifted apart.
double Q_term_derivation_form(const ScalarField& u, const Vec2& x0, double r,
                              const WeissConfig& cfg);

// Qbar = Q - 1/(r Lambda^{1+gamma}).
double Qbar_term(const ScalarField& u, const Vec2& x0, double r,
                 const WeissConfig& cfg);

// Phi = W - [2 alpha log r / ((4 log r - 1)(n+2))] int_{dB_1} u_r dH.
double phi_diagnostic(const ScalarField& u, const Vec2& x0, double r,
                      const WeissConfig& cfg);

// Evaluate one record per radius and assemble Wbar as documented on
// WeissScan. radii must be strictly decreasing, each in (0,1), at least
// three of them, every ball inside the hull.
WeissScan wbar_scan(const ScalarField& u, const Vec2& x0,
                    const std::vector<double>& radii, const WeissConfig& cfg);

// M(r;v) = alpha(r) int_{B_1} (|grad v|^2/2 + G(r;v)) - int_{dB_1} v^2 for a
// field v whose grid hull covers the closed unit ball (DomainTooSmall
// otherwise); the gradient is the finite-difference one of the field.
double M_energy(double r, const ScalarField& v, const QuadratureConfig& q = {});

// M0(v) = int_{B_1} (|grad v|^2/2 + v) - int_{dB_1} v^2, the r -> 0 limit
// of M.
double M0_energy(const ScalarField& v, const QuadratureConfig& q = {});

using PointVecFn = std::function<Vec2(const Vec2&)>;

// Same functionals for exact evaluators instead of sampled fields. These
// carry no interpolation error, so closed-form profiles hit quadrature
// accuracy.
double M_energy_fn(int dim, double r, const PointFn& value, const PointVecFn& grad,
                   const QuadratureConfig& q = {});
double M0_energy_fn(int dim, const PointFn& value, const PointVecFn& grad,
                    const QuadratureConfig& q = {});

enum class Regularity { Regular, NotRegular };

// Half of the energy density of a half-space profile in dimension n:
// H^{n-1}(dB_1) / (8 n (n+2)).
double omega_half(int n);

// Regular iff |Wbar_limit - omega_half(n)| <= tol.
Regularity energy_density_classify(double Wbar_limit, int n, double tol);

// One CSV row per record, header "r,W,K,Q,Qbar,Wbar,Phi,hdefect".
void write_csv(const std::string& path, const WeissScan& scan);

std::string scan_to_json(const WeissScan& scan);

}  // namespace logobs
