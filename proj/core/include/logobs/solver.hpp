// Constrained minimization of the discrete energy
//   sum over edges 1/2 |du/h|^2 h^n  +  sum over nodes w F_eps(u) h^n
// over fields with u >= 0 and fixed hull values, by projected SOR with the
// log forcing lagged one sweep and continuation over the eps schedule.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "logobs/field.hpp"
#include "logobs/free_boundary.hpp"
#include "logobs/scaling.hpp"

namespace logobs {

struct ProblemSpec {
  Grid grid;
  // Hull node values in boundary_node_indices order, all >= 0.
  std::vector<double> boundary_data;
  ForcingMode mode = ForcingMode::Logarithmic;
  // Strictly decreasing, positive. Ignored in Constant mode (single exact
  // stage).
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double relax_omega = 1.7;  // in (0, 2)
  double tol = 1e-10;        // stage stop: max projected update below tol
  long max_sweeps = 200000;  // total across all stages
};

std::vector<std::size_t> boundary_node_indices(const Grid& g);

// ProblemSpec with boundary data filled by evaluating phi on the hull nodes.
ProblemSpec make_problem(const Grid& g, ForcingMode mode,
                         const std::function<double(const Vec2&)>& phi);

struct SolveReport {
  // Bare-potential energy (eps = 0) of the returned field.
  double final_energy = 0.0;
  long sweeps_used = 0;
  // Max projected update of the last sweep.
  double residual = 0.0;
  // Max over interior nodes of |min(u, u - relaxation target)| at the final
  // stage; the complementarity defect in update units.
  double kkt_violation = 0.0;
  // One (eps, end-of-stage energy) entry per continuation stage.
  std::vector<std::pair<double, double>> epsilon_trace;
  std::vector<std::string> warnings;
};

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

// Energy of a field matching the problem's boundary data exactly.
double discrete_energy(const ScalarField& u, const ProblemSpec& spec, double eps);

// Minimize. Energy is verified to be non-increasing sweep by sweep; a rise
// beyond round-off slack raises DivergingEnergy, exhausting max_sweeps
// raises NonConvergence.
SolveResult solve(const ProblemSpec& spec);

// Nodewise equation defect |Delta_h u - forcing(u)| on interior nodes where
// u exceeds the positivity threshold, 0 elsewhere.
ScalarField residual_map(const ScalarField& u, const ProblemSpec& spec);

// Max over nodes of |grad u| / (d log(1/d)) with d the distance to the
// extracted interface, restricted to h < d < 0.1. Optionally collects the
// (d, ratio) samples.
double gradient_log_lipschitz_check(const ScalarField& u, const FreeBoundarySet& fb,
                                    std::vector<std::pair<double, double>>* samples = nullptr);

std::string report_to_text(const SolveReport& rep);
std::string report_to_json(const SolveReport& rep);

}  // namespace logobs
