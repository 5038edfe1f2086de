#include "logobs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "logobs/errors.hpp"
#include "logobs/field_io.hpp"

namespace logobs {

namespace {

void validate_spec(const ProblemSpec& spec) {
  validate(spec.grid);
  if (spec.boundary_data.size() != boundary_node_indices(spec.grid).size())
    throw ConfigError("boundary_data size does not match the hull node count");
  for (double v : spec.boundary_data)
    if (!(v >= 0.0)) throw NegativeInput("boundary data must be non-negative");
  if (!(spec.relax_omega > 0.0) || !(spec.relax_omega < 2.0))
    throw ConfigError("relax_omega must lie in (0, 2)");
  if (!(spec.tol > 0.0)) throw ConfigError("tol must be positive");
  if (spec.max_sweeps < 1) throw ConfigError("max_sweeps must be at least 1");
  if (spec.mode == ForcingMode::Logarithmic) {
    if (spec.epsilons.empty()) throw ConfigError("epsilon schedule is empty");
    for (std::size_t k = 0; k < spec.epsilons.size(); ++k) {
      if (!(spec.epsilons[k] > 0.0))
        throw ConfigError("epsilon schedule entries must be positive");
      if (k > 0 && !(spec.epsilons[k] < spec.epsilons[k - 1]))
        throw ConfigError("epsilon schedule must be strictly decreasing");
    }
  }
}

void require_same_grid(const Grid& a, const Grid& b) {
  bool same = a.dim == b.dim && a.counts == b.counts && a.h == b.h &&
              a.origin == b.origin;
  if (!same) throw ConfigError("field grid does not match the problem grid");
}

// Trapezoid weight along one axis: half on the faces, one inside.
double axis_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

double energy_of(const ScalarField& u, ForcingMode mode, double eps) {
  const Grid& g = u.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  double grad_sum = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      double du = u.at(i + 1, j) - u.at(i, j);
      grad_sum += du * du;
    }
  if (g.dim == 2)
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double du = u.at(i, j + 1) - u.at(i, j);
        grad_sum += du * du;
      }
  // 1/2 sum (du/h)^2 h^dim = 1/2 sum du^2 h^(dim-2)
  double grad = 0.5 * grad_sum * (g.dim == 2 ? 1.0 : 1.0 / g.h);

  double pot = 0.0;
  for (int j = 0; j < ny; ++j) {
    double wy = g.dim == 2 ? axis_weight(j, ny) : 1.0;
    for (int i = 0; i < nx; ++i)
      pot += wy * axis_weight(i, nx) * F_energy_eps(u.at(i, j), eps, mode);
  }
  pot *= g.dim == 2 ? g.h * g.h : g.h;
  return grad + pot;
}

}  // namespace

std::vector<std::size_t> boundary_node_indices(const Grid& g) {
  validate(g);
  std::vector<std::size_t> idx;
  const int nx = g.nx();
  const int ny = g.ny();
  if (g.dim == 1) {
    idx.push_back(0);
    idx.push_back(static_cast<std::size_t>(nx - 1));
    return idx;
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (i == 0 || i == nx - 1 || j == 0 || j == ny - 1)
        idx.push_back(static_cast<std::size_t>(j) * nx + i);
  return idx;
}

ProblemSpec make_problem(const Grid& g, ForcingMode mode,
                         const std::function<double(const Vec2&)>& phi) {
  ProblemSpec spec;
  spec.grid = g;
  spec.mode = mode;
  for (std::size_t k : boundary_node_indices(g)) {
    int i = static_cast<int>(k) % g.nx();
    int j = static_cast<int>(k) / g.nx();
    spec.boundary_data.push_back(phi(g.node(i, j)));
  }
  return spec;
}

double discrete_energy(const ScalarField& u, const ProblemSpec& spec, double eps) {
  validate_spec(spec);
  require_same_grid(u.grid, spec.grid);
  if (!(eps >= 0.0)) throw NegativeInput("eps must be non-negative");
  for (double v : u.values)
    if (v < 0.0) throw NegativeField("field has negative values");
  std::vector<std::size_t> idx = boundary_node_indices(spec.grid);
  for (std::size_t k = 0; k < idx.size(); ++k)
    if (u.values[idx[k]] != spec.boundary_data[k])
      throw BoundaryMismatch("field does not carry the problem's boundary data");
  return energy_of(u, spec.mode, eps);
}

SolveResult solve(const ProblemSpec& spec) {
  validate_spec(spec);
  const Grid& g = spec.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  const double h2 = g.h * g.h;
  const double diag = g.dim == 2 ? 4.0 : 2.0;
  const double omega = spec.relax_omega;

  SolveResult res;
  res.u = constant_field(g, 0.0);
  std::vector<std::size_t> bidx = boundary_node_indices(g);
  double sup_phi = 0.0;
  for (std::size_t k = 0; k < bidx.size(); ++k) {
    res.u.values[bidx[k]] = spec.boundary_data[k];
    sup_phi = std::max(sup_phi, spec.boundary_data[k]);
  }
  if (sup_phi >= 1.0)
    res.report.warnings.push_back("boundary data reaches " + fmt_g17(sup_phi) +
                                  "; the forcing changes sign where u exceeds 1");

  std::vector<double> stages;
  if (spec.mode == ForcingMode::Constant)
    stages.push_back(0.0);
  else
    stages = spec.epsilons;

  std::vector<double>& u = res.u.values;
  std::vector<double> f(u.size(), 1.0);
  const int jlo = g.dim == 2 ? 1 : 0;
  const int jhi = g.dim == 2 ? ny - 1 : 1;

  for (double eps : stages) {
    double stage_start = energy_of(res.u, spec.mode, eps);
    double prev = stage_start;
    for (;;) {
      if (res.report.sweeps_used >= spec.max_sweeps)
        throw NonConvergence("max_sweeps exhausted at eps = " + fmt_g17(eps));
      if (spec.mode == ForcingMode::Logarithmic)
        for (std::size_t k = 0; k < u.size(); ++k) f[k] = forcing(u[k], eps, spec.mode);
      double max_delta = 0.0;
      for (int j = jlo; j < jhi; ++j) {
        std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 1; i + 1 < nx; ++i) {
          std::size_t k = row + i;
          double nb = u[k - 1] + u[k + 1];
          if (g.dim == 2) nb += u[k - nx] + u[k + nx];
          double target = (nb - h2 * f[k]) / diag;
          double next = u[k] + omega * (target - u[k]);
          if (next < 0.0) next = 0.0;
          max_delta = std::max(max_delta, std::abs(next - u[k]));
          u[k] = next;
        }
      }
      ++res.report.sweeps_used;
      double now = energy_of(res.u, spec.mode, eps);
      if (now > prev + 1e-9 * (1.0 + std::abs(prev)))
        throw DivergingEnergy("energy rose within a sweep at eps = " + fmt_g17(eps));
      prev = now;
      if (max_delta < spec.tol) {
        res.report.residual = max_delta;
        break;
      }
    }
    if (prev > stage_start + spec.tol)
      throw DivergingEnergy("energy rose across the stage at eps = " + fmt_g17(eps));
    res.report.epsilon_trace.emplace_back(eps, prev);
  }

  double eps_last = stages.back();
  double kkt = 0.0;
  for (int j = jlo; j < jhi; ++j) {
    std::size_t row = static_cast<std::size_t>(j) * nx;
    for (int i = 1; i + 1 < nx; ++i) {
      std::size_t k = row + i;
      double nb = u[k - 1] + u[k + 1];
      if (g.dim == 2) nb += u[k - nx] + u[k + nx];
      double target = (nb - h2 * forcing(u[k], eps_last, spec.mode)) / diag;
      kkt = std::max(kkt, std::abs(std::min(u[k], u[k] - target)));
    }
  }
  res.report.kkt_violation = kkt;
  res.report.final_energy = energy_of(res.u, spec.mode, 0.0);
  return res;
}

ScalarField residual_map(const ScalarField& u, const ProblemSpec& spec) {
  validate_spec(spec);
  require_same_grid(u.grid, spec.grid);
  const Grid& g = u.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  const double tau = pos_threshold(g.h);
  ScalarField out = constant_field(g, 0.0);
  const int jlo = g.dim == 2 ? 1 : 0;
  const int jhi = g.dim == 2 ? ny - 1 : 1;
  for (int j = jlo; j < jhi; ++j)
    for (int i = 1; i + 1 < nx; ++i) {
      double v = u.at(i, j);
      if (v <= tau) continue;
      double lap = u.at(i - 1, j) + u.at(i + 1, j) - 2.0 * v;
      if (g.dim == 2) lap += u.at(i, j - 1) + u.at(i, j + 1) - 2.0 * v;
      lap /= g.h * g.h;
      out.at(i, j) = std::abs(lap - forcing(v, 0.0, spec.mode));
    }
  return out;
}

double gradient_log_lipschitz_check(const ScalarField& u, const FreeBoundarySet& fb,
                                    std::vector<std::pair<double, double>>* samples) {
  if (fb.points.empty()) throw EmptyFreeBoundary("no interface points to measure from");
  const Grid& g = u.grid;
  VectorField gr = gradient(u);
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Vec2 p = g.node(i, j);
      double d2 = 1e300;
      for (const Vec2& q : fb.points) {
        double dx = p[0] - q[0];
        double dy = p[1] - q[1];
        d2 = std::min(d2, dx * dx + dy * dy);
      }
      double d = std::sqrt(d2);
      if (!(d > g.h) || !(d < 0.1)) continue;
      double mag = std::hypot(gr.x_at(i, j), g.dim == 2 ? gr.y_at(i, j) : 0.0);
      double ratio = mag / (d * std::log(1.0 / d));
      worst = std::max(worst, ratio);
      if (samples) samples->emplace_back(d, ratio);
    }
  return worst;
}

std::string report_to_text(const SolveReport& rep) {
  std::ostringstream os;
  os << "final_energy: " << fmt_g17(rep.final_energy) << "\n";
  os << "sweeps_used: " << rep.sweeps_used << "\n";
  os << "residual: " << fmt_g17(rep.residual) << "\n";
  os << "kkt_violation: " << fmt_g17(rep.kkt_violation) << "\n";
  for (const auto& [eps, energy] : rep.epsilon_trace)
    os << "stage: eps=" << fmt_g17(eps) << " energy=" << fmt_g17(energy) << "\n";
  for (const std::string& w : rep.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string report_to_json(const SolveReport& rep) {
  std::ostringstream os;
  os << "{\"final_energy\":" << fmt_g17(rep.final_energy)
     << ",\"sweeps_used\":" << rep.sweeps_used
     << ",\"residual\":" << fmt_g17(rep.residual)
     << ",\"kkt_violation\":" << fmt_g17(rep.kkt_violation)
     << ",\"epsilon_trace\":[";
  for (std::size_t k = 0; k < rep.epsilon_trace.size(); ++k) {
    if (k) os << ",";
    os << "[" << fmt_g17(rep.epsilon_trace[k].first) << ","
       << fmt_g17(rep.epsilon_trace[k].second) << "]";
  }
  os << "],\"warnings\":[";
  for (std::size_t k = 0; k < rep.warnings.size(); ++k) {
    if (k) os << ",";
    os << "\"";
    for (char c : rep.warnings[k]) {
      if (c == '"' || c == '\\') os << '\\';
      os << c;
    }
    os << "\"";
  }
  os << "]}";
  return os.str();
}

}  // namespace logobs
