#include "logobs/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>

#include "logobs/errors.hpp"
#include "logobs/field_io.hpp"
#include "logobs/quadrature.hpp"
#include "logobs/scaling.hpp"

namespace logobs {

namespace {

constexpr double kPi = std::numbers::pi;

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double halfspace_value(double c) { return c > 0.0 ? 0.5 * c * c : 0.0; }

void append_array(std::ostringstream& out, const char* name,
                  const std::vector<double>& v) {
  out << "\"" << name << "\":[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out << ",";
    out << fmt_g17(v[k]);
  }
  out << "]";
}

}  // namespace

ScalarField rescale(const ScalarField& u, const Vec2& x0, double r,
                    int interp_order) {
  const double m = mu(r);
  const Grid& g = u.grid;
  // The output grid reaches to 1.2 in every direction, so the whole sampled
  // square has to sit inside the source hull, not just the unit ball image.
  const double reach = 1.2 * r;
  for (int a = 0; a < g.dim; ++a) {
    if (x0[a] - reach < g.min(a) - 1e-12 || x0[a] + reach > g.max(a) + 1e-12)
      throw BallOutsideDomain(
          "rescale needs the square x0 + r [-1.2, 1.2]^dim inside the grid "
          "hull");
  }
  const int n = 257;
  const double h = 2.4 / 256.0;
  Grid out =
      g.dim == 2 ? grid_2d(-1.2, -1.2, h, n, n) : grid_1d(-1.2, h, n);
  return field_from(out, [&](const Vec2& p) {
    Vec2 q = {x0[0] + r * p[0], 0.0};
    if (g.dim == 2) q[1] = x0[1] + r * p[1];
    return std::max(0.0, sample(u, q, interp_order)) / m;
  });
}

std::vector<double> profile_angles(int n) {
  std::vector<double> angles(n);
  for (int j = 0; j < n; ++j) angles[j] = 2.0 * kPi * (j + 0.5) / n;
  return angles;
}

HalfspaceFit halfspace_fit(const std::vector<double>& trace) {
  const int n = int(trace.size());
  if (n < 8)
    throw ConfigError("half-space fit needs at least 8 trace samples");
  const std::vector<double> angles = profile_angles(n);
  const double dth = 2.0 * kPi / n;
  auto objective = [&](double phi) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      s += std::abs(trace[j] - halfspace_value(std::cos(angles[j] - phi)));
    return s * dth;
  };

  const int coarse = 64;
  double best_phi = 0.0;
  double best_val = objective(0.0);
  for (int k = 1; k < coarse; ++k) {
    double phi = 2.0 * kPi * k / coarse;
    double v = objective(phi);
    if (v < best_val) {
      best_val = v;
      best_phi = phi;
    }
  }

  // Golden-section refinement inside the coarse cell around the best sample.
  double lo = best_phi - 2.0 * kPi / coarse;
  double hi = best_phi + 2.0 * kPi / coarse;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double phi = 0.5 * (lo + hi);
  double val = objective(phi);
  if (best_val < val) {
    phi = best_phi;
    val = best_val;
  }
  return {{std::cos(phi), std::sin(phi)}, val};
}

double trace_distance(const std::vector<double>& a,
                      const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("trace distance needs two traces of equal length");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return s * 2.0 * kPi / double(a.size());
}

BlowupProfile make_profile(const ScalarField& u, const Vec2& x0, double r,
                           const WeissConfig& cfg) {
  validate(cfg);
  if (u.grid.dim != 2)
    throw ConfigError("half-space profiles need a two-dimensional field");
  require_ball_inside(u.grid, x0, r);
  const double m = mu(r);
  const int n = cfg.quadrature.n_theta;
  const std::vector<double> angles = profile_angles(n);

  BlowupProfile prof;
  prof.center = x0;
  prof.radius = r;
  prof.trace.resize(n);
  for (int j = 0; j < n; ++j) {
    Vec2 p = {x0[0] + r * std::cos(angles[j]),
              x0[1] + r * std::sin(angles[j])};
    prof.trace[j] =
        std::max(0.0, sample(u, p, cfg.quadrature.interp_order)) / m;
  }
  HalfspaceFit fit = halfspace_fit(prof.trace);
  prof.best_nu = fit.nu;
  prof.fit_residual = fit.residual;
  prof.hdefect = homogeneity_defect(u, x0, r, cfg);
  return prof;
}

DecayFit decay_fit(const WeissScan& scan,
                   const std::vector<BlowupProfile>& profiles, double tol) {
  if (scan.records.size() < 4)
    throw TooFewPoints("decay fit needs at least 4 scan radii");
  const double span =
      scan.records.front().r / scan.records.back().r;
  if (!(span >= 4.0))
    throw TooFewPoints("decay fit needs scan radii spanning a factor of 4");

  DecayFit fit;
  for (const WeissRecord& rec : scan.records) {
    double gap = rec.Wbar - scan.Wbar_limit_estimate;
    if (gap < -tol) {
      std::ostringstream msg;
      msg << "energy gap " << fmt_g17(gap) << " at r = " << fmt_g17(rec.r)
          << " is negative beyond tolerance";
      throw NonPositiveEnergyGap(msg.str());
    }
    fit.radii.push_back(rec.r);
    fit.energy_gap.push_back(gap);
  }

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < fit.radii.size(); ++k) {
    if (fit.energy_gap[k] > tol) {
      lx.push_back(std::log(fit.radii[k]));
      ly.push_back(std::log(fit.energy_gap[k]));
    }
  }
  if (lx.size() < 2) {
    fit.no_decay = true;
  } else {
    fit.delta_hat = lsq_slope(lx, ly);
    fit.no_decay = std::abs(fit.delta_hat) < 0.01;
    const double d = fit.delta_hat;
    const double nn = double(scan.dim);
    fit.eta_hat = d / (nn + 2.0 + d);
    fit.beta_hat = d / (2.0 + d);
    fit.beta_hat_from_eta =
        (2.0 * fit.eta_hat + nn * fit.eta_hat) / (2.0 + nn * fit.eta_hat);
  }

  if (!profiles.empty()) {
    for (std::size_t k = 0; k + 1 < profiles.size(); ++k)
      if (!(profiles[k + 1].radius < profiles[k].radius))
        throw ConfigError("profiles must be ordered by decreasing radius");
    const std::vector<double>& ref = profiles.back().trace;
    std::vector<double> dx, dy;
    for (const BlowupProfile& p : profiles) {
      double d = trace_distance(p.trace, ref);
      fit.trace_radii.push_back(p.radius);
      fit.trace_distances.push_back(d);
      if (d > 1e-15) {
        dx.push_back(std::log(p.radius));
        dy.push_back(std::log(d));
      }
    }
    if (dx.size() >= 2) fit.trace_slope = lsq_slope(dx, dy);
  }
  return fit;
}

void write_csv(const std::string& path, const BlowupProfile& profile) {
  const std::vector<double> angles = profile_angles(int(profile.trace.size()));
  std::vector<std::vector<double>> rows;
  rows.reserve(profile.trace.size());
  for (std::size_t j = 0; j < profile.trace.size(); ++j)
    rows.push_back({angles[j], profile.trace[j]});
  write_csv(path, "theta,value", rows);
}

std::string decay_to_json(const DecayFit& fit) {
  std::ostringstream out;
  out << "{";
  append_array(out, "radii", fit.radii);
  out << ",";
  append_array(out, "energy_gap", fit.energy_gap);
  out << ",\"delta_hat\":" << fmt_g17(fit.delta_hat)
      << ",\"eta_hat\":" << fmt_g17(fit.eta_hat)
      << ",\"beta_hat\":" << fmt_g17(fit.beta_hat)
      << ",\"beta_hat_from_eta\":" << fmt_g17(fit.beta_hat_from_eta)
      << ",\"no_decay\":" << (fit.no_decay ? "true" : "false") << ",";
  append_array(out, "trace_radii", fit.trace_radii);
  out << ",";
  append_array(out, "trace_distances", fit.trace_distances);
  out << ",\"trace_slope\":" << fmt_g17(fit.trace_slope) << "}";
  return out.str();
}

}  // namespace logobs
