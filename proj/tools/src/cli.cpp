#include "logobs_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "logobs/blowup.hpp"
#include "logobs/errors.hpp"
#include "logobs/field.hpp"
#include "logobs/field_io.hpp"
#include "logobs/free_boundary.hpp"
#include "logobs/oracle1d.hpp"
#include "logobs/quadrature.hpp"
#include "logobs/scaling.hpp"
#include "logobs/solver.hpp"
#include "logobs/weiss.hpp"

namespace logobs::cli {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Key=value settings merged from the config file and --set overrides. Every
// lookup marks its key, so reject_unknown can name anything a command never
// asked about.
class Config {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("config file not found: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          " is not key=value: " + line);
      std::string key = trim(line.substr(0, eq));
      if (key.empty())
        throw ConfigError("config line " + std::to_string(lineno) +
                          " has an empty key");
      kv_[key] = trim(line.substr(eq + 1));
    }
  }

  void set_override(const std::string& item) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set wants key=value, got: " + item);
    kv_[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }

  bool has(const std::string& key) const {
    used_.insert(key);
    return kv_.count(key) > 0;
  }

  std::string str(const std::string& key, const std::string& def) const {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  std::string required(const std::string& key) const {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw ConfigError("config key '" + key + "' is required");
    return it->second;
  }

  double num(const std::string& key, double def) const {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    return parse_num(key, it->second);
  }

  long integer(const std::string& key, long def) const {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    const std::string& raw = it->second;
    char* end = nullptr;
    long v = std::strtol(raw.c_str(), &end, 10);
    if (raw.empty() || end != raw.c_str() + raw.size())
      throw ConfigError("config key '" + key +
                        "' wants an integer, got: " + raw);
    return v;
  }

  void reject_unknown(const std::string& command) const {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key))
        throw ConfigError("unknown config key '" + key + "' for " + command);
  }

 private:
  static double parse_num(const std::string& key, const std::string& raw) {
    char* end = nullptr;
    double v = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size())
      throw ConfigError("config key '" + key +
                        "' wants a number, got: " + raw);
    return v;
  }

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

struct Settings {
  fs::path out_dir = ".";
  long seed = 0;
  bool quiet = false;
};

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good())
    throw ConfigError("cannot open for writing: " + path.string());
  out << body;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Plot emission: a single line series on a log-x chart, written as a
// self-contained SVG. Fixed formatting keeps reruns byte-identical.

void svg_printf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += buf;
}

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ConfigError("plot wants at least two points");
  for (double x : xs)
    if (!(x > 0.0)) throw ConfigError("log-axis plot wants positive x values");

  const double W = 640, H = 420, L = 70, R = 20, T = 36, B = 48;
  double lx0 = std::log10(*std::min_element(xs.begin(), xs.end()));
  double lx1 = std::log10(*std::max_element(xs.begin(), xs.end()));
  if (lx1 - lx0 < 1e-12) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }
  double y0 = *std::min_element(ys.begin(), ys.end());
  double y1 = *std::max_element(ys.begin(), ys.end());
  double pad = 0.05 * (y1 - y0);
  if (pad <= 0.0) pad = 0.05 * std::abs(y0) + 1e-12;
  y0 -= pad;
  y1 += pad;

  auto px = [&](double x) {
    return L + (W - L - R) * (std::log10(x) - lx0) / (lx1 - lx0);
  };
  auto py = [&](double y) { return H - B - (H - T - B) * (y - y0) / (y1 - y0); };

  std::string svg;
  svg_printf(svg,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
             "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
             W, H, W, H);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg_printf(svg,
             "<text x=\"%.0f\" y=\"22\" text-anchor=\"middle\" "
             "font-family=\"sans-serif\" font-size=\"15\">%s</text>\n",
             W / 2, title.c_str());

  for (int k = 0; k < 5; ++k) {
    double lt = lx0 + k * (lx1 - lx0) / 4.0;
    double x = std::pow(10.0, lt);
    double gx = px(x);
    svg_printf(svg,
               "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"#dddddd\"/>\n",
               gx, T, gx, H - B);
    svg_printf(svg,
               "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"11\">%.3g</text>\n",
               gx, H - B + 16, x);
    double yt = y0 + pad + k * (y1 - y0 - 2 * pad) / 4.0;
    double gy = py(yt);
    svg_printf(svg,
               "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"#dddddd\"/>\n",
               L, gy, W - R, gy);
    svg_printf(svg,
               "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" "
               "font-family=\"sans-serif\" font-size=\"11\">%.3g</text>\n",
               L - 6, gy + 4, yt);
  }
  svg_printf(svg,
             "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" "
             "fill=\"none\" stroke=\"black\"/>\n",
             L, T, W - L - R, H - T - B);
  svg_printf(svg,
             "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\" "
             "font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
             L + (W - L - R) / 2, H - 10, xlabel.c_str());
  svg_printf(svg,
             "<text x=\"14\" y=\"%.0f\" font-family=\"sans-serif\" "
             "font-size=\"12\">%s</text>\n",
             T - 8, ylabel.c_str());

  svg += "<polyline fill=\"none\" stroke=\"#0a7a4a\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k)
    svg_printf(svg, "%s%.2f,%.2f", k ? " " : "", px(xs[k]), py(ys[k]));
  svg += "\"/>\n";
  for (std::size_t k = 0; k < xs.size(); ++k)
    svg_printf(svg,
               "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" "
               "fill=\"#0a7a4a\"/>\n",
               px(xs[k]), py(ys[k]));
  svg += "</svg>\n";
  return svg;
}

// ---------------------------------------------------------------------------
// Shared pieces.

std::vector<double> geometric_radii(double hi, double lo, long count) {
  if (!(hi > lo) || !(lo > 0.0) || count < 2)
    throw ConfigError("radius schedule wants r_max > r_min > 0 and count >= 2");
  std::vector<double> radii(count);
  for (long k = 0; k < count; ++k)
    radii[k] = hi * std::pow(lo / hi, double(k) / double(count - 1));
  return radii;
}

ForcingMode parse_mode(const std::string& raw) {
  if (raw == "log" || raw == "logarithmic") return ForcingMode::Logarithmic;
  if (raw == "constant") return ForcingMode::Constant;
  throw ConfigError("mode wants 'log' or 'constant', got: " + raw);
}

QuadratureConfig quadrature_from(const Config& cfg) {
  QuadratureConfig q;
  q.n_theta = int(cfg.integer("n_theta", q.n_theta));
  q.n_rad = int(cfg.integer("n_rad", q.n_rad));
  q.interp_order = int(cfg.integer("interp_order", q.interp_order));
  validate(q);
  return q;
}

WeissConfig weiss_from(const Config& cfg) {
  WeissConfig wc;
  wc.quadrature = quadrature_from(cfg);
  wc.gamma = cfg.num("gamma", wc.gamma);
  wc.fd_step = cfg.num("fd_step", wc.fd_step);
  validate(wc);
  return wc;
}

// Picks the scan center: explicit center_x/center_y if given, otherwise the
// extracted interface point nearest the hull center, sub-cell refined.
Vec2 pick_center(const Config& cfg, const ScalarField& u,
                 const FreeBoundarySet& fb) {
  bool have_x = cfg.has("center_x"), have_y = cfg.has("center_y");
  if (have_x != have_y)
    throw ConfigError("center_x and center_y must be given together");
  if (have_x) return {cfg.num("center_x", 0.0), cfg.num("center_y", 0.0)};
  if (fb.points.empty())
    throw NotAFreeBoundaryPoint("no interface points to center on");
  const Grid& g = u.grid;
  Vec2 mid = {0.5 * (g.min(0) + g.max(0)), 0.5 * (g.min(1) + g.max(1))};
  const Vec2* best = &fb.points.front();
  double best_d = 1e300;
  for (const Vec2& p : fb.points) {
    double d = std::hypot(p[0] - mid[0], p[1] - mid[1]);
    if (d < best_d) {
      best_d = d;
      best = &p;
    }
  }
  return refine_center(u, *best);
}

double distance_to_interface(const FreeBoundarySet& fb, const Vec2& c) {
  double best = 1e300;
  for (const Vec2& p : fb.points)
    best = std::min(best, std::hypot(p[0] - c[0], p[1] - c[1]));
  return best;
}

std::string verdict_line(double estimate, int dim, double tol) {
  Regularity verdict = energy_density_classify(estimate, dim, tol);
  std::string line =
      verdict == Regularity::Regular ? "REGULAR" : "NOT-REGULAR";
  line += " estimate=" + fmt_g17(estimate);
  line += " reference=" + fmt_g17(omega_half(dim));
  return line;
}

// ---------------------------------------------------------------------------
// Commands.

void cmd_solve(const Config& cfg, const Settings& s, std::ostream& out) {
  int dim = int(cfg.integer("dim", 2));
  if (dim != 1 && dim != 2) throw ConfigError("dim wants 1 or 2");
  ForcingMode mode = parse_mode(cfg.str("mode", "log"));

  double xmin = cfg.num("xmin", -0.32), xmax = cfg.num("xmax", 0.32);
  long nx = cfg.integer("nx", 513);
  if (!(xmax > xmin) || nx < 3)
    throw ConfigError("grid wants xmax > xmin and nx >= 3");
  double h = (xmax - xmin) / double(nx - 1);
  Grid grid;
  if (dim == 1) {
    grid = grid_1d(xmin, h, int(nx));
  } else {
    double ymin = cfg.num("ymin", xmin);
    long ny = cfg.integer("ny", nx);
    if (ny < 3) throw ConfigError("grid wants ny >= 3");
    if (cfg.has("ymax")) {
      double ymax = cfg.num("ymax", 0.0);
      if (std::abs(ymin + h * double(ny - 1) - ymax) > 1e-9)
        throw ConfigError(
            "ymax is inconsistent with ymin + (ny - 1) * (xmax - xmin) / "
            "(nx - 1); the grid spacing is square");
    }
    grid = grid_2d(xmin, ymin, h, int(nx), int(ny));
  }

  std::string boundary = cfg.str("boundary", "zero");
  std::function<double(const Vec2&)> phi;
  if (boundary == "zero") {
    phi = [](const Vec2&) { return 0.0; };
  } else if (boundary == "constant") {
    double v = cfg.num("boundary_value", 0.0);
    if (v < 0.0) throw ConfigError("boundary_value wants a value >= 0");
    phi = [v](const Vec2&) { return v; };
  } else if (boundary == "halfspace") {
    phi = [](const Vec2& p) {
      double c = std::max(p[0], 0.0);
      return 0.5 * c * c;
    };
  } else if (boundary == "oracle") {
    if (!(xmax > 0.0))
      throw ConfigError("oracle boundary data wants xmax > 0");
    OracleSolution1D sol = shoot(1e-3, xmax + 0.01, mode);
    phi = [sol](const Vec2& p) {
      return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
    };
  } else {
    throw ConfigError(
        "boundary wants zero, constant, halfspace or oracle, got: " +
        boundary);
  }

  ProblemSpec spec = make_problem(grid, mode, phi);
  double eps_first = cfg.num("eps_first", 1e-2);
  double eps_last = cfg.num("eps_last", 1e-8);
  double eps_factor = cfg.num("eps_factor", 10.0);
  if (!(eps_first >= eps_last) || !(eps_last > 0.0) || !(eps_factor > 1.0))
    throw ConfigError(
        "epsilon schedule wants eps_first >= eps_last > 0 and eps_factor > 1");
  std::vector<double> eps;
  for (double e = eps_first; e > eps_last * (1.0 + 1e-12); e /= eps_factor) {
    eps.push_back(e);
    if (eps.size() > 64) throw ConfigError("epsilon schedule too long");
  }
  eps.push_back(eps_last);
  spec.epsilons = eps;
  spec.relax_omega = cfg.num("omega", spec.relax_omega);
  spec.tol = cfg.num("tol", spec.tol);
  spec.max_sweeps = cfg.integer("max_sweeps", spec.max_sweeps);
  std::string field_out = cfg.str("field_out", "field.lob");
  cfg.reject_unknown("solve");

  SolveResult res = solve(spec);
  write_field((s.out_dir / field_out).string(), res.u);
  write_text_file(s.out_dir / "solve_report.json", report_to_json(res.report));
  write_text_file(s.out_dir / "solve_report.txt", report_to_text(res.report));
  if (!s.quiet)
    out << "solve: energy=" << fmt_g17(res.report.final_energy)
        << " sweeps=" << res.report.sweeps_used
        << " residual=" << fmt_g17(res.report.residual) << "\n";
}

void cmd_analyze(const Config& cfg, const Settings& s, std::ostream& out) {
  std::string field_path = cfg.required("field");
  double growth_r_max = cfg.num("growth_r_max", 0.1);
  double growth_r_min = cfg.num("growth_r_min", 1e-3);
  long growth_count = cfg.integer("growth_count", 10);
  double scan_r_max = cfg.num("scan_r_max", 0.25);
  double scan_r_min = cfg.num("scan_r_min", 0.05);
  long scan_count = cfg.integer("scan_count", 8);
  WeissConfig wc = weiss_from(cfg);
  // Mark the center keys now so the empty-interface early return below can
  // still reject genuinely unknown keys.
  cfg.has("center_x");
  cfg.has("center_y");

  ScalarField u = read_field(field_path);
  FreeBoundarySet fb = extract(u);
  write_csv((s.out_dir / "free_boundary.csv").string(), fb);
  if (fb.points.empty()) {
    cfg.reject_unknown("analyze");
    if (!s.quiet)
      out << "analyze: no free boundary found; skipping growth and energy "
             "scan\n";
    return;
  }
  Vec2 center = pick_center(cfg, u, fb);
  cfg.reject_unknown("analyze");

  GrowthStats gs =
      growth_stats(u, center, geometric_radii(growth_r_max, growth_r_min,
                                              growth_count));
  std::vector<std::vector<double>> growth_rows;
  for (std::size_t k = 0; k < gs.radii.size(); ++k)
    growth_rows.push_back({gs.radii[k], gs.g[k]});
  write_csv((s.out_dir / "growth.csv").string(), "r,g", growth_rows);
  write_text_file(s.out_dir / "growth_plot.svg",
                  svg_line_plot("growth ratio along the interface", "r", "g",
                                gs.radii, gs.g));

  WeissScan scan = wbar_scan(
      u, center, geometric_radii(scan_r_max, scan_r_min, scan_count), wc);
  write_csv((s.out_dir / "weiss_scan.csv").string(), scan);
  write_text_file(s.out_dir / "weiss_scan.json", scan_to_json(scan));
  std::vector<double> rs, wbars;
  for (const WeissRecord& rec : scan.records) {
    rs.push_back(rec.r);
    wbars.push_back(rec.Wbar);
  }
  write_text_file(s.out_dir / "wbar_plot.svg",
                  svg_line_plot("corrected boundary-adjusted energy", "r",
                                "Wbar", rs, wbars));
  if (!s.quiet)
    out << "analyze: center=(" << fmt_g17(center[0]) << ","
        << fmt_g17(center[1]) << ") points=" << fb.points.size()
        << " estimate=" << fmt_g17(scan.Wbar_limit_estimate)
        << " cross_check=" << fmt_g17(scan.Wbar_limit_cross_check)
        << " flagged=" << (scan.flagged ? 1 : 0) << "\n";
}

void cmd_blowup(const Config& cfg, const Settings& s, std::ostream& out) {
  std::string field_path = cfg.required("field");
  bool profile_mode = cfg.integer("profile", 0) != 0;

  if (profile_mode) {
    QuadratureConfig q = quadrature_from(cfg);
    ScalarField u = read_field(field_path);
    double tol = cfg.num("classify_tol", 0.1 * omega_half(u.grid.dim));
    cfg.reject_unknown("blowup");
    double density = M0_energy(u, q);
    std::string line = verdict_line(density, u.grid.dim, tol);
    write_text_file(s.out_dir / "verdict.txt", line + "\n");
    if (!s.quiet) out << line << "\n";
    return;
  }

  double scan_r_max = cfg.num("scan_r_max", 0.2);
  double scan_r_min = cfg.num("scan_r_min", 0.025);
  long scan_count = cfg.integer("scan_count", 6);
  double profile_r_max = cfg.num("profile_r_max", 0.2);
  long profile_count = cfg.integer("profile_count", 4);
  if (profile_count < 2 || !(profile_r_max > 0.0))
    throw ConfigError("profile schedule wants profile_count >= 2 and "
                      "profile_r_max > 0");
  WeissConfig wc = weiss_from(cfg);

  ScalarField u = read_field(field_path);
  double tol = cfg.num("classify_tol", 0.1 * omega_half(u.grid.dim));
  FreeBoundarySet fb = extract(u);
  Vec2 center = pick_center(cfg, u, fb);
  cfg.reject_unknown("blowup");
  if (fb.points.empty() ||
      distance_to_interface(fb, center) > fb.spacing + 1e-12)
    throw NotAFreeBoundaryPoint(
        "center is not within one grid spacing of the extracted interface");

  WeissScan scan = wbar_scan(
      u, center, geometric_radii(scan_r_max, scan_r_min, scan_count), wc);
  write_csv((s.out_dir / "weiss_scan.csv").string(), scan);
  write_text_file(s.out_dir / "weiss_scan.json", scan_to_json(scan));

  std::vector<BlowupProfile> profiles;
  for (long k = 0; k < profile_count; ++k) {
    double r = profile_r_max / std::pow(2.0, double(k));
    profiles.push_back(make_profile(u, center, r, wc));
    std::ostringstream name;
    name << "profile_" << k << ".csv";
    write_csv((s.out_dir / name.str()).string(), profiles.back());
  }
  DecayFit fit = decay_fit(scan, profiles);
  write_text_file(s.out_dir / "decay_fit.json", decay_to_json(fit));

  std::string line = verdict_line(scan.Wbar_limit_estimate, u.grid.dim, tol);
  write_text_file(s.out_dir / "verdict.txt", line + "\n");
  if (!s.quiet) out << line << "\n";
}

void cmd_oracle(const Config& cfg, const Settings& s, std::ostream& out) {
  ForcingMode mode = parse_mode(cfg.str("mode", "log"));
  double x_seed = cfg.num("x_seed", 1e-3);
  double x_max = cfg.num("x_max", 0.5);
  cfg.reject_unknown("oracle");

  OracleSolution1D sol = shoot(x_seed, x_max, mode);
  std::vector<std::vector<double>> rows;
  rows.reserve(sol.samples.size());
  for (const OracleSample& smp : sol.samples)
    rows.push_back({smp.x, smp.u, smp.up});
  write_csv((s.out_dir / "oracle.csv").string(), "x,u,up", rows);

  std::ostringstream json;
  json << "{\"mode\":\""
       << (mode == ForcingMode::Logarithmic ? "log" : "constant")
       << "\",\"x_seed\":" << fmt_g17(sol.x_seed)
       << ",\"x_max\":" << fmt_g17(sol.x_max)
       << ",\"sample_count\":" << sol.samples.size()
       << ",\"residual_max\":" << fmt_g17(sol.residual_max) << "}";
  write_text_file(s.out_dir / "oracle_report.json", json.str());
  if (!s.quiet)
    out << "oracle: samples=" << sol.samples.size()
        << " residual_max=" << fmt_g17(sol.residual_max) << "\n";
}

void cmd_report(const Config& cfg, const Settings& s, std::ostream& out) {
  cfg.reject_unknown("report");
  const char* pieces[] = {"solve_report.txt", "oracle_report.json",
                          "weiss_scan.json",  "decay_fit.json",
                          "verdict.txt"};
  std::string body = "run report\n==========\n";
  int found = 0;
  for (const char* name : pieces) {
    fs::path p = s.out_dir / name;
    if (!fs::exists(p)) continue;
    ++found;
    std::string content = read_text_file(p);
    body += "\n== " + std::string(name) + " ==\n" + content;
    if (body.empty() || body.back() != '\n') body += "\n";
  }
  if (found == 0)
    throw MissingInput("no command outputs found in " + s.out_dir.string());
  write_text_file(s.out_dir / "report.txt", body);
  if (!s.quiet)
    out << "report: " << found << " section(s) written to report.txt\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"numerical laboratory for a singularly forced obstacle problem"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  long seed_flag = -1;
  bool seed_given = false, quiet = false;
  std::vector<std::string> overrides;
  const char* names[] = {"solve", "analyze", "blowup", "oracle", "report"};
  const char* briefs[] = {
      "minimize the constrained energy and write the field",
      "extract the interface, growth ratios and energy scan",
      "rescaled profiles, half-space fits and the decay rate",
      "1D shooting reference profile",
      "bundle prior outputs into report.txt"};
  for (int k = 0; k < 5; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], briefs[k]);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--out", out_flag, "output directory");
    sub->add_option("--seed", seed_flag, "seed recorded for reproducibility");
    sub->add_flag("--quiet", quiet, "suppress notice lines");
    sub->add_option("--set", overrides, "override a config key (key=value)");
  }

  std::vector<const char*> argv;
  argv.push_back("logobs");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    out << "error: " << e.what() << "\n";
    return 1;
  }
  seed_given = app.get_subcommands().front()->count("--seed") > 0;

  try {
    Config cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const std::string& item : overrides) cfg.set_override(item);

    Settings s;
    s.out_dir = cfg.str("output_dir", ".");
    if (!out_flag.empty()) s.out_dir = out_flag;
    s.seed = cfg.integer("seed", 0);
    if (seed_given) s.seed = seed_flag;
    s.quiet = quiet;
    fs::create_directories(s.out_dir);

    CLI::App* sub = app.get_subcommands().front();
    if (sub->get_name() == "solve") cmd_solve(cfg, s, out);
    else if (sub->get_name() == "analyze") cmd_analyze(cfg, s, out);
    else if (sub->get_name() == "blowup") cmd_blowup(cfg, s, out);
    else if (sub->get_name() == "oracle") cmd_oracle(cfg, s, out);
    else cmd_report(cfg, s, out);
    return 0;
  } catch (const ConfigError& e) {
    out << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NonConvergence& e) {
    out << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const DivergingEnergy& e) {
    out << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const SeedTooLarge& e) {
    out << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const BlowThrough& e) {
    out << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const NonPositiveEnergyGap& e) {
    out << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace logobs::cli
