#include "entroflux/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace entroflux {

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names = {
      "Godunov",     "Rusanov",    "RusanovLP2", "RusanovLET2",
      "RusanovLE2",  "RusanovAE2", "RusanovLE4", "RusanovAE4",
  };
  return names;
}

SchemeConfig variant_config(const std::string& name) {
  SchemeConfig cfg;
  if (name == "Godunov") {
    cfg.low_flux = LowFluxKind::godunov;
    return cfg;
  }
  if (name == "Rusanov") return cfg;

  cfg.high_flux = HighFluxKind::central2;
  if (name == "RusanovLP2") {
    cfg.limiter = LimiterStrategy::exact_lp;
    cfg.iteration.entropy_variant = EntropyVariant::none;
  } else if (name == "RusanovLET2") {
    cfg.limiter = LimiterStrategy::exact_lp;
    cfg.iteration.entropy_variant = EntropyVariant::tadmor;
  } else if (name == "RusanovLE2") {
    cfg.limiter = LimiterStrategy::exact_lp;
  } else if (name == "RusanovAE2") {
    cfg.limiter = LimiterStrategy::approximate;
  } else if (name == "RusanovLE4") {
    cfg.limiter = LimiterStrategy::exact_lp;
    cfg.high_flux = HighFluxKind::central4;
  } else if (name == "RusanovAE4") {
    cfg.limiter = LimiterStrategy::approximate;
    cfg.high_flux = HighFluxKind::central4;
  } else {
    throw std::invalid_argument("unknown scheme variant: " + name);
  }
  return cfg;
}

ProblemSpec resolve_problem(const RunManifest& m) {
  ProblemSpec pb = builtin_problem(m.problem);
  if (m.cells > 0) pb.grid.n_cells = m.cells;
  if (m.end_time > 0.0) pb.end_time = m.end_time;
  if (m.courant > 0.0) pb.default_courant = m.courant;
  return pb;
}

RunResult run_variant(const RunManifest& m,
                      std::vector<double> snapshot_times) {
  RunResult out;
  out.problem = resolve_problem(m);
  out.config = variant_config(m.variant);
  out.config.iteration.predictor_init = m.limiter_init;

  out.policy.dt = m.dt;
  const double fixed = m.dt > 0.0 ? m.dt : out.problem.fixed_dt;
  out.policy.adaptive = fixed <= 0.0;
  out.policy.courant = m.courant;

  const auto start = std::chrono::steady_clock::now();
  out.trace =
      run_simulation(out.problem, out.config, out.policy, snapshot_times);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

DistanceReport field_distance(const std::vector<double>& a,
                              const std::vector<double>& b, double dx) {
  if (a.size() != b.size())
    throw std::invalid_argument("field sizes differ in distance computation");
  DistanceReport d;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::fabs(a[i] - b[i]);
    d.l1 += diff * dx;
    sq += diff * diff * dx;
    d.linf = std::max(d.linf, diff);
  }
  d.l2 = std::sqrt(sq);
  return d;
}

double l1_norm(const std::vector<double>& a, double dx) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v) * dx;
  return s;
}

std::vector<double> project_to_coarse(const std::vector<double>& fine,
                                      int ratio) {
  if (ratio <= 0 || fine.size() % static_cast<std::size_t>(ratio) != 0)
    throw std::invalid_argument("projection ratio does not divide the grid");
  std::vector<double> coarse(fine.size() / ratio);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < ratio; ++j) s += fine[i * ratio + j];
    coarse[i] = s / ratio;
  }
  return coarse;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return static_cast<int>(j);
  return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::string time_label(double t) { return "t=" + format_double(t); }

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
  table.header = split_csv_line(line);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != table.header.size())
      throw std::runtime_error("ragged csv row in " + path);
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      char* end = nullptr;
      row[j] = std::strtod(cells[j].c_str(), &end);
      if (end == cells[j].c_str())
        throw std::runtime_error("non-numeric cell in " + path);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_solution_csv(const std::string& path, const ProblemSpec& problem,
                        const SolutionTrace& trace) {
  std::ofstream f = open_out(path);
  f << "x";
  for (const Snapshot& s : trace.snapshots) f << ",u[" << time_label(s.time) << "]";
  f << "\n";
  for (int i = 0; i < problem.grid.n_cells; ++i) {
    f << format_double(problem.grid.cell_center(i));
    for (const Snapshot& s : trace.snapshots)
      f << "," << format_double(s.field.values[i]);
    f << "\n";
  }
}

void write_residuals_csv(const std::string& path, const ProblemSpec& problem,
                         const SolutionTrace& trace) {
  std::ofstream f = open_out(path);
  std::vector<const Snapshot*> with_data;
  for (const Snapshot& s : trace.snapshots)
    if (!s.proper_residuals.empty()) with_data.push_back(&s);
  f << "x";
  for (const Snapshot* s : with_data)
    f << ",proper[" << time_label(s->time) << "],tadmor["
      << time_label(s->time) << "]";
  f << "\n";
  for (int i = 0; i < problem.grid.n_cells; ++i) {
    f << format_double(problem.grid.cell_center(i));
    for (const Snapshot* s : with_data)
      f << "," << format_double(s->proper_residuals[i]) << ","
        << format_double(s->tadmor_residuals[i]);
    f << "\n";
  }
}

void write_limiters_csv(const std::string& path, const ProblemSpec& problem,
                        const SolutionTrace& trace) {
  std::ofstream f = open_out(path);
  std::vector<const Snapshot*> with_data;
  for (const Snapshot& s : trace.snapshots)
    if (!s.alpha.empty()) with_data.push_back(&s);
  f << "x_interface";
  for (const Snapshot* s : with_data)
    f << ",alpha[" << time_label(s->time) << "]";
  f << "\n";
  for (int k = 0; k <= problem.grid.n_cells; ++k) {
    f << format_double(problem.grid.interface_position(k));
    for (const Snapshot* s : with_data) f << "," << format_double(s->alpha[k]);
    f << "\n";
  }
}

void write_metrics_csv(const std::string& path, const RunManifest& manifest,
                       const RunResult& result) {
  const SolutionTrace& tr = result.trace;
  std::ofstream f = open_out(path);
  f << "key,value\n";
  auto put = [&f](const std::string& k, const std::string& v) {
    f << k << "," << v << "\n";
  };
  auto putd = [&](const std::string& k, double v) { put(k, format_double(v)); };

  put("problem", result.problem.name);
  put("variant", manifest.variant);
  put("cells", std::to_string(result.problem.grid.n_cells));
  putd("end_time", result.problem.end_time);
  put("dt_policy", result.policy.adaptive ? "adaptive" : "fixed");
  if (result.policy.adaptive) {
    putd("courant", result.policy.courant > 0.0
                        ? result.policy.courant
                        : result.problem.default_courant);
  } else {
    putd("dt", result.policy.dt > 0.0 ? result.policy.dt
                                      : result.problem.fixed_dt);
  }
  put("limiter_init", manifest.limiter_init == PredictorInit::identity
                          ? "identity"
                          : "monotone");
  put("seed", std::to_string(manifest.seed));
  put("steps", std::to_string(tr.steps.size()));
  put("completed", tr.completed ? "1" : "0");
  put("abort_reason", tr.abort_reason);
  putd("initial_mass", tr.initial_mass);
  putd("final_mass", tr.final_mass);
  putd("boundary_flux_integral", tr.boundary_flux_integral);
  const double scale =
      std::max(1.0, l1_norm(tr.snapshots.back().field.values,
                            result.problem.grid.dx()));
  putd("mass_drift", std::fabs(tr.initial_mass - tr.final_mass -
                               tr.boundary_flux_integral) /
                         scale);
  putd("max_conservation_error", tr.max_conservation_error);
  putd("max_proper_residual", tr.max_proper_residual);
  putd("max_tadmor_residual", tr.max_tadmor_residual);
  putd("min_bound_slack", tr.min_bound_slack);

  double alpha_min = 1.0, alpha_mean_sum = 0.0;
  double dt_min = 0.0, dt_max = 0.0;
  long fallback_steps = 0;
  int max_outer = 0;
  if (!tr.steps.empty()) {
    dt_min = dt_max = tr.steps.front().dt;
    for (const StepDiagnostics& d : tr.steps) {
      alpha_min = std::min(alpha_min, d.alpha_min);
      alpha_mean_sum += d.alpha_mean;
      dt_min = std::min(dt_min, d.dt);
      dt_max = std::max(dt_max, d.dt);
      fallback_steps += d.limiter_fallback ? 1 : 0;
      max_outer = std::max(max_outer, d.outer_iterations);
    }
  }
  putd("alpha_min", alpha_min);
  putd("alpha_mean",
       tr.steps.empty() ? 1.0 : alpha_mean_sum / double(tr.steps.size()));
  putd("dt_min", dt_min);
  putd("dt_max", dt_max);
  put("lp_fallback_steps", std::to_string(fallback_steps));
  put("max_outer_iterations", std::to_string(max_outer));
  putd("wall_seconds", result.wall_seconds);
}

void write_run_artifacts(const std::string& out_dir,
                         const RunManifest& manifest, const RunResult& result) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_solution_csv((dir / "solution.csv").string(), result.problem,
                     result.trace);
  write_residuals_csv((dir / "residuals.csv").string(), result.problem,
                      result.trace);
  write_limiters_csv((dir / "limiters.csv").string(), result.problem,
                     result.trace);
  write_metrics_csv((dir / "metrics.csv").string(), manifest, result);
}

std::map<std::string, std::string> read_metrics_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return out;
}

ComparisonReport compare_runs(const std::string& dir_a,
                              const std::string& dir_b) {
  const std::filesystem::path a(dir_a), b(dir_b);
  const CsvTable ta = read_csv((a / "solution.csv").string());
  const CsvTable tb = read_csv((b / "solution.csv").string());

  if (ta.rows.size() != tb.rows.size())
    throw std::invalid_argument("grids differ: " + std::to_string(ta.rows.size()) +
                                " vs " + std::to_string(tb.rows.size()) +
                                " cells");
  const int xa = ta.column("x"), xb = tb.column("x");
  if (xa < 0 || xb < 0)
    throw std::invalid_argument("solution.csv lacks an x column");
  for (std::size_t i = 0; i < ta.rows.size(); ++i)
    if (ta.rows[i][xa] != tb.rows[i][xb])
      throw std::invalid_argument("grids differ at row " + std::to_string(i));

  // Latest column label present in both files.
  int ca = -1, cb = -1;
  for (int j = static_cast<int>(ta.header.size()) - 1; j > 0 && ca < 0; --j) {
    const int match = tb.column(ta.header[j]);
    if (match > 0) {
      ca = j;
      cb = match;
    }
  }
  if (ca < 0) throw std::invalid_argument("no common snapshot time");

  ComparisonReport rep;
  {
    // Label format is u[t=<value>].
    const std::string& label = ta.header[ca];
    const auto eq = label.find("t=");
    if (eq != std::string::npos)
      rep.time = std::strtod(label.c_str() + eq + 2, nullptr);
  }
  std::vector<double> ua(ta.rows.size()), ub(tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    ua[i] = ta.rows[i][ca];
    ub[i] = tb.rows[i][cb];
  }
  const double dx = ta.rows.size() > 1
                        ? ta.rows[1][xa] - ta.rows[0][xa]
                        : 1.0;
  rep.distance = field_distance(ua, ub, dx);

  for (auto [dir, target] : {std::pair{&a, &rep.metrics_a},
                             std::pair{&b, &rep.metrics_b}}) {
    const std::string mpath = (*dir / "metrics.csv").string();
    if (std::filesystem::exists(mpath)) *target = read_metrics_csv(mpath);
  }
  return rep;
}

void write_comparison_csv(const std::string& path,
                          const ComparisonReport& report) {
  std::ofstream f = open_out(path);
  f << "key,value\n";
  f << "time," << format_double(report.time) << "\n";
  f << "l1," << format_double(report.distance.l1) << "\n";
  f << "l2," << format_double(report.distance.l2) << "\n";
  f << "linf," << format_double(report.distance.linf) << "\n";
  auto lift = [&f](const std::map<std::string, std::string>& m,
                   const char* suffix) {
    for (const char* key : {"variant", "max_proper_residual",
                            "max_tadmor_residual", "alpha_mean", "alpha_min"}) {
      const auto it = m.find(key);
      if (it != m.end()) f << key << suffix << "," << it->second << "\n";
    }
  };
  lift(report.metrics_a, "_a");
  lift(report.metrics_b, "_b");
}

}  // namespace entroflux
