#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entroflux/timestepper.hpp"

namespace entroflux {

/// Everything needed to reproduce one run: problem, named scheme variant,
/// grid/step overrides and the output location. Defaults (0 / empty) fall
/// back to the problem's own values.
struct RunManifest {
  std::string problem = "nonconvex_quartic";
  std::string variant = "Godunov";
  double dt = 0.0;        // > 0 forces a fixed step
  int cells = 0;          // > 0 overrides the grid resolution
  double end_time = 0.0;  // > 0 overrides the horizon
  double courant = 0.0;   // > 0 overrides the adaptive step fraction
  std::string out_dir;
  std::uint64_t seed = 0;
  PredictorInit limiter_init = PredictorInit::monotone;
};

/// The named scheme variants, in canonical order. Each maps to exactly one
/// SchemeConfig and every config produced comes from exactly one name.
const std::vector<std::string>& variant_names();
SchemeConfig variant_config(const std::string& name);  // invalid_argument

ProblemSpec resolve_problem(const RunManifest& m);  // applies the overrides

struct RunResult {
  ProblemSpec problem;
  SchemeConfig config;
  TimePolicy policy;
  SolutionTrace trace;
  double wall_seconds = 0.0;
};

/// Runs the manifest's simulation. Snapshot times are optional extras on top
/// of t = 0 and the end time. Does not touch the filesystem.
RunResult run_variant(const RunManifest& m,
                      std::vector<double> snapshot_times = {});

// ---- metrics ----------------------------------------------------------

struct DistanceReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Grid-weighted distances between two fields on the same grid.
DistanceReport field_distance(const std::vector<double>& a,
                              const std::vector<double>& b, double dx);
double l1_norm(const std::vector<double>& a, double dx);

/// Conservative projection: each coarse value is the mean of `ratio`
/// consecutive fine values. Requires fine.size() == ratio * coarse size.
std::vector<double> project_to_coarse(const std::vector<double>& fine,
                                      int ratio);

// ---- CSV artifacts ----------------------------------------------------

/// 17-significant-digit decimal: the shortest form that round-trips binary64.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // all data cells parsed as doubles
  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);  // runtime_error on bad shape

/// solution.csv: x plus one u column per snapshot. residuals.csv: x plus a
/// proper and a tadmor column per post-initial snapshot. limiters.csv:
/// interface positions plus one column per snapshot that recorded limiters.
/// metrics.csv: key,value rows covering the run and its diagnostics.
void write_solution_csv(const std::string& path, const ProblemSpec& problem,
                        const SolutionTrace& trace);
void write_residuals_csv(const std::string& path, const ProblemSpec& problem,
                         const SolutionTrace& trace);
void write_limiters_csv(const std::string& path, const ProblemSpec& problem,
                        const SolutionTrace& trace);
void write_metrics_csv(const std::string& path, const RunManifest& manifest,
                       const RunResult& result);

/// All four files into out_dir (created if missing).
void write_run_artifacts(const std::string& out_dir,
                         const RunManifest& manifest, const RunResult& result);

std::map<std::string, std::string> read_metrics_csv(const std::string& path);

// ---- comparison -------------------------------------------------------

struct ComparisonReport {
  double time = 0.0;  // latest snapshot time present in both runs
  DistanceReport distance;
  // Run-level diagnostics lifted from each side's metrics.csv when present.
  std::map<std::string, std::string> metrics_a, metrics_b;
};

/// Compares the solution.csv artifacts of two run directories on their
/// latest common snapshot. invalid_argument on grid or snapshot mismatch.
ComparisonReport compare_runs(const std::string& dir_a,
                              const std::string& dir_b);

void write_comparison_csv(const std::string& path,
                          const ComparisonReport& report);

}  // namespace entroflux
