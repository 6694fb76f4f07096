#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entroflux/experiment.hpp"
#include "entroflux/verify.hpp"
#include "json.hpp"

namespace {

using entroflux::RunManifest;

int do_run(const RunManifest& manifest_in) {
  RunManifest manifest = manifest_in;
  entroflux::RunResult result;
  try {
    result = entroflux::run_variant(manifest);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  if (manifest.out_dir.empty())
    manifest.out_dir = "runs/" + manifest.problem + "-" + manifest.variant;
  entroflux::write_run_artifacts(manifest.out_dir, manifest, result);

  const entroflux::SolutionTrace& tr = result.trace;
  std::printf("%s / %s: %zu steps to t=%s in %.3f s -> %s\n",
              manifest.problem.c_str(), manifest.variant.c_str(),
              tr.steps.size(),
              entroflux::format_double(tr.snapshots.back().time).c_str(),
              result.wall_seconds, manifest.out_dir.c_str());
  std::printf("  max residuals: proper %.3e, tadmor %.3e; ledger %.3e\n",
              tr.max_proper_residual, tr.max_tadmor_residual,
              tr.max_conservation_error);
  if (!tr.completed) {
    std::cerr << "aborted: " << tr.abort_reason << "\n";
    return 1;
  }
  return 0;
}

int do_compare(const std::string& dir_a, const std::string& dir_b,
               const std::string& out_dir) {
  entroflux::ComparisonReport report;
  try {
    report = entroflux::compare_runs(dir_a, dir_b);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::runtime_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / "comparison.csv").string();
  entroflux::write_comparison_csv(path, report);
  std::printf("L1 distance at t=%s: %s\n",
              entroflux::format_double(report.time).c_str(),
              entroflux::format_double(report.distance.l1).c_str());
  return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed, int trials) {
  using Runner =
      std::vector<entroflux::verify::CheckRecord> (*)(std::uint64_t, int);
  struct Entry {
    const char* name;
    Runner run;
    int default_trials;
  };
  const Entry entries[] = {
      {"fluxes", entroflux::verify::run_flux_suite, 300},
      {"lp", entroflux::verify::run_lp_suite, 500},
      {"limiters", entroflux::verify::run_limiter_suite, 200},
      {"conservation", entroflux::verify::run_conservation_suite, 200},
      {"entropy", entroflux::verify::run_entropy_suite, 100},
  };

  std::vector<Entry> selected;
  for (const Entry& e : entries)
    if (suite == "all" || suite == e.name) selected.push_back(e);
  if (selected.empty()) {
    std::cerr << "error: unknown suite '" << suite
              << "' (fluxes, lp, limiters, conservation, entropy, all)\n";
    return 2;
  }

  bool all_passed = true;
  for (const Entry& e : selected) {
    const auto records =
        e.run(seed, trials > 0 ? trials : e.default_trials);
    for (const auto& r : records) {
      nlohmann::json line;
      line["suite"] = e.name;
      line["name"] = r.name;
      line["passed"] = r.passed;
      line["detail"] = r.detail;
      std::cout << line.dump() << "\n";
      all_passed = all_passed && r.passed;
    }
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux-corrected scalar conservation-law solver"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::string limiter_init = "monotone";
  CLI::App* run = app.add_subcommand("run", "Run one scheme variant");
  run->add_option("--problem", manifest.problem,
                  "Builtin problem name")->capture_default_str();
  run->add_option("--variant", manifest.variant,
                  "Scheme variant name")->capture_default_str();
  run->add_option("--dt", manifest.dt, "Fixed time step (0 = problem default)");
  run->add_option("--cells", manifest.cells, "Grid cells (0 = problem default)");
  run->add_option("--end-time", manifest.end_time,
                  "Simulation horizon (0 = problem default)");
  run->add_option("--courant", manifest.courant,
                  "Adaptive step fraction (0 = problem default)");
  run->add_option("--out-dir", manifest.out_dir,
                  "Artifact directory (default runs/<problem>-<variant>)");
  run->add_option("--seed", manifest.seed, "Recorded in metrics.csv");
  run->add_option("--limiter-init", limiter_init,
                  "Iteration start: monotone or identity")
      ->check(CLI::IsMember({"monotone", "identity"}));
  run->set_config("--config", "",
                  "key=value file with the flags above; flags override");

  std::string dir_a, dir_b, compare_out = ".";
  CLI::App* compare =
      app.add_subcommand("compare", "Compare two run directories");
  compare->add_option("dir_a", dir_a, "First run directory")->required();
  compare->add_option("dir_b", dir_b, "Second run directory")->required();
  compare->add_option("--out-dir", compare_out, "Where comparison.csv goes");

  std::string suite;
  std::uint64_t seed = 7;
  int trials = 0;
  CLI::App* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", suite,
                     "fluxes, lp, limiters, conservation, entropy, or all")
      ->required();
  verify->add_option("--seed", seed, "Suite seed")->capture_default_str();
  verify->add_option("--trials", trials, "Override the per-suite trial count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    manifest.limiter_init = limiter_init == "identity"
                                ? entroflux::PredictorInit::identity
                                : entroflux::PredictorInit::monotone;
    return do_run(manifest);
  }
  if (compare->parsed()) return do_compare(dir_a, dir_b, compare_out);
  return do_verify(suite, seed, trials);
}
