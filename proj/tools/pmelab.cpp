#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pmelab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"porous-medium-equation scenario runner"};
  std::string config_path, out_dir, check_names, golden_path;
  int refine = 0;
  double rel_tol = 1e-9;
  app.add_option("--config", config_path, "scenario config file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--check", check_names,
                 "comma-separated check names (overrides [checks] run)");
  app.add_option("--refine", refine, "dyadically refine the grid K times")
      ->check(CLI::Range(0, 6));
  app.add_option("--golden", golden_path, "golden report CSV to compare against");
  app.add_option("--rel-tol", rel_tol, "relative tolerance for --golden");
  CLI11_PARSE(app, argc, argv);

  try {
    pmelab::ScenarioConfig cfg = pmelab::load_scenario(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!check_names.empty()) {
      cfg.checks.clear();
      std::string cur;
      for (char c : check_names + ",") {
        if (c == ',') {
          if (!cur.empty() && cur != "none") cfg.checks.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
    }
    if (refine > 0) {
      const int s = 1 << refine;
      const pmelab::SpaceTimeGrid& g = cfg.grid;
      cfg.grid = g.dim == 1
                     ? pmelab::SpaceTimeGrid::make1d(g.lo[0], g.hi[0],
                                                     (g.nx[0] - 1) * s + 1,
                                                     (g.nt - 1) * s + 1, g.T)
                     : pmelab::SpaceTimeGrid::make2d(
                           g.lo[0], g.hi[0], g.lo[1], g.hi[1],
                           (g.nx[0] - 1) * s + 1, (g.nx[1] - 1) * s + 1,
                           (g.nt - 1) * s + 1, g.T);
    }

    const pmelab::RunResult result = pmelab::run_scenario(cfg);
    std::fputs(result.summary().c_str(), stdout);
    for (const std::string& a : result.artifacts)
      std::printf("wrote %s\n", a.c_str());
    bool ok = result.all_pass();

    if (!golden_path.empty()) {
      const std::string report = cfg.out_dir + "/" + cfg.name + "-report.csv";
      const pmelab::GoldenDiff diff =
          pmelab::compare_golden(report, golden_path, rel_tol);
      if (diff.pass) {
        std::printf("golden: pass (%s)\n", golden_path.c_str());
      } else {
        ok = false;
        std::printf("golden: FAIL (%s)\n", golden_path.c_str());
        for (const std::string& m : diff.mismatches)
          std::printf("  %s\n", m.c_str());
      }
    }
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
