#ifndef PMELAB_SCENARIO_HPP
#define PMELAB_SCENARIO_HPP

#include <string>

#include "pmelab/obstacle.hpp"

namespace pmelab {

/// Recipe for one data field; kept symbolic so fields can be resampled on
/// refined grids (File cannot be refined and says so when asked).
struct FieldSpec {
  enum class Kind { None, Constant, Bump, Barenblatt, File, FromG, Solve };
  Kind kind = Kind::None;
  double c = 0.0;                       // Constant
  double cx = 0.0, cy = 0.0;            // Bump center
  double radius = 1.0, height = 1.0;    // Bump shape
  double C = 1.0, t0 = 1.0;             // Barenblatt mass / time offset
  std::string path;                     // File
};

/// Parsed scenario: grid geometry, symbolic data fields, chain parameters,
/// the list of checks to run, and output settings.
struct ScenarioConfig {
  std::string name = "scenario";
  SpaceTimeGrid grid;
  FieldSpec psi{FieldSpec::Kind::Constant};     // defaults to 0
  FieldSpec g;                                  // required
  FieldSpec u0{FieldSpec::Kind::FromG};
  FieldSpec target;                             // supercaloric target (optional)
  FieldSpec exact;                              // Barenblatt oracle (optional)
  ApproximationChain chain;
  double m = 2.0;
  double h = 0.05;
  uint64_t basis_seed = 20240901;
  int basis_count = 20;
  int refine_levels = 2;
  double comparison_scale = 0.5;
  std::vector<std::string> checks;
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_dump = true;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

/// Materializes a symbolic field on a grid (m is needed for Barenblatt and
/// Solve; g/u0 are needed for Solve and FromG).
ScalarField sample_field(const FieldSpec& fs, const SpaceTimeGrid& grid, double m,
                         const ScalarField* g = nullptr,
                         const std::vector<double>* u0 = nullptr);

ObstacleProblemSpec build_problem(const ScenarioConfig& cfg,
                                  const SpaceTimeGrid& grid);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // paths written, in order
  std::vector<std::pair<std::string, double>> metrics;
  bool all_pass() const;
  std::string summary() const;
};

/// Executes the pipeline: strong solve over the chain, artifact dumps, then
/// every requested check. Known checks: feasibility, energy-uniformity,
/// supercaloric, equivalence, comparison, coincidence-pme, convergence.
RunResult run_scenario(const ScenarioConfig& cfg);

struct GoldenDiff {
  bool pass = true;
  std::vector<std::string> mismatches;
};

/// Cell-by-cell CSV comparison; numeric cells compared relatively, others
/// exactly. Shape mismatch throws.
GoldenDiff compare_golden(const std::string& report_path,
                          const std::string& golden_path, double rel_tol);

}  // namespace pmelab

#endif
