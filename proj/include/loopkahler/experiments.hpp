#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "loopkahler/connection.hpp"
#include "loopkahler/sampling.hpp"

namespace loopkahler {

/// Serializable outcome of one experiment. Scalars and flags must reload
/// bitwise-equal; runtime is informational and excluded from comparisons.
struct ExperimentReport {
  std::string name;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::string measure = "normalized";
  std::map<std::string, double> scalars;
  std::map<std::string, bool> flags;
  double runtime_seconds = 0.0;
  std::string version = kVersion;

  bool passed() const;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  ExperimentReport report;
  std::vector<CsvTable> tables;
};

/// Chart-path length oracle for a projective pair: Gram–Schmidt reduction to
/// an effective ℙ¹, then adaptive quadrature of the Fubini–Study speed along
/// the radial chart segment (evaluates ∫₀ᴿ dt/(1+t²) without using the
/// closed form). Orthogonal pairs are refused (the segment leaves the chart).
double fs_chart_path_integral(const Vec& wp, const Vec& wq);

/// The tan-family endpoint loops: f ≡ [1:0], g(s) = [cos(ns) : sin(ns)],
/// sampled on a grid offset by π/(2Mn) so no node lands on a pole.
std::pair<Loop, Loop> lp1_family(int n, int M, Measure measure = Measure::normalized);

/// Lower bound for the loop-space distance of the tan family: quadrature of
/// dist(f(s), g(s)) = arctan|tan(ns)| over the offset grid. Refuses M < 64n.
double lp1_lower_bound(int n, int M, Measure measure = Measure::normalized);

/// Constructive upper bound: length of the per-leaf geodesic path.
double lp1_upper_bound(int n, int M, int P, Measure measure = Measure::normalized);

ExperimentResult dform_identity_experiment(const ModelPtr& model, int M, int trials,
                                           std::uint64_t seed,
                                           Measure measure = Measure::normalized);

ExperimentResult levi_civita_experiment(int M, int trials, std::uint64_t seed,
                                        Measure measure = Measure::normalized);

ExperimentResult geodesic_family_experiment(int n, int M, int P,
                                            Measure measure = Measure::normalized);

ExperimentResult lp1_experiment(int n, std::optional<int> M, int P,
                                Measure measure = Measure::normalized);

ExperimentResult pl2_distance_experiment(int N, std::uint64_t seed);

ExperimentResult pl2_cauchy_experiment(int N, std::uint64_t seed);

struct RunConfig {
  int M = 64;
  int P = 64;
  int N = 16;
  int trials = 10;
  std::uint64_t seed = 1;
  Measure measure = Measure::normalized;
  std::vector<int> lp1_ns = {1, 2, 4, 8, 16};
  std::optional<int> lp1_M;  // explicit override, checked against 64n
  std::string outdir;        // when nonempty, report.json and CSVs are written
};

/// Runs the whole suite and (optionally) serializes every report and table.
std::vector<ExperimentResult> run_all(const RunConfig& config);

}  // namespace loopkahler
