// loopkahler command line: identity sweeps, Levi-Civita checks, per-leaf
// geodesic assembly, and the Lℙ¹ / ℙ(l²) experiments.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "loopkahler/io.hpp"
#include "loopkahler/pointwise.hpp"

namespace lk = loopkahler;

namespace {

lk::Measure parse_measure(const std::string& s) {
  if (s == "normalized") return lk::Measure::normalized;
  if (s == "raw") return lk::Measure::raw;
  throw CLI::ValidationError("--measure must be 'normalized' or 'raw'");
}

void print_results(const std::vector<lk::ExperimentResult>& results) {
  bool all_ok = true;
  for (const auto& r : results) {
    std::cout << lk::summary_line(r.report) << '\n';
    all_ok = all_ok && r.report.passed();
  }
  std::cout << (all_ok ? "all experiments passed" : "some experiments FAILED") << '\n';
}

int exit_code(const std::vector<lk::ExperimentResult>& results) {
  for (const auto& r : results) {
    if (!r.report.passed()) return 1;
  }
  return 0;
}

void maybe_write(const std::string& outdir, const std::vector<lk::ExperimentResult>& results) {
  if (!outdir.empty()) lk::write_run_outputs(outdir, results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop space geometry toolkit: Hermitian metrics, the dΩ identity, "
               "per-leaf geodesics, and projective-space distance experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lk::kVersion));

  std::string model_name = "fubini-study-p1";
  int M = 64;
  int P = 64;
  int N = 16;
  int n = 1;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string measure_str = "normalized";
  std::string outdir;

  // dform-identity
  auto* dform = app.add_subcommand("dform-identity", "six-term dΩ versus the integral of dω");
  std::string dform_out;
  dform->add_option("--model", model_name, "model name")->capture_default_str();
  dform->add_option("--M", M, "loop grid size")->capture_default_str();
  dform->add_option("--n", n, "model dimension (flat-cn / fubini-study-pn)")
      ->capture_default_str();
  dform->add_option("--trials", trials, "number of random instances")->capture_default_str();
  dform->add_option("--seed", seed, "RNG seed")->capture_default_str();
  dform->add_option("--measure", measure_str, "normalized | raw")->capture_default_str();
  dform->add_option("--out", dform_out, "write the JSON report to this file");

  // levi-civita
  auto* levi = app.add_subcommand("levi-civita", "metric compatibility and torsion residuals");
  levi->add_option("--M", M, "loop grid size")->capture_default_str();
  levi->add_option("--trials", trials, "number of random instances")->capture_default_str();
  levi->add_option("--seed", seed, "RNG seed")->capture_default_str();
  levi->add_option("--measure", measure_str, "normalized | raw")->capture_default_str();
  levi->add_option("--out", outdir, "output directory");

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "assemble a per-leaf geodesic between two loops");
  std::string f_file, g_file, path_out;
  std::string residual_csv;
  geo->add_option("--model", model_name, "model name (must match the loop files)")
      ->capture_default_str();
  geo->add_option("--f", f_file, "JSON file with the start loop")->required();
  geo->add_option("--g", g_file, "JSON file with the end loop")->required();
  geo->add_option("--P", P, "time steps")->capture_default_str();
  geo->add_option("--out", path_out, "write the path JSON here")->required();
  geo->add_option("--residual-csv", residual_csv, "write (node,time,residual) rows here");

  // lp1
  auto* lp1 = app.add_subcommand("lp1", "tan-family distance bounds on Lℙ¹");
  std::optional<int> lp1_M;
  lp1->add_option("--n", n, "winding number of the tan family")->capture_default_str();
  lp1->add_option("--M", lp1_M, "loop grid size (default max(64, 64n))");
  lp1->add_option("--P", P, "time steps")->capture_default_str();
  lp1->add_option("--measure", measure_str, "normalized | raw")->capture_default_str();
  lp1->add_option("--out", outdir, "output directory");

  // pl2
  auto* pl2 = app.add_subcommand("pl2", "ℙ(l²) distance and completeness experiments (on ℙᴺ)");
  pl2->add_option("--N", N, "truncation dimension")->capture_default_str();
  pl2->add_option("--seed", seed, "RNG seed")->capture_default_str();
  pl2->add_option("--out", outdir, "output directory");

  // all
  auto* all = app.add_subcommand("all", "run the whole experiment suite");
  all->add_option("--M", M, "loop grid size")->capture_default_str();
  all->add_option("--P", P, "time steps")->capture_default_str();
  all->add_option("--N", N, "projective truncation dimension")->capture_default_str();
  all->add_option("--trials", trials, "random instances per sweep")->capture_default_str();
  all->add_option("--seed", seed, "RNG seed")->capture_default_str();
  all->add_option("--measure", measure_str, "normalized | raw")->capture_default_str();
  all->add_option("--out", outdir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const lk::Measure measure = parse_measure(measure_str);

    if (dform->parsed()) {
      const lk::ModelPtr model = lk::make_model(model_name, n);
      const lk::ExperimentResult res =
          lk::dform_identity_experiment(model, M, trials, seed, measure);
      lk::json report = lk::report_to_json(res.report);
      lk::json per_trial = lk::json::array();
      double max_err = 0.0;
      for (const auto& row : res.tables[0].rows) {
        per_trial.push_back(lk::json::array({row[1], row[2], row[3]}));
        max_err = std::max(max_err, row[3]);
      }
      report["per_trial"] = std::move(per_trial);
      report["max_err"] = max_err;
      const std::string dump = report.dump(2) + "\n";
      if (!dform_out.empty()) {
        lk::write_text_file(dform_out, dump);
      }
      std::cout << dump;
      return res.report.passed() ? 0 : 1;
    }

    if (levi->parsed()) {
      const auto res = lk::levi_civita_experiment(M, trials, seed, measure);
      maybe_write(outdir, {res});
      print_results({res});
      return exit_code({res});
    }

    if (geo->parsed()) {
      const lk::LoadedLoop f = lk::loop_from_json(lk::json::parse(lk::read_text_file(f_file)));
      const lk::LoadedLoop g = lk::loop_from_json(lk::json::parse(lk::read_text_file(g_file)));
      if (f.model->name() != g.model->name() || f.model->dim() != g.model->dim()) {
        throw std::invalid_argument("loop files disagree on the model");
      }
      const lk::LoopPath path = lk::assemble_loop_geodesic(*f.model, f.loop, g.loop, P);
      lk::write_text_file(path_out, lk::path_to_json(*f.model, path).dump(2) + "\n");
      const double residual = lk::geodesic_residual(*f.model, path);
      if (!residual_csv.empty()) {
        lk::CsvTable table;
        table.name = "geodesic-residual";
        table.header = {"node", "time", "residual"};
        std::vector<lk::ChartPoint> leaf(path.loops.size());
        for (int j = 0; j < f.loop.size(); ++j) {
          for (size_t i = 0; i < path.loops.size(); ++i) leaf[i] = path.loops[i].points[j];
          for (int i = 1; i < path.steps(); ++i) {
            const lk::Vec r = lk::leaf_residual_vec(*f.model, leaf, path.times, i);
            const lk::TangentVec tv{leaf[i], r};
            table.rows.push_back(
                {double(j), path.times[i],
                 std::sqrt(std::max(0.0, lk::h_inner(*f.model, tv, tv).real()))});
          }
        }
        std::ostringstream os;
        lk::write_csv(os, table);
        lk::write_text_file(residual_csv, os.str());
      }
      std::cout << "geodesic residual " << residual << ", length "
                << lk::path_length(*f.model, path) << "\n";
      return 0;
    }

    if (lp1->parsed()) {
      const auto res = lk::lp1_experiment(n, lp1_M, P, measure);
      maybe_write(outdir, {res});
      print_results({res});
      std::cout << "lower bound " << res.report.scalars.at("lower_bound") << ", upper bound "
                << res.report.scalars.at("upper_bound") << ", paper claim >= "
                << res.report.scalars.at("paper_claim_n") << " (informational)\n";
      return exit_code({res});
    }

    if (pl2->parsed()) {
      const std::vector<lk::ExperimentResult> res = {lk::pl2_distance_experiment(N, seed),
                                                     lk::pl2_cauchy_experiment(N, seed)};
      maybe_write(outdir, res);
      print_results(res);
      return exit_code(res);
    }

    lk::RunConfig config;
    config.M = M;
    config.P = P;
    config.N = N;
    config.trials = trials;
    config.seed = seed;
    config.measure = measure;
    config.outdir = outdir;
    const auto results = lk::run_all(config);
    print_results(results);
    return exit_code(results);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
