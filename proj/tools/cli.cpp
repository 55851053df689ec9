#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "smd/config.hpp"
#include "smd/errors.hpp"
#include "smd/generalization.hpp"
#include "smd/harness.hpp"
#include "smd/model.hpp"
#include "smd/potentials.hpp"
#include "smd/theory.hpp"
#include "smd/trainer.hpp"

namespace smd {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct CellFlags {
  int model = 1;
  std::string mirror = "l2";
  long n = 0;
  long d = 0;
  double eps = kDefaultEpsilon;
  double t = kDefaultT;
  double sigma = kDefaultSigma;
  std::uint64_t seed = 0;
};

void add_cell_flags(CLI::App* cmd, CellFlags& f) {
  cmd->add_option("--model", f.model, "Mixture model (1 or 2)")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--mirror", f.mirror, "Potential: l1, l2 or qnorm:<q>");
  cmd->add_option("-n", f.n, "Number of training samples")->required();
  cmd->add_option("-d", f.d, "Dimension")->required();
  cmd->add_option("--eps", f.eps, "Model 1 epsilon");
  cmd->add_option("--t", f.t, "Model 2 offset t");
  cmd->add_option("--sigma", f.sigma, "Noise level of both classes");
  cmd->add_option("--seed", f.seed, "Seed for all randomness");
}

void print_prediction(std::ostream& out, const TheoryPrediction& p) {
  out << "error " << num(p.error) << '\n'
      << "norm_w_sq " << num(p.norm_w_sq) << '\n'
      << "mu1_dot " << num(p.mu1_dot) << '\n'
      << "mu2_dot " << num(p.mu2_dot) << '\n'
      << "alpha " << num(p.alpha) << '\n'
      << "beta " << num(p.beta) << '\n'
      << "gamma1 " << num(p.gamma1) << '\n'
      << "gamma2 " << num(p.gamma2) << '\n';
  if (!p.draw_errors.empty()) {
    out << "draw_errors";
    for (double e : p.draw_errors) out << ' ' << num(e);
    out << '\n';
  }
}

void print_summary(std::ostream& out, const ExperimentReport& report) {
  // (model, n, d) -> "theory l1", "empirical l1", ... averaged rows only.
  std::map<std::tuple<std::string, long, long>, std::map<std::string, double>> cells;
  std::vector<std::tuple<std::string, long, long>> order;
  for (const auto& r : report.rows) {
    if (r.source == Source::Empirical && r.seed != -1) continue;
    const auto key = std::make_tuple(r.model, r.n, r.d);
    if (!cells.count(key)) order.push_back(key);
    cells[key][source_name(r.source) + " " + r.mirror] = r.error;
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-7s %5s %6s %10s %10s %10s %10s\n", "model", "n", "d", "theory l1",
                "emp l1", "theory l2", "emp l2");
  out << line;
  for (const auto& key : order) {
    const auto& m = cells[key];
    auto cell = [&](const std::string& k) { return m.count(k) ? num(m.at(k)) : std::string("-"); };
    std::snprintf(line, sizeof line, "%-7s %5ld %6ld %10s %10s %10s %10s\n", std::get<0>(key).c_str(),
                  std::get<1>(key), std::get<2>(key), cell("theory l1").c_str(), cell("empirical l1").c_str(),
                  cell("theory l2").c_str(), cell("empirical l2").c_str());
    out << line;
  }
}

void write_report(const ExperimentReport& report, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    write_csv(report, out);
  } else {
    emit_csv(report, path);
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic mirror descent on Gaussian mixtures: training and CGMT predictions", "smdgen"};
  app.require_subcommand(1);

  // theory
  CellFlags th;
  int draws = 5;
  SaddleConfig saddle;
  auto* theory = app.add_subcommand("theory", "Predicted generalization error from the saddle problem");
  add_cell_flags(theory, th);
  theory->add_option("--draws", draws, "Model 2: number of g1 draws to average");
  theory->add_option("--grid-points", saddle.grid_points, "Grid points per saddle axis");
  theory->add_option("--refine", saddle.refine_passes, "Saddle refinement passes");

  // train
  CellFlags tr;
  std::optional<double> q;
  std::optional<double> eta;
  std::optional<double> tol;
  std::optional<int> max_epochs;
  auto* train = app.add_subcommand("train", "Train one classifier with SMD and report its error");
  add_cell_flags(train, tr);
  train->add_option("--q", q, "Exponent used for the l1 mirror");
  train->add_option("--eta", eta, "Learning rate (default scales with 1/max|x|^2)");
  train->add_option("--tol", tol, "Interpolation residual tolerance");
  train->add_option("--max-epochs", max_epochs, "Epoch budget");

  // experiment
  std::string config_path;
  std::string exp_out;
  std::optional<std::uint64_t> exp_seed;
  bool exp_quiet = false;
  auto* experiment = app.add_subcommand("experiment", "Run one configured experiment and write a CSV");
  experiment->add_option("--config", config_path, "INI/TOML-style config file")->required();
  experiment->add_option("--out", exp_out, "CSV path (overrides the config; '-' for stdout)");
  experiment->add_option("--seed", exp_seed, "Replace the config seeds by this single seed");
  experiment->add_flag("--quiet", exp_quiet, "No progress output");

  // tables
  TablesOptions topt;
  std::string tab_out;
  bool tab_quiet = false;
  auto* tables = app.add_subcommand("tables", "Reproduce the Model 1 and Model 2 comparison tables");
  tables->add_option("--out", tab_out, "CSV path ('-' or empty for stdout)");
  tables->add_flag("--skip-large", topt.skip_large, "Do not train cells with n*d >= 1e7");
  tables->add_flag("--theory-only", topt.theory_only, "Theory columns only");
  tables->add_option("--seed", topt.seed, "Base seed; training uses seed..seed+seeds-1");
  tables->add_option("--seeds", topt.seeds, "Training seeds per cell");
  tables->add_option("--draws", topt.draws, "Model 2: number of g1 draws to average");
  tables->add_option("--grid-points", topt.saddle.grid_points, "Grid points per saddle axis");
  tables->add_option("--refine", topt.saddle.refine_passes, "Saddle refinement passes");
  tables->add_flag("--timing", topt.timing, "Record runtimes in the CSV");
  tables->add_flag("--quiet", tab_quiet, "No progress output");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*theory) {
      const Potential p = Potential::parse(th.mirror);
      TheoryPrediction pred;
      if (p.is_euclidean()) {
        const MeanStats stats =
            th.model == 1 ? concentrated_model1_stats(th.d, th.eps) : concentrated_model2_stats(th.d, th.t);
        pred = sgd_predict(stats, th.n, th.d, th.sigma, th.sigma, saddle);
      } else if (p.is_l1_family()) {
        if (th.sigma != 1.0) throw UnsupportedError("the l1 prediction assumes sigma = 1");
        pred = th.model == 1 ? l1_model1_predict(th.n, th.d, th.eps, saddle)
                             : l1_model2_predict(th.n, th.d, th.t, draws, th.seed, saddle);
      } else {
        throw UnsupportedError("no theory prediction for mirror '" + th.mirror + "'");
      }
      print_prediction(out, pred);
      return 0;
    }

    if (*train) {
      Potential p = Potential::parse(tr.mirror);
      if (tr.mirror == "l1" && q) p = Potential::l1(*q);
      const MixtureModel model = tr.model == 1 ? make_model1(tr.d, tr.eps, tr.sigma, tr.seed)
                                               : make_model2(tr.d, tr.t, tr.sigma, tr.seed);
      const Dataset data = sample_dataset(model, tr.n, tr.seed);
      TrainSettings s = TrainSettings::defaults_for(p);
      if (eta) s.eta = *eta;
      if (tol) s.residual_tol = *tol;
      if (max_epochs) s.max_epochs = *max_epochs;
      s.seed = tr.seed;
      const TrainedWeights fit = smd_fit(data, p, s);
      const ErrorReport e = generalization_error(model, fit.w);
      out << "q " << num(p.q()) << '\n'
          << "eta " << num(fit.eta) << '\n'
          << "epochs " << fit.epochs_run << '\n'
          << "converged " << (fit.converged ? "true" : "false") << '\n'
          << "residual " << num(fit.final_residual) << '\n'
          << "error " << num(e.error) << '\n'
          << "norm_w_sq " << num(e.norm_w * e.norm_w) << '\n'
          << "mu1_dot " << num(e.mu1_dot) << '\n'
          << "mu2_dot " << num(e.mu2_dot) << '\n'
          << "potential " << num(fit.potential_value_at_w) << '\n';
      return fit.converged ? 0 : 3;
    }

    if (*experiment) {
      ExperimentConfig cfg = load_config(config_path);
      if (exp_seed) {
        cfg.seeds = {*exp_seed};
        cfg.theory_seed = *exp_seed;
      }
      const std::string path = exp_out.empty() ? cfg.out_path : exp_out;
      ProgressFn progress;
      if (!exp_quiet) progress = [&err](const std::string& s) { err << s << '\n'; };
      const ExperimentReport report = run_experiment(cfg, progress);
      write_report(report, path, out);
      return 0;
    }

    if (*tables) {
      ProgressFn progress;
      if (!tab_quiet) progress = [&err](const std::string& s) { err << s << '\n'; };
      const ExperimentReport report = run_tables(topt, progress);
      write_report(report, tab_out, out);
      if (!tab_out.empty() && tab_out != "-") print_summary(out, report);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "smdgen: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace smd
