#include "smd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "smd/errors.hpp"
#include "smd/generalization.hpp"
#include "smd/model.hpp"
#include "smd/potentials.hpp"
#include "smd/theory.hpp"
#include "smd/trainer.hpp"

namespace smd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start, bool timing) {
  if (!timing) return 0.0;
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Potential resolve_mirror(const std::string& label, const ExperimentConfig& cfg) {
  if (label == "l1" && cfg.q) return Potential::l1(*cfg.q);
  return Potential::parse(label);
}

ReportRow base_row(const ExperimentConfig& cfg, const std::string& mirror, Source source) {
  ReportRow r;
  r.model = model_name(cfg.model);
  r.n = cfg.n;
  r.d = cfg.d;
  r.mirror = mirror;
  r.source = source;
  return r;
}

TheoryPrediction predict(const ExperimentConfig& cfg, const Potential& p) {
  if (p.is_euclidean()) {
    const MeanStats stats = cfg.model == ModelTag::Model1 ? concentrated_model1_stats(cfg.d, cfg.epsilon)
                                                          : concentrated_model2_stats(cfg.d, cfg.t);
    return sgd_predict(stats, cfg.n, cfg.d, cfg.sigma, cfg.sigma, cfg.saddle);
  }
  if (!p.is_l1_family()) {
    throw UnsupportedError("no theory prediction for mirror '" + p.label() +
                           "' (only l2 and l1-type potentials are covered)");
  }
  if (cfg.sigma != 1.0) {
    throw UnsupportedError("the l1 prediction for mirror '" + p.label() + "' assumes sigma = 1");
  }
  if (cfg.model == ModelTag::Model1) return l1_model1_predict(cfg.n, cfg.d, cfg.epsilon, cfg.saddle);
  return l1_model2_predict(cfg.n, cfg.d, cfg.t, cfg.draws, cfg.theory_seed, cfg.saddle);
}

TrainSettings settings_for(const ExperimentConfig& cfg, const Potential& p, std::uint64_t seed) {
  TrainSettings s = TrainSettings::defaults_for(p);
  if (cfg.eta) s.eta = *cfg.eta;
  if (cfg.tol) s.residual_tol = *cfg.tol;
  if (cfg.max_epochs) s.max_epochs = *cfg.max_epochs;
  s.seed = seed;
  return s;
}

std::string fmt3(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

std::string source_name(Source s) { return s == Source::Theory ? "theory" : "empirical"; }

void ExperimentReport::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.model, a.n, a.d, a.mirror, a.source, a.seed) <
           std::tie(b.model, b.n, b.d, b.mirror, b.source, b.seed);
  });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  auto note = [&](const std::string& s) {
    if (progress) progress(s);
  };
  const std::string cell = model_name(cfg.model) + " n=" + std::to_string(cfg.n) + " d=" + std::to_string(cfg.d);

  std::vector<Potential> potentials;
  for (const auto& m : cfg.mirrors) potentials.push_back(resolve_mirror(m, cfg));

  ExperimentReport report;

  if (cfg.theory) {
    for (std::size_t k = 0; k < potentials.size(); ++k) {
      const auto start = Clock::now();
      const TheoryPrediction pred = predict(cfg, potentials[k]);
      ReportRow r = base_row(cfg, cfg.mirrors[k], Source::Theory);
      r.error = pred.error;
      r.norm_w_sq = pred.norm_w_sq;
      r.mu1_dot = pred.mu1_dot;
      r.mu2_dot = pred.mu2_dot;
      r.alpha = pred.alpha;
      r.beta = pred.beta;
      r.gamma1 = pred.gamma1;
      r.seed = static_cast<std::int64_t>(cfg.theory_seed);
      r.runtime_seconds = seconds_since(start, cfg.timing);
      note(cell + " " + cfg.mirrors[k] + " theory: error=" + fmt3(r.error));
      report.rows.push_back(r);
    }
  }

  if (cfg.empirical) {
    std::vector<std::vector<ReportRow>> per_mirror(potentials.size());
    for (const std::uint64_t seed : cfg.seeds) {
      const MixtureModel model = cfg.model == ModelTag::Model1
                                     ? make_model1(cfg.d, cfg.epsilon, cfg.sigma, seed)
                                     : make_model2(cfg.d, cfg.t, cfg.sigma, seed);
      const Dataset data = sample_dataset(model, cfg.n, seed);
      for (std::size_t k = 0; k < potentials.size(); ++k) {
        const auto start = Clock::now();
        ReportRow r = base_row(cfg, cfg.mirrors[k], Source::Empirical);
        r.alpha = r.beta = r.gamma1 = kNaN;
        r.seed = static_cast<std::int64_t>(seed);
        std::string detail;
        try {
          const TrainedWeights fit = smd_fit(data, potentials[k], settings_for(cfg, potentials[k], seed));
          const ErrorReport e = generalization_error(model, fit.w);
          r.error = e.error;
          r.norm_w_sq = e.norm_w * e.norm_w;
          r.mu1_dot = e.mu1_dot;
          r.mu2_dot = e.mu2_dot;
          r.converged = fit.converged;
          detail = " epochs=" + std::to_string(fit.epochs_run);
        } catch (const DivergenceError& e) {
          r.error = r.norm_w_sq = r.mu1_dot = r.mu2_dot = kNaN;
          r.converged = false;
          detail = std::string(" diverged: ") + e.what();
        } catch (const UndefinedClassifierError&) {
          r.error = r.norm_w_sq = r.mu1_dot = r.mu2_dot = kNaN;
          r.converged = false;
          detail = " trained weights are zero";
        }
        r.runtime_seconds = seconds_since(start, cfg.timing);
        note(cell + " " + cfg.mirrors[k] + " seed=" + std::to_string(seed) + ": error=" + fmt3(r.error) +
             detail + (r.converged ? "" : " (not converged)"));
        per_mirror[k].push_back(r);
        report.rows.push_back(r);
      }
    }
    for (std::size_t k = 0; k < potentials.size(); ++k) {
      const auto& rows = per_mirror[k];
      ReportRow mean = base_row(cfg, cfg.mirrors[k], Source::Empirical);
      mean.alpha = mean.beta = mean.gamma1 = kNaN;
      mean.seed = -1;
      mean.error = mean.norm_w_sq = mean.mu1_dot = mean.mu2_dot = 0.0;
      for (const auto& r : rows) {
        mean.error += r.error;
        mean.norm_w_sq += r.norm_w_sq;
        mean.mu1_dot += r.mu1_dot;
        mean.mu2_dot += r.mu2_dot;
        mean.converged = mean.converged && r.converged;
        mean.runtime_seconds += r.runtime_seconds;
      }
      const double m = static_cast<double>(rows.size());
      mean.error /= m;
      mean.norm_w_sq /= m;
      mean.mu1_dot /= m;
      mean.mu2_dot /= m;
      report.rows.push_back(mean);
    }
  }

  report.sort();
  return report;
}

const std::vector<TableCell>& table_cells() {
  static const std::vector<TableCell> cells{
      {ModelTag::Model1, 500, 1000},  {ModelTag::Model1, 200, 1000},   {ModelTag::Model1, 100, 1000},
      {ModelTag::Model1, 1000, 10000}, {ModelTag::Model2, 100, 1000},  {ModelTag::Model2, 1000, 10000},
      {ModelTag::Model2, 500, 10000}};
  return cells;
}

bool is_large_cell(const TableCell& c) { return static_cast<double>(c.n) * static_cast<double>(c.d) >= 1e7; }

ExperimentReport run_tables(const TablesOptions& opts, const ProgressFn& progress) {
  if (opts.seeds < 1) throw ParameterError("tables needs at least one seed");
  ExperimentReport all;
  for (const TableCell& c : table_cells()) {
    ExperimentConfig cfg;
    cfg.model = c.model;
    cfg.n = c.n;
    cfg.d = c.d;
    cfg.mirrors = {"l1", "l2"};
    cfg.theory = true;
    cfg.empirical = !opts.theory_only && !(opts.skip_large && is_large_cell(c));
    for (int k = 0; k < opts.seeds; ++k) cfg.seeds.push_back(opts.seed + static_cast<std::uint64_t>(k));
    cfg.theory_seed = opts.seed;
    cfg.draws = opts.draws;
    cfg.saddle = opts.saddle;
    cfg.timing = opts.timing;
    ExperimentReport part = run_experiment(cfg, progress);
    all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
  }
  all.sort();
  return all;
}

}  // namespace smd
