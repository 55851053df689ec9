#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smd/saddle.hpp"

namespace smd {

enum class ModelTag { Model1, Model2 };

std::string model_name(ModelTag m);

/// One table cell worth of work: a model, a size, the mirrors to compare and the seeds to use.
struct ExperimentConfig {
  ModelTag model = ModelTag::Model1;
  long n = 0;
  long d = 0;
  double epsilon = 0.1;
  double t = 2.0;
  double sigma = 1.0;
  std::vector<std::string> mirrors{"l2", "l1"};
  std::vector<std::uint64_t> seeds;
  bool theory = true;
  bool empirical = true;
  /// Number of g1 draws averaged by the Model-2 ℓ1 prediction.
  int draws = 5;
  /// Seed for the theory path (Model-2 g1 draws).
  std::uint64_t theory_seed = 0;

  // Trainer overrides; unset keeps the per-potential defaults.
  std::optional<double> eta;
  std::optional<double> q;
  std::optional<double> tol;
  std::optional<int> max_epochs;

  SaddleConfig saddle;
  std::string out_path;
  /// Record wall-clock runtimes. Off writes 0 so reruns are byte-identical.
  bool timing = false;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Reads a flat INI/TOML-style file with optional [model], [trainer] and [saddle] sections.
///
/// Keys: model.kind (1, 2, model1, model2), model.n, model.d, model.epsilon, model.t,
/// model.sigma, mirrors, seeds, theory, empirical, draws, theory_seed, timing, out,
/// trainer.eta, trainer.q, trainer.tol, trainer.max_epochs, saddle.grid_points,
/// saddle.refine_passes. Lists are comma separated, optionally in [brackets]; values may be
/// quoted; '#' and ';' start comments. Unknown keys are an error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

}  // namespace smd
