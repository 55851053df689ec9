#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smd/model.hpp"
#include "smd/potentials.hpp"

namespace smd {

struct TrainSettings {
  /// Learning rate. Unset means `default_learning_rate(data, potential)`.
  std::optional<double> eta;
  int max_epochs = 10'000;
  /// Stop once max_i |xᵢᵀw − yᵢ| < residual_tol.
  double residual_tol = 1e-3;
  bool shuffle = true;
  std::uint64_t seed = 0;

  /// Epoch budget and tolerance defaults for a potential: q < 1.2 converges much slower.
  static TrainSettings defaults_for(const Potential& p);

  void validate() const;
};

struct TrainedWeights {
  Eigen::VectorXd w;
  int epochs_run = 0;
  double final_residual = 0.0;
  bool converged = false;
  double potential_value_at_w = 0.0;
  double eta = 0.0;
  /// Per epoch: largest |yᵢ − xᵢᵀw| seen just before each update in that epoch.
  std::vector<double> residual_trace;
};

/// 0.5/max‖xᵢ‖² for q ≥ 2, 1.8/max‖xᵢ‖² for q < 2.
double default_learning_rate(const Dataset& data, const Potential& p);

/// Single-sample stochastic mirror descent on the squared loss ½(yᵢ − xᵢᵀw)², started at w = 0.
///
/// The iterate lives in the mirrored domain: z ← z + η(yᵢ − xᵢᵀw)xᵢ, w = ∇ψ⁻¹(z).
/// Each epoch visits every sample once (a fresh permutation per epoch when `shuffle`).
/// Throws DivergenceError if the residual grows past 10⁶ times its starting value.
TrainedWeights smd_fit(const Dataset& data, const Potential& p, const TrainSettings& settings);

/// max_i |xᵢᵀw − yᵢ|.
double interpolation_residual(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& w);

}  // namespace smd
