#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "smd/model.hpp"
#include "smd/potentials.hpp"

namespace smd {

/// w = X(XᵀX)⁻¹y, the minimum-Euclidean-norm solution of Xᵀw = y.
/// Throws SingularityError when XᵀX is numerically rank deficient.
Eigen::VectorXd min_l2_interpolator(const Dataset& data);

struct L1OracleOptions {
  /// Douglas–Rachford step. 0 picks one from the scale of the minimum-ℓ2 solution.
  double tau = 0.0;
  int max_iterations = 200'000;
};

struct L1OracleResult {
  Eigen::VectorXd w;
  double objective = 0.0;
  /// ‖w‖₁ minus the best dual bound yᵀλ with ‖Xλ‖∞ ≤ 1.
  double gap = 0.0;
  double primal_residual = 0.0;
  int iterations = 0;
};

/// min ‖w‖₁ s.t. Xᵀw = y by Douglas–Rachford splitting of the affine projection and
/// soft-thresholding. Stops when the duality gap is below tol·max(1, ‖w‖₁).
/// Throws ConvergenceError with the last residual and gap at the iteration cap.
L1OracleResult solve_min_l1(const Dataset& data, double tol, const L1OracleOptions& opts = {});

Eigen::VectorXd min_l1_interpolator(const Dataset& data, double tol = 1e-8);

/// min ψ(w) s.t. Xᵀw = y for a q-norm potential, by damped Newton on the dual
/// max_λ yᵀλ − ψ*(Xλ); the primal point is w = ∇ψ*(Xλ) = ∇ψ⁻¹(Xλ).
Eigen::VectorXd min_qnorm_interpolator(const Dataset& data, const Potential& p, double tol = 1e-10,
                                       int max_iterations = 500);

struct MonteCarloEstimate {
  double estimate;
  double stderr_;
};

/// Monte-Carlo estimate of E[(|X|−1)² 1{|X|>1}], X ~ N(0, σ²). Requires samples ≥ 1000.
MonteCarloEstimate mc_truncated_moment(double sigma, std::int64_t samples, std::uint64_t seed);

struct VariationalCheck {
  double value;
  double beta_star;
};

/// Minimizes 1/(2β) + βx/2 over β > 0 numerically; the minimum is √x at β = 1/√x.
VariationalCheck sqrt_variational_check(double x);

}  // namespace smd
