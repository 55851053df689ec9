#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "smd/model.hpp"
#include "smd/saddle.hpp"

namespace smd {

/// Saddle variables of the scalarized min-max problem and the weight statistics they imply.
struct TheoryPrediction {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double norm_w_sq = 0.0;
  double mu1_dot = 0.0;
  double mu2_dot = 0.0;
  double error = 0.0;
  double objective_value = 0.0;
  /// Per-draw errors when the prediction averages over random draws (Model 2, ℓ1); else empty.
  std::vector<double> draw_errors;
  std::vector<double> draw_g1;
  /// Index into draw_g1 of the draw whose saddle variables are reported; −1 without draws.
  int reported_draw = -1;
};

/// E[(|X|−1)² 1{|X|>1}] for X ~ N(0, σ²), in closed form:
/// 2(σ²+1)Q(1/σ) − (2σ/√(2π)) exp(−1/(2σ²)).
double truncated_square_moment(double sigma);

// ---------------------------------------------------------------------------
// SGD (ψ = squared Euclidean norm)
// ---------------------------------------------------------------------------

/// Determinant of the 2×2 stationarity system for (γ1, γ2):
/// det [[σ1²c + k‖μ1‖², kμ1ᵀμ2], [kμ1ᵀμ2, σ2²c + k‖μ2‖²]] with k = αβn/4, c = 1 + αβn/2.
double delta_term(double alpha, double beta, double n, const MeanStats& stats, double sigma1,
                  double sigma2);

/// max_α min_β objective for SGD after w and γ have been eliminated.
///
/// Equals α/(2β) + (αβn/4)(σ1⁻² + σ2⁻²) − α²d/(4(1+αβn/2)) − (αβn/4)²·zᵀG N⁻¹(−1,1)ᵀ,
/// where G is the Gram matrix of (μ1, μ2), z = (−σ1⁻², σ2⁻²) and N the matrix of
/// `delta_term`. For σ1 = σ2 = 1 the last term is the familiar
/// −(αβn)²/(16Δ)·B − (αβn)³/(32Δ)·(B + ‖μ1‖²‖μ2‖² − (μ1ᵀμ2)²) with B = ‖μ1‖² + ‖μ2‖² − 2μ1ᵀμ2.
double sgd_objective(double alpha, double beta, const MeanStats& stats, double n, double d,
                     double sigma1, double sigma2);

/// Weight statistics of ŵ = −αg/(2+αβn) + c1μ1 − c2μ2 at a given (α, β).
struct SgdStatistics {
  double c1;
  double c2;
  double mu1_dot;
  double mu2_dot;
  double norm_w_sq;
};

SgdStatistics sgd_statistics(double alpha, double beta, const MeanStats& stats, double n, double d,
                             double sigma1, double sigma2);

/// Solves the SGD saddle problem and evaluates the predicted error.
/// Throws BoundaryError if the saddle sits on the edge of the search box.
TheoryPrediction sgd_predict(const MeanStats& stats, Eigen::Index n, Eigen::Index d, double sigma1,
                             double sigma2, const SaddleConfig& cfg = {});

// ---------------------------------------------------------------------------
// ℓ1-SMD, concentrated forms (σ1 = σ2 = 1, γ2 = −γ1)
// ---------------------------------------------------------------------------

/// α/(2β) − 2γ1²/(αβn) − 2γ1 − d·m(σ)/(2αβn), σ² = 2γ1²(1 − √(1−ε²)) + α², m = truncated_square_moment.
double l1_model1_objective(double alpha, double beta, double gamma1, double n, double d,
                           double epsilon);

TheoryPrediction l1_model1_predict(Eigen::Index n, Eigen::Index d, double epsilon,
                                   const SaddleConfig& cfg = {});

/// α/(2β) − 2γ1²/(αβn) − 2γ1 − h₊²/(2αβn) − (d−1)·m(α)/(2αβn), h = |2γ1t + αg1| − 1.
double l1_model2_objective(double alpha, double beta, double gamma1, double n, double d, double t,
                           double g1);

/// Solves the Model-2 problem for `draws` iid standard normal g1 values and averages the error.
/// The saddle variables and statistics reported are those of the median-error draw.
TheoryPrediction l1_model2_predict(Eigen::Index n, Eigen::Index d, double t, int draws,
                                   std::uint64_t seed, const SaddleConfig& cfg = {});

/// Unconcentrated four-variable ℓ1 objective for one realization g of the Gaussian vector:
/// γ2/σ2 − γ1/σ1 + α/(2β) − (γ1²+γ2²)/(αβn) − Σᵢ max(0, |αgᵢ + (γ1/σ1)μ1ᵢ + (γ2/σ2)μ2ᵢ| − 1)²/(2αβn).
double l1_sampled_objective(double alpha, double beta, double gamma1, double gamma2,
                            const MixtureModel& model, double n,
                            const Eigen::Ref<const Eigen::VectorXd>& g);

}  // namespace smd
