#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "smd/model.hpp"

namespace smd {

/// Gaussian tail Q(x) = P(Z > x), via erfc so tails stay accurate to x ≈ 38.
double q_function(double x);

struct ErrorReport {
  double error;
  double mu1_dot;
  double mu2_dot;
  double norm_w;
};

/// Misclassification probability of sign(xᵀw) from the projected statistics:
/// ½Q(μ1ᵀw/√(wᵀΣ1w)) + ½Q(−μ2ᵀw/√(wᵀΣ2w)).
double error_from_statistics(double mu1_dot, double mu2_dot, double quad1, double quad2);

/// Exact error of a linear classifier on an isotropic mixture (Σᵢ = σᵢ²I).
/// Throws UndefinedClassifierError for w = 0.
ErrorReport generalization_error(const MixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& w);

/// Fraction of m fresh balanced samples misclassified by sign(xᵀw). Ties (xᵀw = 0) count as class 2.
double empirical_error(const MixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& w,
                       Eigen::Index m, std::uint64_t seed);

}  // namespace smd
