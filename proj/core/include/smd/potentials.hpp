#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace smd {

/// q used when a potential is requested as "l1". ψ(w) = Σ|wᵢ|^q/q with q → 1 approaches ‖w‖₁.
inline constexpr double kDefaultL1Q = 1.05;

/// Strictly convex q-norm potential ψ(w) = Σ|wᵢ|^q / q, q > 1. q = 2 is plain SGD.
///
/// The mirror map ∇ψ is sign(w)|w|^{q-1} coordinatewise and its inverse is
/// sign(z)|z|^{1/(q-1)}. When 1/(q-1) is an integer (q = 2, 1.5, 1.1, 1.05, ...)
/// the inverse is evaluated by repeated squaring, which is both exact and fast.
class Potential {
 public:
  static Potential qnorm(double q);
  static Potential l2() { return qnorm(2.0); }
  static Potential l1(double q = kDefaultL1Q);

  /// Accepts "l2", "l1" and "qnorm:<q>".
  static Potential parse(std::string_view spec);

  double q() const noexcept { return q_; }
  bool is_euclidean() const noexcept { return q_ == 2.0; }

  /// True for potentials the ℓ1 theory applies to (the "l1" alias or q < 2).
  bool is_l1_family() const noexcept { return q_ < 2.0; }

  /// Spec string this potential was parsed from, e.g. "l1" or "qnorm:3".
  const std::string& label() const noexcept { return label_; }

  double value(const Eigen::Ref<const Eigen::VectorXd>& w) const;
  double mirror(double w) const noexcept;
  double inverse_mirror(double z) const noexcept;
  void mirror(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::Ref<Eigen::VectorXd> out) const;
  void inverse_mirror(const Eigen::Ref<const Eigen::VectorXd>& z,
                      Eigen::Ref<Eigen::VectorXd> out) const;

  /// Fused SMD step: z += scale·x, then w = ∇ψ⁻¹(z), over contiguous arrays of length n.
  void mirror_step(double scale, const double* x, double* z, double* w, Eigen::Index n) const noexcept;

  /// 1/(q-1) when it is a small integer, otherwise 0.
  int integer_inverse_exponent() const noexcept { return int_inverse_exp_; }

 private:
  Potential(double q, std::string label);

  double q_;
  double forward_exp_;
  double inverse_exp_;
  int int_inverse_exp_;
  std::string label_;
};

double potential_value(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w);
Eigen::VectorXd mirror_map(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w);
Eigen::VectorXd inverse_mirror_map(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& z);

/// D_ψ(w, w') = ψ(w) − ψ(w') − ∇ψ(w')ᵀ(w − w').
double bregman(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w,
               const Eigen::Ref<const Eigen::VectorXd>& wprime);

}  // namespace smd
