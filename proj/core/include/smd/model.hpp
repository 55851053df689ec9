#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Core>

namespace smd {

/// Means are an iid normal μ1 and μ2 = √(1−ε²)μ1 + εv; the difference is spread over all coordinates.
struct Model1Kind {
  double epsilon;
};

/// Means agree everywhere except the first coordinate, where μ1[0] = −μ2[0] = t.
struct Model2Kind {
  double t;
};

struct CustomKind {};

using ModelKind = std::variant<Model1Kind, Model2Kind, CustomKind>;

inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kDefaultT = 2.0;
inline constexpr double kDefaultSigma = 1.0;

/// Two-class Gaussian mixture with isotropic class covariances σ1²I and σ2²I.
class MixtureModel {
 public:
  MixtureModel(Eigen::VectorXd mu1, Eigen::VectorXd mu2, double sigma1, double sigma2,
               ModelKind kind = CustomKind{});

  /// Zero-noise mixture. Only meaningful in tests: the closed-form error divides by σ.
  static MixtureModel noiseless(Eigen::VectorXd mu1, Eigen::VectorXd mu2,
                                ModelKind kind = CustomKind{});

  const Eigen::VectorXd& mu1() const noexcept { return mu1_; }
  const Eigen::VectorXd& mu2() const noexcept { return mu2_; }
  double sigma1() const noexcept { return sigma1_; }
  double sigma2() const noexcept { return sigma2_; }
  const ModelKind& kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return mu1_.size(); }

 private:
  struct Unchecked {};
  MixtureModel(Unchecked, Eigen::VectorXd mu1, Eigen::VectorXd mu2, double sigma1, double sigma2,
               ModelKind kind);

  Eigen::VectorXd mu1_;
  Eigen::VectorXd mu2_;
  double sigma1_;
  double sigma2_;
  ModelKind kind_;
};

/// Training set. Column i of `X` is the feature vector xᵢ; the first n/2 labels are +1.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;

  Eigen::Index n() const noexcept { return X.cols(); }
  Eigen::Index d() const noexcept { return X.rows(); }
};

enum class StatsMode { Exact, Concentrated };

struct MeanStats {
  double norm1_sq;
  double norm2_sq;
  double dot12;
  StatsMode mode;
};

MixtureModel make_model1(Eigen::Index d, double epsilon, double sigma, std::uint64_t seed);
MixtureModel make_model2(Eigen::Index d, double t, double sigma, std::uint64_t seed);

/// n/2 draws from each class, class 1 first. Requires n even and n < d.
Dataset sample_dataset(const MixtureModel& model, Eigen::Index n, std::uint64_t seed);

MeanStats mean_stats(const MixtureModel& model, StatsMode mode);

/// Concentrated statistics straight from the model parameters.
MeanStats concentrated_model1_stats(Eigen::Index d, double epsilon);
MeanStats concentrated_model2_stats(Eigen::Index d, double t);

}  // namespace smd
