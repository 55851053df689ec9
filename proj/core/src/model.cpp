#include "smd/model.hpp"

#include <cmath>
#include <string>

#include "smd/errors.hpp"
#include "smd/rng.hpp"

namespace smd {

namespace {

void check_means(const Eigen::VectorXd& mu1, const Eigen::VectorXd& mu2) {
  if (mu1.size() < 1) throw ParameterError("mixture means must have dimension >= 1");
  if (mu1.size() != mu2.size()) {
    throw ParameterError("mixture means differ in dimension: " + std::to_string(mu1.size()) +
                         " vs " + std::to_string(mu2.size()));
  }
}

void check_kind(const Eigen::VectorXd& mu1, const Eigen::VectorXd& mu2, const ModelKind& kind) {
  if (const auto* m2 = std::get_if<Model2Kind>(&kind)) {
    if (!(m2->t > 0.0)) throw ParameterError("Model 2 requires t > 0");
    if (mu1[0] != m2->t || mu2[0] != -m2->t) {
      throw ParameterError("Model 2 requires mu1[0] = -mu2[0] = t");
    }
    if (mu1.size() > 1 && mu1.tail(mu1.size() - 1) != mu2.tail(mu2.size() - 1)) {
      throw ParameterError("Model 2 means must agree outside the first coordinate");
    }
  } else if (const auto* m1 = std::get_if<Model1Kind>(&kind)) {
    if (!(m1->epsilon > 0.0 && m1->epsilon < 1.0)) {
      throw ParameterError("Model 1 requires epsilon in (0, 1)");
    }
  }
}

}  // namespace

MixtureModel::MixtureModel(Eigen::VectorXd mu1, Eigen::VectorXd mu2, double sigma1, double sigma2,
                           ModelKind kind)
    : mu1_(std::move(mu1)),
      mu2_(std::move(mu2)),
      sigma1_(sigma1),
      sigma2_(sigma2),
      kind_(kind) {
  check_means(mu1_, mu2_);
  if (!(sigma1_ > 0.0) || !(sigma2_ > 0.0)) throw ParameterError("noise scales must be > 0");
  check_kind(mu1_, mu2_, kind_);
}

MixtureModel::MixtureModel(Unchecked, Eigen::VectorXd mu1, Eigen::VectorXd mu2, double sigma1,
                           double sigma2, ModelKind kind)
    : mu1_(std::move(mu1)),
      mu2_(std::move(mu2)),
      sigma1_(sigma1),
      sigma2_(sigma2),
      kind_(kind) {}

MixtureModel MixtureModel::noiseless(Eigen::VectorXd mu1, Eigen::VectorXd mu2, ModelKind kind) {
  check_means(mu1, mu2);
  check_kind(mu1, mu2, kind);
  return MixtureModel(Unchecked{}, std::move(mu1), std::move(mu2), 0.0, 0.0, kind);
}

MixtureModel make_model1(Eigen::Index d, double epsilon, double sigma, std::uint64_t seed) {
  if (d < 2) throw ParameterError("Model 1 requires d >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("Model 1 requires epsilon in (0, 1)");
  Rng rng = make_rng(seed, Stream::Model);
  Eigen::VectorXd mu1 = standard_normal(rng, d);
  Eigen::VectorXd v = standard_normal(rng, d);
  Eigen::VectorXd mu2 = std::sqrt(1.0 - epsilon * epsilon) * mu1 + epsilon * v;
  return MixtureModel(std::move(mu1), std::move(mu2), sigma, sigma, Model1Kind{epsilon});
}

MixtureModel make_model2(Eigen::Index d, double t, double sigma, std::uint64_t seed) {
  if (d < 2) throw ParameterError("Model 2 requires d >= 2");
  if (!(t > 0.0)) throw ParameterError("Model 2 requires t > 0");
  Rng rng = make_rng(seed, Stream::Model);
  Eigen::VectorXd mu1 = standard_normal(rng, d);
  Eigen::VectorXd mu2 = mu1;
  mu1[0] = t;
  mu2[0] = -t;
  return MixtureModel(std::move(mu1), std::move(mu2), sigma, sigma, Model2Kind{t});
}

Dataset sample_dataset(const MixtureModel& model, Eigen::Index n, std::uint64_t seed) {
  if (n <= 0 || n % 2 != 0) {
    throw ParameterError("sample size must be a positive even number, got " + std::to_string(n));
  }
  const Eigen::Index d = model.dim();
  if (n >= d) {
    throw RegimeError("over-parametrized regime requires n < d (n=" + std::to_string(n) +
                      ", d=" + std::to_string(d) + ")");
  }
  Rng rng = make_rng(seed, Stream::Data);
  std::normal_distribution<double> normal;
  Dataset data{Eigen::MatrixXd(d, n), Eigen::VectorXd(n)};
  const Eigen::Index half = n / 2;
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool first = j < half;
    const Eigen::VectorXd& mu = first ? model.mu1() : model.mu2();
    const double sigma = first ? model.sigma1() : model.sigma2();
    for (Eigen::Index i = 0; i < d; ++i) data.X(i, j) = mu[i] + sigma * normal(rng);
    data.y[j] = first ? 1.0 : -1.0;
  }
  return data;
}

MeanStats concentrated_model1_stats(Eigen::Index d, double epsilon) {
  const double dd = static_cast<double>(d);
  return {dd, dd, std::sqrt(1.0 - epsilon * epsilon) * dd, StatsMode::Concentrated};
}

MeanStats concentrated_model2_stats(Eigen::Index d, double t) {
  const double rest = static_cast<double>(d - 1);
  return {rest + t * t, rest + t * t, rest - t * t, StatsMode::Concentrated};
}

MeanStats mean_stats(const MixtureModel& model, StatsMode mode) {
  if (mode == StatsMode::Exact) {
    return {model.mu1().squaredNorm(), model.mu2().squaredNorm(), model.mu1().dot(model.mu2()),
            StatsMode::Exact};
  }
  if (const auto* m1 = std::get_if<Model1Kind>(&model.kind())) {
    return concentrated_model1_stats(model.dim(), m1->epsilon);
  }
  if (const auto* m2 = std::get_if<Model2Kind>(&model.kind())) {
    return concentrated_model2_stats(model.dim(), m2->t);
  }
  throw UnsupportedError("concentrated mean statistics are only defined for Model 1 and Model 2");
}

}  // namespace smd
