#include "smd/generalization.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "smd/errors.hpp"
#include "smd/rng.hpp"

namespace smd {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double error_from_statistics(double mu1_dot, double mu2_dot, double quad1, double quad2) {
  if (!(quad1 > 0.0) || !(quad2 > 0.0)) {
    throw UndefinedClassifierError("classifier variance wᵀΣw must be positive");
  }
  return 0.5 * q_function(mu1_dot / std::sqrt(quad1)) + 0.5 * q_function(-mu2_dot / std::sqrt(quad2));
}

ErrorReport generalization_error(const MixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (w.size() != model.dim()) throw ParameterError("weight length does not match model dimension");
  const double norm_sq = w.squaredNorm();
  if (!(norm_sq > 0.0)) throw UndefinedClassifierError("w = 0 does not define a classifier");
  const double m1 = model.mu1().dot(w);
  const double m2 = model.mu2().dot(w);
  const double s1 = model.sigma1();
  const double s2 = model.sigma2();
  ErrorReport r{0.0, m1, m2, std::sqrt(norm_sq)};
  if (s1 > 0.0 && s2 > 0.0) {
    r.error = error_from_statistics(m1, m2, s1 * s1 * norm_sq, s2 * s2 * norm_sq);
  } else {
    // Noiseless limit: each class sits at its mean.
    r.error = 0.5 * (m1 > 0.0 ? 0.0 : 1.0) + 0.5 * (m2 > 0.0 ? 1.0 : 0.0);
  }
  return r;
}

double empirical_error(const MixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& w,
                       Eigen::Index m, std::uint64_t seed) {
  if (m < 1) throw ParameterError("empirical_error needs m >= 1 test samples");
  if (w.size() != model.dim()) throw ParameterError("weight length does not match model dimension");
  if (!(w.squaredNorm() > 0.0)) throw UndefinedClassifierError("w = 0 does not define a classifier");

  Rng rng = make_rng(seed, Stream::Test);
  std::normal_distribution<double> normal;
  const Eigen::Index d = model.dim();
  const Eigen::Index m_first = (m + 1) / 2;
  Eigen::VectorXd noise(d);
  Eigen::Index wrong = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const bool first = k < m_first;
    for (Eigen::Index i = 0; i < d; ++i) noise[i] = normal(rng);
    const double sigma = first ? model.sigma1() : model.sigma2();
    const double score = (first ? model.mu1() : model.mu2()).dot(w) + sigma * noise.dot(w);
    const bool says_class1 = score > 0.0;
    if (says_class1 != first) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(m);
}

}  // namespace smd
