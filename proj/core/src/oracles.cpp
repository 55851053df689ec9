#include "smd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <boost/math/tools/minima.hpp>

#include "smd/errors.hpp"
#include "smd/rng.hpp"

namespace smd {

namespace {

Eigen::LLT<Eigen::MatrixXd> gram_factor(const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd gram = X.transpose() * X;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    throw SingularityError("XᵀX is singular; the samples are linearly dependent");
  }
  return llt;
}

double soft(double v, double t) {
  const double a = std::fabs(v) - t;
  return a > 0.0 ? std::copysign(a, v) : 0.0;
}

}  // namespace

Eigen::VectorXd min_l2_interpolator(const Dataset& data) {
  const auto llt = gram_factor(data.X);
  return data.X * llt.solve(data.y);
}

L1OracleResult solve_min_l1(const Dataset& data, double tol, const L1OracleOptions& opts) {
  if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
  if (opts.max_iterations < 1) throw ParameterError("max_iterations must be positive");
  const Eigen::MatrixXd& X = data.X;
  const Eigen::VectorXd& y = data.y;
  const auto llt = gram_factor(X);

  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - X * llt.solve(X.transpose() * v - y);
  };

  const Eigen::VectorXd w2 = X * llt.solve(y);
  double tau = opts.tau;
  if (tau <= 0.0) tau = std::max(w2.cwiseAbs().maxCoeff(), 1e-12);

  const Eigen::Index d = X.rows();
  Eigen::VectorXd v = w2;
  Eigen::VectorXd x(d);
  Eigen::VectorXd u(d);
  L1OracleResult out;
  constexpr int kCheckEvery = 20;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    x = project(v);
    for (Eigen::Index i = 0; i < d; ++i) u[i] = soft(2.0 * x[i] - v[i], tau);
    v += u - x;

    if (it % kCheckEvery != 0 && it != opts.max_iterations) continue;
    x = project(v);
    // (x − v)/τ lies in range(X); a feasible dual point is its least-squares preimage, rescaled.
    const Eigen::VectorXd s = (x - v) / tau;
    Eigen::VectorXd lambda = llt.solve(X.transpose() * s);
    const double sup = (X * lambda).cwiseAbs().maxCoeff();
    if (sup > 1.0) lambda /= sup;
    const double primal = x.lpNorm<1>();
    out.w = x;
    out.objective = primal;
    out.gap = primal - y.dot(lambda);
    out.primal_residual = (X.transpose() * x - y).cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.gap <= tol * std::max(1.0, primal)) return out;
  }
  throw ConvergenceError("min_l1_interpolator did not converge", out.primal_residual, out.gap);
}

Eigen::VectorXd min_l1_interpolator(const Dataset& data, double tol) {
  return solve_min_l1(data, tol).w;
}

Eigen::VectorXd min_qnorm_interpolator(const Dataset& data, const Potential& p, double tol,
                                       int max_iterations) {
  const Eigen::MatrixXd& X = data.X;
  const Eigen::VectorXd& y = data.y;
  const auto llt = gram_factor(X);
  const double conj = p.q() / (p.q() - 1.0);

  auto conj_value = [&](const Eigen::VectorXd& z) {
    return z.array().abs().pow(conj).sum() / conj;
  };
  auto dual = [&](const Eigen::VectorXd& lambda) { return y.dot(lambda) - conj_value(X * lambda); };

  // Best multiple of the ℓ2 multiplier; ψ* is homogeneous of degree `conj`.
  Eigen::VectorXd lambda = llt.solve(y);
  {
    const double a = y.dot(lambda);
    const double b = conj_value(X * lambda);
    lambda *= std::pow(a / (conj * b), 1.0 / (conj - 1.0));
  }

  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  Eigen::VectorXd z = X * lambda;
  Eigen::VectorXd w = inverse_mirror_map(p, z);
  double current = dual(lambda);
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd grad = y - X.transpose() * w;
    if (grad.cwiseAbs().maxCoeff() <= tol * scale) return w;
    const Eigen::VectorXd h = (conj - 1.0) * z.array().abs().pow(conj - 2.0);
    Eigen::MatrixXd hess = X.transpose() * h.asDiagonal() * X;
    hess.diagonal().array() += 1e-14 * std::max(hess.trace(), 1e-300);
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Eigen::VectorXd trial = lambda + t * step;
      const double value = dual(trial);
      if (std::isfinite(value) && value >= current + 1e-4 * t * grad.dot(step)) {
        lambda = trial;
        current = value;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    z = X * lambda;
    w = inverse_mirror_map(p, z);
  }
  const double residual = (X.transpose() * w - y).cwiseAbs().maxCoeff();
  if (residual <= std::sqrt(tol) * scale) return w;
  throw ConvergenceError("min_qnorm_interpolator did not converge", residual, 0.0);
}

MonteCarloEstimate mc_truncated_moment(double sigma, std::int64_t samples, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  if (samples < 1000) throw ParameterError("mc_truncated_moment needs at least 1000 samples");
  Rng rng = make_rng(seed, Stream::Oracle);
  std::normal_distribution<double> normal(0.0, sigma);
  // Welford, so 10⁷ small terms do not lose precision.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 1; k <= samples; ++k) {
    const double a = std::fabs(normal(rng)) - 1.0;
    const double v = a > 0.0 ? a * a : 0.0;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

VariationalCheck sqrt_variational_check(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("x must be positive and finite");
  // Search over log β so the bracket covers many decades evenly.
  auto f = [x](double t) {
    const double beta = std::exp(t);
    return 0.5 / beta + 0.5 * beta * x;
  };
  const auto [t, value] = boost::math::tools::brent_find_minima(f, -40.0, 40.0, 52);
  return {value, std::exp(t)};
}

}  // namespace smd
