#include "smd/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "smd/errors.hpp"
#include "smd/generalization.hpp"
#include "smd/rng.hpp"

namespace smd {

namespace {

constexpr double kMinSigma = 1e-8;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Same as truncated_square_moment without the argument check; σ is clamped away from 0.
double moment(double sigma) {
  const double s = std::max(sigma, kMinSigma);
  const double inv = 1.0 / s;
  return 2.0 * (s * s + 1.0) * q_function(inv) - 2.0 * s * kInvSqrt2Pi * std::exp(-0.5 * inv * inv);
}

void check_scalar_args(double alpha, double beta) {
  if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
  if (!(alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
}

void check_l1_args(double alpha, double beta) {
  if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
  if (!(alpha > 0.0)) throw ParameterError("the l1 objective is singular at alpha = 0");
}

void check_regime(Eigen::Index n, Eigen::Index d) {
  if (n <= 0 || d <= 0) throw ParameterError("n and d must be positive");
  if (n >= d) {
    throw RegimeError("theory requires n < d (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
}

void throw_if_boundary(const SaddleResult& r, std::span<const SaddleAxis> axes) {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (r.on_boundary[i]) {
      throw BoundaryError("saddle point on the boundary of the " + axes[i].name +
                              " range; widen it",
                          i, axes[i].name);
    }
  }
}

struct Reduced {
  double k;      // αβn/4
  double c;      // 1 + αβn/2
  double delta;  // det N
  double u1;     // N⁻¹(−1, 1)ᵀ
  double u2;
};

Reduced reduce(double alpha, double beta, double n, const MeanStats& st, double s1, double s2) {
  const double abn = alpha * beta * n;
  Reduced r{};
  r.k = 0.25 * abn;
  r.c = 1.0 + 0.5 * abn;
  const double a11 = s1 * s1 * r.c + r.k * st.norm1_sq;
  const double a22 = s2 * s2 * r.c + r.k * st.norm2_sq;
  const double a12 = r.k * st.dot12;
  r.delta = a11 * a22 - a12 * a12;
  if (!(r.delta > 0.0)) {
    throw NumericalError("degenerate stationarity system (delta <= 0)", {alpha, beta});
  }
  r.u1 = (-a22 - a12) / r.delta;
  r.u2 = (a12 + a11) / r.delta;
  return r;
}

TheoryPrediction finish_l1(double alpha, double beta, double s, double n, double norm_w_sq,
                           double value) {
  TheoryPrediction p;
  const double abn = alpha * beta * n;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma1 = 0.5 * abn * s;
  p.gamma2 = -p.gamma1;
  p.mu1_dot = 2.0 * p.gamma1 / abn + 1.0;
  p.mu2_dot = -2.0 * p.gamma1 / abn - 1.0;
  p.norm_w_sq = norm_w_sq;
  p.objective_value = value;
  p.error = error_from_statistics(p.mu1_dot, p.mu2_dot, norm_w_sq, norm_w_sq);
  return p;
}

std::array<SaddleAxis, 3> l1_axes(const SaddleConfig& cfg) {
  return {SaddleAxis{Direction::Max, cfg.alpha_range, AxisScale::Log, "alpha"},
          SaddleAxis{Direction::Min, cfg.beta_range, AxisScale::Log, "beta"},
          SaddleAxis{Direction::Max, cfg.gamma_range, AxisScale::Linear, "gamma"}};
}

}  // namespace

double truncated_square_moment(double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("truncated_square_moment requires sigma > 0");
  return moment(sigma);
}

// ---------------------------------------------------------------------------

double delta_term(double alpha, double beta, double n, const MeanStats& stats, double sigma1,
                  double sigma2) {
  check_scalar_args(alpha, beta);
  const double abn = alpha * beta * n;
  const double k = 0.25 * abn;
  const double c = 1.0 + 0.5 * abn;
  const double a11 = sigma1 * sigma1 * c + k * stats.norm1_sq;
  const double a22 = sigma2 * sigma2 * c + k * stats.norm2_sq;
  const double a12 = k * stats.dot12;
  return a11 * a22 - a12 * a12;
}

double sgd_objective(double alpha, double beta, const MeanStats& stats, double n, double d,
                     double sigma1, double sigma2) {
  check_scalar_args(alpha, beta);
  const Reduced r = reduce(alpha, beta, n, stats, sigma1, sigma2);
  const double z1 = -1.0 / (sigma1 * sigma1);
  const double z2 = 1.0 / (sigma2 * sigma2);
  // zᵀ G u
  const double gu1 = stats.norm1_sq * r.u1 + stats.dot12 * r.u2;
  const double gu2 = stats.dot12 * r.u1 + stats.norm2_sq * r.u2;
  const double mean_part = r.k * r.k * (z1 * gu1 + z2 * gu2);
  return alpha / (2.0 * beta) + r.k * (z2 - z1) - alpha * alpha * d / (4.0 * r.c) - mean_part;
}

SgdStatistics sgd_statistics(double alpha, double beta, const MeanStats& stats, double n, double d,
                             double sigma1, double sigma2) {
  check_scalar_args(alpha, beta);
  const Reduced r = reduce(alpha, beta, n, stats, sigma1, sigma2);
  SgdStatistics s{};
  s.c1 = -r.k * r.u1;
  s.c2 = r.k * r.u2;
  s.mu1_dot = s.c1 * stats.norm1_sq - s.c2 * stats.dot12;
  s.mu2_dot = s.c1 * stats.dot12 - s.c2 * stats.norm2_sq;
  const double g_coef = alpha / (2.0 + alpha * beta * n);
  s.norm_w_sq = g_coef * g_coef * d + s.c1 * s.c1 * stats.norm1_sq + s.c2 * s.c2 * stats.norm2_sq -
                2.0 * s.c1 * s.c2 * stats.dot12;
  return s;
}

TheoryPrediction sgd_predict(const MeanStats& stats, Eigen::Index n, Eigen::Index d, double sigma1,
                             double sigma2, const SaddleConfig& cfg) {
  check_regime(n, d);
  cfg.validate();
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const std::array<SaddleAxis, 2> axes{
      SaddleAxis{Direction::Max, cfg.alpha_range, AxisScale::Log, "alpha"},
      SaddleAxis{Direction::Min, cfg.beta_range, AxisScale::Log, "beta"}};
  const SaddleResult r = saddle_solve(
      [&](std::span<const double> x) { return sgd_objective(x[0], x[1], stats, nn, dd, sigma1, sigma2); },
      axes, cfg);
  throw_if_boundary(r, axes);

  const double alpha = r.point[0];
  const double beta = r.point[1];
  const SgdStatistics s = sgd_statistics(alpha, beta, stats, nn, dd, sigma1, sigma2);
  const double abn = alpha * beta * nn;
  TheoryPrediction p;
  p.alpha = alpha;
  p.beta = beta;
  p.mu1_dot = s.mu1_dot;
  p.mu2_dot = s.mu2_dot;
  p.norm_w_sq = s.norm_w_sq;
  p.gamma1 = abn / (2.0 * sigma1) * (s.mu1_dot - 1.0);
  p.gamma2 = abn / (2.0 * sigma2) * (s.mu2_dot + 1.0);
  p.objective_value = r.value;
  p.error = error_from_statistics(s.mu1_dot, s.mu2_dot, sigma1 * sigma1 * s.norm_w_sq,
                                  sigma2 * sigma2 * s.norm_w_sq);
  return p;
}

// ---------------------------------------------------------------------------

double l1_model1_objective(double alpha, double beta, double gamma1, double n, double d,
                           double epsilon) {
  check_l1_args(alpha, beta);
  const double abn = alpha * beta * n;
  const double var = 2.0 * gamma1 * gamma1 * (1.0 - std::sqrt(1.0 - epsilon * epsilon)) + alpha * alpha;
  return alpha / (2.0 * beta) - 2.0 * gamma1 * gamma1 / abn - 2.0 * gamma1 -
         d * moment(std::sqrt(var)) / (2.0 * abn);
}

TheoryPrediction l1_model1_predict(Eigen::Index n, Eigen::Index d, double epsilon,
                                   const SaddleConfig& cfg) {
  check_regime(n, d);
  cfg.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const auto axes = l1_axes(cfg);
  const SaddleResult r = saddle_solve(
      [&](std::span<const double> x) {
        const double gamma1 = 0.5 * x[0] * x[1] * nn * x[2];
        return l1_model1_objective(x[0], x[1], gamma1, nn, dd, epsilon);
      },
      axes, cfg);
  throw_if_boundary(r, axes);

  const double alpha = r.point[0];
  const double beta = r.point[1];
  const double s = r.point[2];
  const double abn = alpha * beta * nn;
  const double gamma1 = 0.5 * abn * s;
  const double var = 2.0 * gamma1 * gamma1 * (1.0 - std::sqrt(1.0 - epsilon * epsilon)) + alpha * alpha;
  const double norm_w_sq = dd * moment(std::sqrt(var)) / (abn * abn);
  return finish_l1(alpha, beta, s, nn, norm_w_sq, r.value);
}

double l1_model2_objective(double alpha, double beta, double gamma1, double n, double d, double t,
                           double g1) {
  check_l1_args(alpha, beta);
  const double abn = alpha * beta * n;
  const double hinge = std::max(0.0, std::fabs(2.0 * gamma1 * t + alpha * g1) - 1.0);
  return alpha / (2.0 * beta) - 2.0 * gamma1 * gamma1 / abn - 2.0 * gamma1 -
         hinge * hinge / (2.0 * abn) - (d - 1.0) * moment(alpha) / (2.0 * abn);
}

TheoryPrediction l1_model2_predict(Eigen::Index n, Eigen::Index d, double t, int draws,
                                   std::uint64_t seed, const SaddleConfig& cfg) {
  check_regime(n, d);
  cfg.validate();
  if (!(t > 0.0)) throw ParameterError("t must be > 0");
  if (draws < 1) throw ParameterError("need at least one g1 draw");
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const auto axes = l1_axes(cfg);

  Rng rng = make_rng(seed, Stream::Theory);
  const Eigen::VectorXd g1s = standard_normal(rng, draws);

  std::vector<TheoryPrediction> per_draw;
  per_draw.reserve(static_cast<std::size_t>(draws));
  for (int k = 0; k < draws; ++k) {
    const double g1 = g1s[k];
    const SaddleResult r = saddle_solve(
        [&](std::span<const double> x) {
          const double gamma1 = 0.5 * x[0] * x[1] * nn * x[2];
          return l1_model2_objective(x[0], x[1], gamma1, nn, dd, t, g1);
        },
        axes, cfg);
    throw_if_boundary(r, axes);
    const double alpha = r.point[0];
    const double beta = r.point[1];
    const double s = r.point[2];
    const double abn = alpha * beta * nn;
    const double gamma1 = 0.5 * abn * s;
    const double hinge = std::max(0.0, std::fabs(2.0 * gamma1 * t + alpha * g1) - 1.0);
    const double norm_w_sq = (hinge * hinge + (dd - 1.0) * moment(alpha)) / (abn * abn);
    per_draw.push_back(finish_l1(alpha, beta, s, nn, norm_w_sq, r.value));
  }

  std::vector<std::size_t> idx(per_draw.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return per_draw[a].error < per_draw[b].error; });
  const std::size_t median = idx[(idx.size() - 1) / 2];
  TheoryPrediction out = per_draw[median];
  out.reported_draw = static_cast<int>(median);
  double sum = 0.0;
  for (const auto& p : per_draw) {
    sum += p.error;
    out.draw_errors.push_back(p.error);
  }
  out.draw_g1.assign(g1s.data(), g1s.data() + g1s.size());
  out.error = sum / static_cast<double>(per_draw.size());
  return out;
}

double l1_sampled_objective(double alpha, double beta, double gamma1, double gamma2,
                            const MixtureModel& model, double n,
                            const Eigen::Ref<const Eigen::VectorXd>& g) {
  check_l1_args(alpha, beta);
  if (g.size() != model.dim()) throw ParameterError("g must have the model dimension");
  const double s1 = model.sigma1();
  const double s2 = model.sigma2();
  const double abn = alpha * beta * n;
  const Eigen::ArrayXd arg = alpha * g.array() + (gamma1 / s1) * model.mu1().array() +
                             (gamma2 / s2) * model.mu2().array();
  const double hinge_sum = (arg.abs() - 1.0).max(0.0).square().sum();
  return gamma2 / s2 - gamma1 / s1 + alpha / (2.0 * beta) - (gamma1 * gamma1 + gamma2 * gamma2) / abn -
         hinge_sum / (2.0 * abn);
}

}  // namespace smd
