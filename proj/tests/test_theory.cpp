#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "smd/errors.hpp"
#include "smd/model.hpp"
#include "smd/rng.hpp"
#include "smd/theory.hpp"

using namespace smd;

namespace {

// Printed two-variable SGD objective for σ1 = σ2 = 1, evaluated in long double, plus the
// w-independent terms α/(2β) + αβn/2.
long double sgd_reference(long double a, long double b, long double n, long double d, long double n1,
                          long double n2, long double d12) {
  const long double abn = a * b * n;
  const long double k = abn / 4;
  const long double delta =
      k * k * (4 + n1 * n2 - d12 * d12 + 2 * (n1 + n2)) + k * (4 + n1 + n2) + 1;
  const long double bracket = n1 + n2 - 2 * d12;
  const long double printed = -a * a * d / (4 * (1 + abn / 2)) - abn * abn / (16 * delta) * bracket -
                              abn * abn * abn / (32 * delta) * (bracket + (n1 * n2 - d12 * d12));
  return printed + a / (2 * b) + abn / 2;
}

MeanStats stats_of(const Eigen::VectorXd& m1, const Eigen::VectorXd& m2) {
  return {m1.squaredNorm(), m2.squaredNorm(), m1.dot(m2), StatsMode::Exact};
}

}  // namespace

TEST(TruncatedMoment, KnownValues) {
  // 2(σ²+1)Q(1/σ) − 2σφ(1/σ) at σ = 1.
  EXPECT_NEAR(truncated_square_moment(1.0), 4 * 0.15865525393145707 - 2 * 0.24197072451914337, 1e-14);
  EXPECT_NEAR(truncated_square_moment(1.0), 0.1506796, 1e-7);
  EXPECT_LT(truncated_square_moment(0.01), 1e-12);
  EXPECT_GE(truncated_square_moment(0.01), 0.0);
  EXPECT_NEAR(truncated_square_moment(10.0), 85.015, 1e-3);
  EXPECT_THROW(truncated_square_moment(0.0), ParameterError);
  EXPECT_THROW(truncated_square_moment(-1.0), ParameterError);
}

TEST(DeltaTerm, Examples) {
  const MeanStats zero{0, 0, 0, StatsMode::Exact};
  const MeanStats st{3.0, 2.0, 1.0, StatsMode::Exact};
  EXPECT_DOUBLE_EQ(delta_term(0.0, 1.0, 10, st, 1.5, 0.5), 1.5 * 1.5 * 0.5 * 0.5);
  EXPECT_DOUBLE_EQ(delta_term(1.0, 1.0, 4, zero, 1.0, 1.0), 9.0);
}

TEST(DeltaTerm, PositiveOnRandomInputs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double n1 = 100 * u(rng);
    const double n2 = 100 * u(rng);
    const double d12 = (2 * u(rng) - 1) * std::sqrt(n1 * n2);
    const MeanStats st{n1, n2, d12, StatsMode::Exact};
    EXPECT_GT(delta_term(10 * u(rng), 0.01 + 10 * u(rng), 1 + 1000 * u(rng), st, 0.1 + 3 * u(rng),
                         0.1 + 3 * u(rng)),
              0.0);
  }
}

TEST(DeltaTerm, MatchesPrintedFormAtUnitNoise) {
  const MeanStats st{7.0, 5.0, 2.0, StatsMode::Exact};
  const double abn = 0.7 * 0.3 * 10;
  const double k = abn / 4;
  const double printed = k * k * (4 + 35 - 4 + 2 * 12) + k * (4 + 12) + 1;
  EXPECT_NEAR(delta_term(0.7, 0.3, 10, st, 1.0, 1.0), printed, 1e-12);
}

TEST(SgdObjective, ZeroAlpha) {
  const MeanStats st = concentrated_model1_stats(100, 0.1);
  for (double beta : {1e-3, 1.0, 50.0}) EXPECT_EQ(sgd_objective(0.0, beta, st, 50, 100, 1.0, 1.0), 0.0);
}

TEST(SgdObjective, MatchesReferenceFormula) {
  const MeanStats st{1, 1, 0, StatsMode::Exact};
  EXPECT_NEAR(sgd_objective(1.0, 1.0, st, 2, 2, 1.0, 1.0), 1.05, 1e-14);
  EXPECT_NEAR(sgd_objective(1.0, 1.0, st, 2, 2, 1.0, 1.0),
              static_cast<double>(sgd_reference(1, 1, 2, 2, 1, 1, 0)), 1e-14);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a = 0.01 + 3 * u(rng);
    const double b = 0.001 + u(rng);
    const double n = 10 + 500 * u(rng);
    const double d = 2 * n;
    const MeanStats s = concentrated_model1_stats(static_cast<Eigen::Index>(d), 0.05 + 0.9 * u(rng));
    const long double ref = sgd_reference(a, b, n, d, s.norm1_sq, s.norm2_sq, s.dot12);
    EXPECT_NEAR(sgd_objective(a, b, s, n, d, 1.0, 1.0), static_cast<double>(ref),
                1e-9 * std::max(1.0, std::fabs(static_cast<double>(ref))));
  }
}

TEST(SgdObjective, SymmetricUnderMeanSwap) {
  const MeanStats a{900, 1100, 950, StatsMode::Exact};
  const MeanStats b{1100, 900, 950, StatsMode::Exact};
  EXPECT_NEAR(sgd_objective(0.4, 0.05, a, 300, 1000, 1.2, 1.2), sgd_objective(0.4, 0.05, b, 300, 1000, 1.2, 1.2),
              1e-10);
}

// The objective is the minimum of a d-dimensional quadratic; solve that directly.
TEST(SgdObjective, EqualsDirectQuadraticMinimum) {
  Rng rng = make_rng(3, Stream::Oracle);
  const int d = 6;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd m1 = standard_normal(rng, d);
    const Eigen::VectorXd m2 = standard_normal(rng, d);
    const double s1 = 0.6 + 0.3 * trial;
    const double s2 = 1.7 - 0.2 * trial;
    const double a = 0.7;
    const double b = 0.3;
    const double n = 10;
    const double abn = a * b * n;
    const double c = 1 + abn / 2;
    const double k = abn / 4;
    const Eigen::MatrixXd A = c * Eigen::MatrixXd::Identity(d, d) +
                              k * (m1 * m1.transpose() / (s1 * s1) + m2 * m2.transpose() / (s2 * s2));
    const Eigen::VectorXd lin = -2 * k * m1 / (s1 * s1) + 2 * k * m2 / (s2 * s2);
    const Eigen::VectorXd w = -0.5 * A.ldlt().solve(lin);
    const double quad_min = w.dot(A * w) + lin.dot(w) + k / (s1 * s1) + k / (s2 * s2);
    const double expected = a / (2 * b) - a * a * d / (4 * c) + quad_min;

    const MeanStats st = stats_of(m1, m2);
    EXPECT_NEAR(sgd_objective(a, b, st, n, d, s1, s2), expected, 1e-10);

    const SgdStatistics ss = sgd_statistics(a, b, st, n, d, s1, s2);
    const Eigen::VectorXd mean_part = ss.c1 * m1 - ss.c2 * m2;
    EXPECT_LT((mean_part - w).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(ss.mu1_dot, m1.dot(w), 1e-10);
    EXPECT_NEAR(ss.mu2_dot, m2.dot(w), 1e-10);
    EXPECT_NEAR(ss.norm_w_sq, a * a * d / ((2 + abn) * (2 + abn)) + w.squaredNorm(), 1e-10);
  }
}

TEST(SgdPredict, TableCells) {
  EXPECT_NEAR(sgd_predict(concentrated_model1_stats(1000, 0.1), 500, 1000, 1, 1).error, 0.202, 0.02);
  EXPECT_NEAR(sgd_predict(concentrated_model1_stats(1000, 0.1), 100, 1000, 1, 1).error, 0.253, 0.02);
  EXPECT_NEAR(sgd_predict(concentrated_model2_stats(1000, 2.0), 100, 1000, 1, 1).error, 0.155, 0.02);
}

TEST(SgdPredict, DotProductIdentities) {
  for (double s : {1.0, 1.4}) {
    const auto p = sgd_predict(concentrated_model1_stats(1000, 0.1), 500, 1000, s, s);
    const double abn = p.alpha * p.beta * 500;
    EXPECT_NEAR(p.gamma1, abn / (2 * s) * (p.mu1_dot - 1), 1e-12 * std::max(1.0, std::fabs(p.gamma1)));
    EXPECT_NEAR(p.gamma2, abn / (2 * s) * (p.mu2_dot + 1), 1e-12 * std::max(1.0, std::fabs(p.gamma2)));
    EXPECT_GT(p.norm_w_sq, 0.0);
  }
}

TEST(SgdPredict, ErrorDecreasesWithSampleSize) {
  const MeanStats st = concentrated_model1_stats(1000, 0.1);
  const double e100 = sgd_predict(st, 100, 1000, 1, 1).error;
  const double e200 = sgd_predict(st, 200, 1000, 1, 1).error;
  const double e500 = sgd_predict(st, 500, 1000, 1, 1).error;
  EXPECT_GT(e100, e200);
  EXPECT_GT(e200, e500);
}

// ŵ = −αg/(2+αβn) + c1μ1 − c2μ2 sampled directly.
TEST(SgdPredict, ClosedFormMatchesMonteCarlo) {
  const auto model = make_model1(8, 0.5, 1.0, 5);
  const MeanStats st = mean_stats(model, StatsMode::Exact);
  const auto p = sgd_predict(st, 4, 8, 1, 1);
  const SgdStatistics ss = sgd_statistics(p.alpha, p.beta, st, 4, 8, 1, 1);
  const Eigen::VectorXd centre = ss.c1 * model.mu1() - ss.c2 * model.mu2();
  const double scale = p.alpha / (2 + p.alpha * p.beta * 4);

  Rng rng = make_rng(6, Stream::Oracle);
  const int draws = 100000;
  double s_m1 = 0, s_m1sq = 0, s_n = 0, s_nsq = 0;
  for (int k = 0; k < draws; ++k) {
    const Eigen::VectorXd w = centre - scale * standard_normal(rng, 8);
    const double a = model.mu1().dot(w);
    const double b = w.squaredNorm();
    s_m1 += a;
    s_m1sq += a * a;
    s_n += b;
    s_nsq += b * b;
  }
  const double mean_m1 = s_m1 / draws;
  const double se_m1 = std::sqrt((s_m1sq / draws - mean_m1 * mean_m1) / draws);
  const double mean_n = s_n / draws;
  const double se_n = std::sqrt((s_nsq / draws - mean_n * mean_n) / draws);
  EXPECT_NEAR(mean_m1, p.mu1_dot, 3 * se_m1);
  EXPECT_NEAR(mean_n, p.norm_w_sq, 3 * se_n);
}

TEST(SgdPredict, RegimeAndBoundary) {
  EXPECT_THROW(sgd_predict(concentrated_model1_stats(100, 0.1), 100, 100, 1, 1), RegimeError);
  SaddleConfig narrow;
  narrow.alpha_range = {1e-3, 1e-2};
  try {
    sgd_predict(concentrated_model1_stats(1000, 0.1), 500, 1000, 1, 1, narrow);
    FAIL() << "expected BoundaryError";
  } catch (const BoundaryError& e) {
    EXPECT_EQ(e.axis(), 0u);
    EXPECT_EQ(e.axis_name(), "alpha");
  }
}

TEST(L1Model1Objective, Examples) {
  EXPECT_NEAR(l1_model1_objective(1, 1, 0, 1, 1, 0.3), 0.4246602, 1e-7);
  const double expect = 0.5 - 2 * 0.15865525393145707 + std::exp(-0.5) / std::sqrt(2 * std::numbers::pi);
  EXPECT_NEAR(l1_model1_objective(1, 1, 0, 1, 1, 0.7), expect, 1e-14);
  EXPECT_THROW(l1_model1_objective(0, 1, 0, 1, 1, 0.1), ParameterError);
  EXPECT_THROW(l1_model1_objective(1, 0, 0, 1, 1, 0.1), ParameterError);
}

TEST(L1Model1Objective, ConcaveInGamma) {
  const double h = 0.05;
  for (double g = -30; g <= 0; g += 0.5) {
    const double f0 = l1_model1_objective(1.3, 0.05, g - h, 500, 1000, 0.1);
    const double f1 = l1_model1_objective(1.3, 0.05, g, 500, 1000, 0.1);
    const double f2 = l1_model1_objective(1.3, 0.05, g + h, 500, 1000, 0.1);
    EXPECT_LT(f0 - 2 * f1 + f2, 0.0) << "gamma " << g;
  }
}

TEST(L1Model1Objective, SmallEpsilonLimit) {
  const double a = 0.8, b = 0.2, n = 50, d = 100;
  const double core = a / (2 * b) - d * truncated_square_moment(a) / (2 * a * b * n);
  for (double g : {-3.0, -1.0, 0.5}) {
    const double expect = core - 2 * g * g / (a * b * n) - 2 * g;
    EXPECT_NEAR(l1_model1_objective(a, b, g, n, d, 1e-9), expect, 1e-9);
  }
}

TEST(L1Model1Predict, TableCells) {
  const auto p = l1_model1_predict(500, 1000, 0.1);
  EXPECT_NEAR(p.error, 0.242, 0.025);
  EXPECT_DOUBLE_EQ(p.gamma2, -p.gamma1);
  const double abn = p.alpha * p.beta * 500;
  EXPECT_NEAR(p.gamma1, abn / 2 * (p.mu1_dot - 1), 1e-12 * std::fabs(p.gamma1));
  EXPECT_NEAR(p.gamma2, abn / 2 * (p.mu2_dot + 1), 1e-12 * std::fabs(p.gamma2));
  EXPECT_GT(p.norm_w_sq, 0.0);
  EXPECT_NEAR(l1_model1_predict(100, 1000, 0.1).error, 0.370, 0.025);
  EXPECT_NEAR(l1_model1_predict(1000, 10000, 0.1).error, 0.023, 0.01);
}

TEST(L1Model2Objective, Examples) {
  EXPECT_NEAR(l1_model2_objective(1, 1, 0, 1, 2, 2, 0), 0.4246602, 1e-7);
  // Inside |2γ1t + αg1| ≤ 1 the hinge term is exactly zero.
  const double a = 0.9, b = 0.1, n = 100, d = 1000, t = 2;
  const double base = a / (2 * b) - (d - 1) * truncated_square_moment(a) / (2 * a * b * n);
  for (double g : {-0.2, 0.0, 0.1}) {
    EXPECT_NEAR(l1_model2_objective(a, b, g, n, d, t, 0.3), base - 2 * g * g / (a * b * n) - 2 * g, 1e-12);
  }
  EXPECT_THROW(l1_model2_objective(0, 1, 0, 1, 2, 2, 0), ParameterError);
}

TEST(L1Model2Objective, ContinuousAcrossHinge) {
  const double a = 0.9, b = 0.1, n = 100, d = 1000, t = 2, g1 = 0.4;
  // |2γt + αg1| = 1 at γ = (1 − αg1)/(2t).
  const double kink = (1 - a * g1) / (2 * t);
  const double eps = 1e-10;
  const double left = l1_model2_objective(a, b, kink - eps, n, d, t, g1);
  const double right = l1_model2_objective(a, b, kink + eps, n, d, t, g1);
  EXPECT_LT(std::fabs(left - right), 1e-8);
}

TEST(L1Model2Predict, TableCells) {
  const auto p = l1_model2_predict(100, 1000, 2.0, 5, 0);
  EXPECT_NEAR(p.error, 0.056, 0.02);
  ASSERT_EQ(p.draw_errors.size(), 5u);
  ASSERT_EQ(p.draw_g1.size(), 5u);
  double mean = 0;
  for (double e : p.draw_errors) mean += e / 5;
  EXPECT_DOUBLE_EQ(mean, p.error);
  EXPECT_DOUBLE_EQ(p.gamma2, -p.gamma1);
  EXPECT_NEAR(l1_model2_predict(500, 10000, 2.0, 5, 0).error, 0.048, 0.015);
  EXPECT_NEAR(l1_model2_predict(1000, 10000, 2.0, 5, 0).error, 0.045, 0.015);
}

TEST(L1Model2Predict, DeterministicGivenSeed) {
  const auto a = l1_model2_predict(100, 1000, 2.0, 3, 7);
  const auto b = l1_model2_predict(100, 1000, 2.0, 3, 7);
  EXPECT_EQ(a.error, b.error);
  EXPECT_EQ(a.draw_g1, b.draw_g1);
  EXPECT_THROW(l1_model2_predict(100, 1000, 2.0, 0, 7), ParameterError);
}

TEST(L1SampledObjective, ZeroGammaAndNoise) {
  const auto m = make_model1(50, 0.1, 1.0, 1);
  EXPECT_DOUBLE_EQ(l1_sampled_objective(0.8, 0.25, 0, 0, m, 20, Eigen::VectorXd::Zero(50)), 1.6);
}

TEST(L1SampledObjective, MatchesConcentratedForm) {
  const Eigen::Index d = 2000;
  const double n = 1000;
  const auto m = make_model1(d, 0.1, 1.0, 2);
  std::mt19937_64 prng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double a = 0.5 + u(prng), b = 0.03 + 0.07 * u(prng), g = -10 + 8 * u(prng);
    Rng rng = make_rng(4, Stream::Oracle, k);
    double avg = 0;
    for (int j = 0; j < 10; ++j) avg += l1_sampled_objective(a, b, g, -g, m, n, standard_normal(rng, d)) / 10;
    const double conc = l1_model1_objective(a, b, g, n, static_cast<double>(d), 0.1);
    EXPECT_LT(std::fabs(avg - conc), 0.02 * std::fabs(conc));
  }
}

TEST(L1SampledObjective, SwapSymmetry) {
  const Eigen::Index d = 500;
  const auto m = make_model1(d, 0.2, 1.0, 5);
  const MixtureModel swapped(m.mu2(), m.mu1(), 1.0, 1.0);
  Rng rng = make_rng(6, Stream::Oracle);
  for (int j = 0; j < 20; ++j) {
    const Eigen::VectorXd g = standard_normal(rng, d);
    const double a = l1_sampled_objective(1.1, 0.05, -3.0, 2.0, m, 200, g);
    EXPECT_NEAR(a, l1_sampled_objective(1.1, 0.05, -2.0, 3.0, swapped, 200, -g), 1e-9 * std::fabs(a));
  }
}
