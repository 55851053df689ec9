#include <gtest/gtest.h>

#include <cmath>

#include "smd/errors.hpp"
#include "smd/model.hpp"

using namespace smd;

TEST(Model1, AngleConcentratesAroundArcsinEpsilon) {
  double mean_angle = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = make_model1(1000, 0.1, 1.0, seed);
    const double c = m.mu1().dot(m.mu2()) / (m.mu1().norm() * m.mu2().norm());
    mean_angle += std::acos(c) / 100.0;
  }
  EXPECT_NEAR(mean_angle, std::asin(0.1), 0.01);
}

TEST(Model1, NormPerCoordinateNearOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = make_model1(1000, 0.1, 1.0, seed);
    const double r = m.mu1().squaredNorm() / 1000.0;
    EXPECT_GE(r, 0.85);
    EXPECT_LE(r, 1.15);
  }
}

TEST(Model1, TinyEpsilonGivesEqualMeans) {
  const auto m = make_model1(50, 1e-9, 1.0, 3);
  EXPECT_LT((m.mu1() - m.mu2()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Model1, RejectsBadArguments) {
  EXPECT_THROW(make_model1(1000, 0.0, 1.0, 0), ParameterError);
  EXPECT_THROW(make_model1(1000, 1.0, 1.0, 0), ParameterError);
  EXPECT_THROW(make_model1(1, 0.1, 1.0, 0), ParameterError);
  EXPECT_THROW(make_model1(10, 0.1, 0.0, 0), ParameterError);
}

TEST(Model2, DifferenceIsOneCoordinate) {
  const auto m = make_model2(5, 2.0, 1.0, 7);
  const Eigen::VectorXd diff = m.mu1() - m.mu2();
  EXPECT_DOUBLE_EQ(diff[0], 4.0);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(diff[i], 0.0);
  EXPECT_EQ(m.mu1()[0] + m.mu2()[0], 0.0);
}

TEST(Model2, DotProductConcentrates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = make_model2(1000, 2.0, 1.0, seed);
    // Sum of 999 squared normals: standard deviation √(2·999).
    EXPECT_NEAR(m.mu1().dot(m.mu2()), 995.0, 3.0 * std::sqrt(2.0 * 999.0));
    EXPECT_EQ(((m.mu1() - m.mu2()).array() != 0.0).count(), 1);
  }
}

TEST(Model2, RejectsNonPositiveT) { EXPECT_THROW(make_model2(10, 0.0, 1.0, 0), ParameterError); }

TEST(Model2, InvariantCheckedOnConstruction) {
  Eigen::VectorXd a = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  a[0] = 2.0;
  b[0] = -2.0;
  EXPECT_NO_THROW(MixtureModel(a, b, 1.0, 1.0, Model2Kind{2.0}));
  b[2] = 0.5;
  EXPECT_THROW(MixtureModel(a, b, 1.0, 1.0, Model2Kind{2.0}), ParameterError);
}

TEST(Mixture, RejectsMismatchedOrEmptyMeans) {
  EXPECT_THROW(MixtureModel(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(4), 1.0, 1.0), ParameterError);
  EXPECT_THROW(MixtureModel(Eigen::VectorXd(), Eigen::VectorXd(), 1.0, 1.0), ParameterError);
}

TEST(Dataset, LabelLayout) {
  const auto m = make_model1(10, 0.1, 1.0, 1);
  const auto data = sample_dataset(m, 4, 2);
  ASSERT_EQ(data.y.size(), 4);
  EXPECT_EQ(data.y[0], 1.0);
  EXPECT_EQ(data.y[1], 1.0);
  EXPECT_EQ(data.y[2], -1.0);
  EXPECT_EQ(data.y[3], -1.0);
  EXPECT_EQ(data.X.rows(), 10);
  EXPECT_EQ(data.X.cols(), 4);
}

TEST(Dataset, NoiselessColumnsEqualMeans) {
  const auto base = make_model1(8, 0.3, 1.0, 4);
  const auto m = MixtureModel::noiseless(base.mu1(), base.mu2());
  const auto data = sample_dataset(m, 6, 5);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(data.X.col(i), m.mu1());
  for (int i = 3; i < 6; ++i) EXPECT_EQ(data.X.col(i), m.mu2());
}

TEST(Dataset, ClassMeansFollowLawOfLargeNumbers) {
  const auto m = make_model1(1000, 0.1, 1.0, 11);
  const auto data = sample_dataset(m, 500, 12);
  const Eigen::VectorXd mean1 = data.X.leftCols(250).rowwise().mean();
  const double avg_dev = (mean1 - m.mu1()).cwiseAbs().mean();
  EXPECT_LT(avg_dev, 3.0 / std::sqrt(250.0));
}

TEST(Dataset, RegimeAndParityChecks) {
  const auto m = make_model1(10, 0.1, 1.0, 1);
  EXPECT_THROW(sample_dataset(m, 3, 0), ParameterError);
  EXPECT_THROW(sample_dataset(m, 10, 0), RegimeError);
  EXPECT_THROW(sample_dataset(m, 12, 0), RegimeError);
}

TEST(Dataset, Reproducible) {
  const auto a = make_model2(50, 2.0, 1.0, 9);
  const auto b = make_model2(50, 2.0, 1.0, 9);
  EXPECT_EQ(a.mu1(), b.mu1());
  const auto da = sample_dataset(a, 10, 3);
  const auto db = sample_dataset(b, 10, 3);
  EXPECT_EQ(da.X, db.X);
  const auto dc = sample_dataset(a, 10, 4);
  EXPECT_NE(da.X, dc.X);
}

TEST(MeanStats, ConcentratedValues) {
  const auto s1 = concentrated_model1_stats(1000, 0.1);
  EXPECT_DOUBLE_EQ(s1.norm1_sq, 1000.0);
  EXPECT_DOUBLE_EQ(s1.norm2_sq, 1000.0);
  EXPECT_NEAR(s1.dot12, 994.987, 1e-3);
  const auto s2 = concentrated_model2_stats(1000, 2.0);
  EXPECT_DOUBLE_EQ(s2.norm1_sq, 1003.0);
  EXPECT_DOUBLE_EQ(s2.norm2_sq, 1003.0);
  EXPECT_DOUBLE_EQ(s2.dot12, 995.0);

  EXPECT_DOUBLE_EQ(mean_stats(make_model1(1000, 0.1, 1.0, 0), StatsMode::Concentrated).dot12, s1.dot12);
  EXPECT_DOUBLE_EQ(mean_stats(make_model2(1000, 2.0, 1.0, 0), StatsMode::Concentrated).dot12, 995.0);
}

TEST(MeanStats, ExactSatisfiesCauchySchwarz) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = mean_stats(make_model1(200, 0.5, 1.0, seed), StatsMode::Exact);
    EXPECT_LE(s.dot12 * s.dot12, s.norm1_sq * s.norm2_sq);
    EXPECT_EQ(s.mode, StatsMode::Exact);
  }
}

TEST(MeanStats, ExactNearConcentratedForModel1) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto e = mean_stats(make_model1(1000, 0.1, 1.0, seed), StatsMode::Exact);
    const auto c = concentrated_model1_stats(1000, 0.1);
    EXPECT_NEAR(e.norm1_sq, c.norm1_sq, 5.0 * std::sqrt(2.0 * 1000.0));
    EXPECT_NEAR(e.dot12, c.dot12, 5.0 * std::sqrt(2.0 * 1000.0));
  }
}

TEST(MeanStats, ConcentratedOnCustomIsUnsupported) {
  const MixtureModel m(Eigen::VectorXd::Ones(4), -Eigen::VectorXd::Ones(4), 1.0, 1.0);
  EXPECT_THROW(mean_stats(m, StatsMode::Concentrated), UnsupportedError);
}
