#include "smd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smd/errors.hpp"
#include "smd/rng.hpp"

namespace smd {

namespace {

constexpr double kDivergenceFactor = 1e6;

}  // namespace

TrainSettings TrainSettings::defaults_for(const Potential& p) {
  TrainSettings s;
  s.max_epochs = p.q() < 1.2 ? 100'000 : 10'000;
  return s;
}

void TrainSettings::validate() const {
  if (eta && !(*eta > 0.0)) throw ParameterError("learning rate must be > 0");
  if (!(residual_tol > 0.0)) throw ParameterError("residual tolerance must be > 0");
  if (max_epochs <= 0) throw ParameterError("max_epochs must be positive");
}

double default_learning_rate(const Dataset& data, const Potential& p) {
  const double max_sq = data.X.colwise().squaredNorm().maxCoeff();
  if (!(max_sq > 0.0)) throw ParameterError("dataset has only zero feature vectors");
  return (p.q() < 2.0 ? 1.8 : 0.5) / max_sq;
}

double interpolation_residual(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (w.size() != data.d()) {
    throw ParameterError("weight length " + std::to_string(w.size()) + " does not match d=" +
                         std::to_string(data.d()));
  }
  if (data.n() == 0) return 0.0;
  return (data.X.transpose() * w - data.y).cwiseAbs().maxCoeff();
}

TrainedWeights smd_fit(const Dataset& data, const Potential& p, const TrainSettings& settings) {
  settings.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index d = data.d();
  if (n >= d) {
    throw RegimeError("smd_fit expects an over-parametrized problem (n=" + std::to_string(n) +
                      ", d=" + std::to_string(d) + ")");
  }

  TrainedWeights out;
  out.eta = settings.eta.value_or(default_learning_rate(data, p));
  out.w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d);

  const double initial = std::max(interpolation_residual(data, out.w), 1e-300);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng = make_rng(settings.seed, Stream::Train);
  out.residual_trace.reserve(std::min(settings.max_epochs, 1 << 16));

  for (int epoch = 0; epoch < settings.max_epochs; ++epoch) {
    if (settings.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double epoch_max = 0.0;
    for (const Eigen::Index j : order) {
      const auto x = data.X.col(j);
      const double e = data.y[j] - x.dot(out.w);
      epoch_max = std::max(epoch_max, std::fabs(e));
      p.mirror_step(out.eta * e, x.data(), z.data(), out.w.data(), d);
    }
    out.residual_trace.push_back(epoch_max);
    out.epochs_run = epoch + 1;

    if (!std::isfinite(epoch_max) || epoch_max > kDivergenceFactor * initial) {
      throw DivergenceError("SMD diverged at epoch " + std::to_string(epoch + 1) +
                            " (residual " + std::to_string(epoch_max) + ", eta " +
                            std::to_string(out.eta) + "); reduce the learning rate");
    }
    // The in-epoch residuals are a free proxy; confirm with an exact pass before stopping.
    if (epoch_max < settings.residual_tol &&
        interpolation_residual(data, out.w) < settings.residual_tol) {
      break;
    }
  }

  out.final_residual = interpolation_residual(data, out.w);
  out.converged = out.final_residual < settings.residual_tol;
  out.potential_value_at_w = p.value(out.w);
  return out;
}

}  // namespace smd
