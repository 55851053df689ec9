#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace smd {

enum class Direction { Max, Min };
enum class AxisScale { Linear, Log };

struct Interval {
  double lo;
  double hi;
};

struct SaddleAxis {
  Direction direction;
  Interval range;
  AxisScale scale = AxisScale::Linear;
  std::string name;
};

/// Search box and resolution for the scalar saddle problems.
///
/// `gamma_range` is in units of αβn/2: the solver searches s with γ1 = (αβn/2)·s,
/// so s = μ1ᵀw − 1 at the reported point.
struct SaddleConfig {
  Interval alpha_range{1e-3, 10.0};
  Interval beta_range{1e-3, 1e3};
  Interval gamma_range{-1.25, 0.25};
  int grid_points = 64;
  int refine_passes = 8;
  double refine_shrink = 0.2;

  void validate() const;
};

struct SaddleResult {
  std::vector<double> point;
  double value = 0.0;
  std::vector<bool> on_boundary;

  bool any_boundary() const;
};

using SaddleObjective = std::function<double(std::span<const double>)>;

/// Nested grid search for max/min/max problems, outermost axis first.
///
/// For every grid value of an axis the remaining axes are solved recursively, so the
/// innermost axis is optimized for each outer grid point. After the coarse pass each of
/// `refine_passes` rounds shrinks every axis by `refine_shrink` around the incumbent
/// (clamped to the original box) and searches again. Log axes are gridded in log space.
///
/// Throws NumericalError carrying the point if the objective returns a non-finite value.
SaddleResult saddle_solve(const SaddleObjective& f, std::span<const SaddleAxis> axes,
                          const SaddleConfig& cfg);

}  // namespace smd
