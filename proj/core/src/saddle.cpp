#include "smd/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smd/errors.hpp"

namespace smd {

namespace {

double to_grid(const SaddleAxis& a, double x) { return a.scale == AxisScale::Log ? std::log(x) : x; }
double from_grid(const SaddleAxis& a, double u) { return a.scale == AxisScale::Log ? std::exp(u) : u; }

struct Level {
  double value;
  std::vector<double> coords;  // this level and everything inside it
};

class NestedGrid {
 public:
  NestedGrid(const SaddleObjective& f, std::span<const SaddleAxis> axes, int points)
      : f_(f), axes_(axes), points_(points), point_(axes.size()) {}

  Level solve(std::size_t level, const std::vector<Interval>& box) {
    const SaddleAxis& axis = axes_[level];
    const bool last = level + 1 == axes_.size();
    const Interval r = box[level];
    Level best{0.0, {}};
    bool have = false;
    for (int k = 0; k < points_; ++k) {
      const double u = r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(points_ - 1);
      point_[level] = from_grid(axis, u);
      double v;
      std::vector<double> inner;
      if (last) {
        v = f_(point_);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "objective is not finite at (";
          for (std::size_t i = 0; i < point_.size(); ++i) os << (i ? ", " : "") << point_[i];
          os << ")";
          throw NumericalError(os.str(), point_);
        }
      } else {
        Level sub = solve(level + 1, box);
        v = sub.value;
        inner = std::move(sub.coords);
      }
      const bool better = axis.direction == Direction::Max ? v > best.value : v < best.value;
      if (!have || better) {
        have = true;
        best.value = v;
        best.coords.assign(1, u);
        best.coords.insert(best.coords.end(), inner.begin(), inner.end());
      }
    }
    return best;
  }

 private:
  const SaddleObjective& f_;
  std::span<const SaddleAxis> axes_;
  int points_;
  std::vector<double> point_;
};

}  // namespace

void SaddleConfig::validate() const {
  auto check = [](const Interval& r, const char* name, bool positive) {
    if (!(r.lo < r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
      throw ParameterError(std::string("saddle range for ") + name + " is empty");
    }
    if (positive && !(r.lo > 0.0)) {
      throw ParameterError(std::string("saddle range for ") + name + " must be positive");
    }
  };
  check(alpha_range, "alpha", true);
  check(beta_range, "beta", true);
  check(gamma_range, "gamma", false);
  if (grid_points < 8) throw ParameterError("saddle grid needs at least 8 points per axis");
  if (refine_passes < 1) throw ParameterError("saddle solve needs at least one refinement pass");
  if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
    throw ParameterError("refine_shrink must lie in (0, 1)");
  }
}

bool SaddleResult::any_boundary() const {
  return std::any_of(on_boundary.begin(), on_boundary.end(), [](bool b) { return b; });
}

SaddleResult saddle_solve(const SaddleObjective& f, std::span<const SaddleAxis> axes,
                          const SaddleConfig& cfg) {
  if (axes.empty() || axes.size() > 4) {
    throw ParameterError("saddle_solve supports 1 to 4 axes, got " + std::to_string(axes.size()));
  }
  if (cfg.grid_points < 2) throw ParameterError("saddle grid needs at least 2 points per axis");
  if (cfg.refine_passes < 0 || !(cfg.refine_shrink > 0.0 && cfg.refine_shrink < 1.0)) {
    throw ParameterError("invalid saddle refinement settings");
  }

  std::vector<Interval> full;
  for (const SaddleAxis& a : axes) {
    if (!(a.range.lo < a.range.hi)) throw ParameterError("empty range for axis " + a.name);
    if (a.scale == AxisScale::Log && !(a.range.lo > 0.0)) {
      throw ParameterError("log axis " + a.name + " needs a positive range");
    }
    full.push_back({to_grid(a, a.range.lo), to_grid(a, a.range.hi)});
  }

  NestedGrid grid(f, axes, cfg.grid_points);
  std::vector<Interval> box = full;
  Level best = grid.solve(0, box);

  for (int pass = 0; pass < cfg.refine_passes; ++pass) {
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const double width = (box[i].hi - box[i].lo) * cfg.refine_shrink;
      double lo = best.coords[i] - 0.5 * width;
      double hi = best.coords[i] + 0.5 * width;
      if (lo < full[i].lo) {
        hi += full[i].lo - lo;
        lo = full[i].lo;
      }
      if (hi > full[i].hi) {
        lo -= hi - full[i].hi;
        hi = full[i].hi;
      }
      box[i] = {std::max(lo, full[i].lo), hi};
    }
    best = grid.solve(0, box);
  }

  SaddleResult out;
  out.value = best.value;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    out.point.push_back(from_grid(axes[i], best.coords[i]));
    const double tol = 1e-9 * (full[i].hi - full[i].lo);
    out.on_boundary.push_back(best.coords[i] <= full[i].lo + tol || best.coords[i] >= full[i].hi - tol);
  }
  return out;
}

}  // namespace smd
