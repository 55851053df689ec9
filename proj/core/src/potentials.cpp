#include "smd/potentials.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "smd/errors.hpp"

namespace smd {

namespace {

constexpr int kMaxIntegerExponent = 64;
constexpr Eigen::Index kChunk = 8;

// |x|^e for e > 0 with an exact zero at the origin.
inline double abs_pow(double x, double e) noexcept {
  const double a = std::fabs(x);
  if (a == 0.0) return 0.0;
  return std::exp(e * std::log(a));
}

int detect_integer_exponent(double q) {
  const double r = 1.0 / (q - 1.0);
  const double rounded = std::round(r);
  if (rounded >= 1.0 && rounded <= kMaxIntegerExponent && std::fabs(r - rounded) < 1e-9 * rounded) {
    return static_cast<int>(rounded);
  }
  return 0;
}

// out[j] = sign(z[j]) |z[j]|^k for j < len (len ≤ kChunk).
inline void signed_int_pow(const double* z, double* out, Eigen::Index len, int k) noexcept {
  double base[kChunk];
  double acc[kChunk];
  for (Eigen::Index j = 0; j < len; ++j) {
    base[j] = std::fabs(z[j]);
    acc[j] = 1.0;
  }
  for (int e = k; e != 0; e >>= 1) {
    if (e & 1) {
      for (Eigen::Index j = 0; j < len; ++j) acc[j] *= base[j];
    }
    for (Eigen::Index j = 0; j < len; ++j) base[j] *= base[j];
  }
  for (Eigen::Index j = 0; j < len; ++j) out[j] = std::copysign(acc[j], z[j]);
}

std::string format_q(double q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

Potential::Potential(double q, std::string label)
    : q_(q),
      forward_exp_(q - 1.0),
      inverse_exp_(1.0 / (q - 1.0)),
      int_inverse_exp_(detect_integer_exponent(q)),
      label_(std::move(label)) {}

Potential Potential::qnorm(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw ParameterError("q-norm potential requires finite q > 1, got " + format_q(q));
  }
  return Potential(q, q == 2.0 ? std::string("l2") : "qnorm:" + format_q(q));
}

Potential Potential::l1(double q) {
  Potential p = qnorm(q);
  p.label_ = "l1";
  return p;
}

Potential Potential::parse(std::string_view spec) {
  if (spec == "l2") return l2();
  if (spec == "l1") return l1();
  constexpr std::string_view prefix = "qnorm:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string_view num = spec.substr(prefix.size());
    double q = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), q);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ParameterError("bad q in potential spec '" + std::string(spec) + "'");
    }
    Potential p = qnorm(q);
    p.label_ = std::string(spec);
    return p;
  }
  throw ParameterError("unknown potential '" + std::string(spec) +
                       "' (expected l1, l2 or qnorm:<q>)");
}

double Potential::value(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (is_euclidean()) return 0.5 * w.squaredNorm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += abs_pow(w[i], q_);
  return s / q_;
}

double Potential::mirror(double w) const noexcept {
  if (is_euclidean()) return w;
  return std::copysign(abs_pow(w, forward_exp_), w);
}

double Potential::inverse_mirror(double z) const noexcept {
  if (int_inverse_exp_ > 0) {
    double out = 0.0;
    signed_int_pow(&z, &out, 1, int_inverse_exp_);
    return out;
  }
  return std::copysign(abs_pow(z, inverse_exp_), z);
}

void Potential::mirror(const Eigen::Ref<const Eigen::VectorXd>& w,
                       Eigen::Ref<Eigen::VectorXd> out) const {
  if (w.size() != out.size()) throw ParameterError("mirror: length mismatch");
  if (is_euclidean()) {
    out = w;
    return;
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) out[i] = mirror(w[i]);
}

void Potential::inverse_mirror(const Eigen::Ref<const Eigen::VectorXd>& z,
                               Eigen::Ref<Eigen::VectorXd> out) const {
  if (z.size() != out.size()) throw ParameterError("inverse mirror: length mismatch");
  if (is_euclidean()) {
    out = z;
    return;
  }
  const Eigen::Index n = z.size();
  if (int_inverse_exp_ > 0) {
    for (Eigen::Index i = 0; i < n; i += kChunk) {
      signed_int_pow(z.data() + i, out.data() + i, std::min(kChunk, n - i), int_inverse_exp_);
    }
    return;
  }
  for (Eigen::Index i = 0; i < n; ++i) out[i] = std::copysign(abs_pow(z[i], inverse_exp_), z[i]);
}

void Potential::mirror_step(double scale, const double* x, double* z, double* w,
                            Eigen::Index n) const noexcept {
  if (is_euclidean()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      z[i] += scale * x[i];
      w[i] = z[i];
    }
    return;
  }
  if (int_inverse_exp_ > 0) {
    for (Eigen::Index i = 0; i < n; i += kChunk) {
      const Eigen::Index len = std::min(kChunk, n - i);
      for (Eigen::Index j = 0; j < len; ++j) z[i + j] += scale * x[i + j];
      signed_int_pow(z + i, w + i, len, int_inverse_exp_);
    }
    return;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    z[i] += scale * x[i];
    w[i] = std::copysign(abs_pow(z[i], inverse_exp_), z[i]);
  }
}

double potential_value(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w) {
  return p.value(w);
}

Eigen::VectorXd mirror_map(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w) {
  Eigen::VectorXd out(w.size());
  p.mirror(w, out);
  return out;
}

Eigen::VectorXd inverse_mirror_map(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& z) {
  Eigen::VectorXd out(z.size());
  p.inverse_mirror(z, out);
  return out;
}

double bregman(const Potential& p, const Eigen::Ref<const Eigen::VectorXd>& w,
               const Eigen::Ref<const Eigen::VectorXd>& wprime) {
  if (w.size() != wprime.size()) {
    throw ParameterError("bregman: length mismatch (" + std::to_string(w.size()) + " vs " +
                         std::to_string(wprime.size()) + ")");
  }
  if (p.is_euclidean()) return 0.5 * (w - wprime).squaredNorm();
  // Coordinatewise form keeps each term ≥ 0 up to rounding.
  double s = 0.0;
  const double q = p.q();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double a = w[i];
    const double b = wprime[i];
    const double term = abs_pow(a, q) / q - abs_pow(b, q) / q - p.mirror(b) * (a - b);
    s += std::max(term, 0.0);
  }
  return s;
}

}  // namespace smd
