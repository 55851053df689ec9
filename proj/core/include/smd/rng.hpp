#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace smd {

/// Independent random streams derived from one user seed.
enum class Stream : std::uint64_t {
  Model = 1,
  Data = 2,
  Test = 3,
  Train = 4,
  Theory = 5,
  Oracle = 6,
};

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the `index`-th generator of `stream` under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0) noexcept;

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

Eigen::VectorXd standard_normal(Rng& rng, Eigen::Index n);

}  // namespace smd
