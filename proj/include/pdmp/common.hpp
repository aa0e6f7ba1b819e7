#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pdmp {

/// Dense column vector used for positions, velocities and gradients.
using Vec = Eigen::VectorXd;

/// Random engine used by every sampler. One instance per chain.
using Rng = std::mt19937_64;

/// Raised when a caller breaks an operation's precondition
/// (dimension mismatch, unordered skeleton, invalid parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a BPS reflection is requested at a point where the
/// gradient vanishes, so the reflection normal is undefined.
class DegenerateGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when trajectory growth exceeds its event or time budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw ContractViolation(message);
  }
}

/// Uniform draw on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  while (u <= 0.0) {
    u = unif(rng);
  }
  return u;
}

/// Standard exponential draw.
inline double standard_exponential(Rng& rng) {
  return -std::log(uniform_open(rng));
}

/**
 * @brief Derive an independent 64-bit stream seed from a root seed and a
 * stream index.
 *
 * SplitMix64 finalisation of (root, index). Streams for different indices
 * never depend on how many other streams exist.
 */
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pdmp
