#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "pdmp/common.hpp"
#include "pdmp/metrics.hpp"

namespace pdmp {

/// Standard normal N(0, I_d).
struct StandardGaussian {
  int dim;
};

/// pi_sigma(x) = sigma^d * phi(sigma x): the standard normal rescaled by 1/sigma.
struct ScaledGaussian {
  int dim;
  double sigma;
};

/// Neal's 2-d funnel: x1 ~ N(0, a^2), x2 | x1 ~ N(0, exp(x1 / b)) where
/// exp(x1 / b) is the variance.
struct Funnel {
  double a;
  double b;
};

/**
 * @brief A differentiable log-density.
 *
 * Immutable value type; safe to share across threads. Every call to
 * grad_log_density() increments the caller's gradient counter by one.
 */
class Target {
 public:
  using Family = std::variant<StandardGaussian, ScaledGaussian, Funnel>;

  static Target gaussian(int dim);
  static Target scaled_gaussian(int dim, double sigma);
  static Target funnel(double a, double b);

  /// Parses "gaussian:d=<int>", "scaled-gaussian:d=<int>,sigma=<real>" or
  /// "funnel:a=<real>,b=<real>". Throws ContractViolation on bad input.
  static Target parse(std::string_view spec);

  int dim() const { return dim_; }
  const Family& family() const { return family_; }
  std::string describe() const;

  /// log pi(x) including the normalising constant.
  double log_density(const Vec& x) const;

  /// Gradient of log pi at x. Counts one gradient evaluation.
  Vec grad_log_density(const Vec& x, RunMetrics& metrics) const;

 private:
  explicit Target(Family family);

  Family family_;
  int dim_;
};

}  // namespace pdmp
