#include "pdmp/ess.hpp"

#include <cmath>
#include <vector>

#include "pdmp/common.hpp"

namespace pdmp {

EssEstimate ess(std::span<const double> chain) {
  require(chain.size() >= 10, "ess: chain must have at least 10 values");
  const std::size_t n = chain.size();
  double mean = 0.0;
  for (double x : chain) mean += x;
  mean /= static_cast<double>(n);

  std::vector<double> centred(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    centred[i] = chain[i] - mean;
    scale = std::max(scale, std::abs(centred[i]));
  }
  if (scale == 0.0 || scale <= 1e-14 * std::abs(mean)) {
    return EssEstimate{0.0, true};
  }
  for (double& c : centred) c /= scale;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    return s / static_cast<double>(n);
  };

  const double gamma0 = autocov(0);
  double pair_total = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = autocov(2 * k) + autocov(2 * k + 1);
    if (!(pair > 0.0)) break;
    pair_total += pair;
  }
  double tau = -1.0 + 2.0 * pair_total / gamma0;
  if (!(tau > 0.0)) tau = 1.0 / static_cast<double>(n);
  return EssEstimate{static_cast<double>(n) / tau, false};
}

}  // namespace pdmp
