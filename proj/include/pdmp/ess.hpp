#pragma once

#include <span>

namespace pdmp {

struct EssEstimate {
  double value = 0.0;
  bool degenerate = false;  // constant chain
};

/**
 * @brief Effective sample size by Geyer's initial positive sequence.
 *
 * Autocovariances are summed in adjacent pairs (lags 2k, 2k+1) until the
 * first non-positive pair; ESS = n / (-1 + 2 * sum of pair sums / gamma_0).
 * Requires at least 10 values.
 */
EssEstimate ess(std::span<const double> chain);

}  // namespace pdmp
