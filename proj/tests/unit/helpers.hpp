#pragma once

#include <cmath>
#include <vector>

#include "pdmp/common.hpp"

namespace test {

inline pdmp::Vec random_vec(int d, pdmp::Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  pdmp::Vec v(d);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

}  // namespace test
