#pragma once

#include "pdmp/targets.hpp"

namespace pdmp {

struct HMCConfig {
  double step_size = 0.1;
  int leapfrog_steps = 10;

  void validate() const;
};

struct LeapfrogResult {
  Vec x;
  Vec v;
  bool divergent = false;
};

/// Velocity-Verlet leapfrog with gradient reuse: exactly L + 1 gradient
/// evaluations. Non-finite output sets `divergent`.
LeapfrogResult leapfrog(const Target& target, const Vec& x, const Vec& v, double eps, int steps,
                        RunMetrics& metrics);

/// H(x, v) = -log pi(x) + |v|^2 / 2.
double hamiltonian(const Target& target, const Vec& x, const Vec& v);

struct HMCStepResult {
  Vec x;
  bool accepted = false;
  bool divergent = false;
};

/// Draws v ~ N(0, I), integrates and accepts with min(1, exp(-dH)).
HMCStepResult hmc_transition(const Vec& x, const HMCConfig& cfg, const Target& target, Rng& rng,
                             RunMetrics& metrics);

inline Vec hmc_step(const Vec& x, const HMCConfig& cfg, const Target& target, Rng& rng,
                    RunMetrics& metrics) {
  return hmc_transition(x, cfg, target, rng, metrics).x;
}

}  // namespace pdmp
