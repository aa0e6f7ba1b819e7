#pragma once

#include "pdmp/path_space.hpp"

namespace pdmp {

struct MHConfig {
  double horizon = 1.0;
  DynamicsKind kind = DynamicsKind::BPS;
  ApproxScheme scheme;

  void validate() const;
};

struct MHStepResult {
  KineticState state;
  bool accepted = false;
  double log_alpha = 0.0;
  PathSkeleton proposal;  // in the forward frame of the proposal direction
};

/**
 * @brief One step of the Metropolis-adjusted approximate PDMP kernel.
 *
 * Simulates for the horizon in direction z.gamma, accepts the endpoint with
 * probability min(1, mu(z_T) p(R(w) | flip z_T) / (mu(z_0) p(w | z_0))) and
 * returns it with gamma negated; on rejection returns z unchanged.
 */
MHStepResult mh_pdmp_transition(const KineticState& z, const MHConfig& cfg, const Target& target,
                                 Rng& rng, RunMetrics& metrics);

inline KineticState mh_pdmp_step(const KineticState& z, const MHConfig& cfg, const Target& target,
                                 Rng& rng, RunMetrics& metrics) {
  return mh_pdmp_transition(z, cfg, target, rng, metrics).state;
}

/// Chain driver: before each kernel step the velocity is refreshed with
/// probability refresh_probability (BPS on rotation-symmetric targets is
/// not ergodic without it). Returns the positions after every step.
struct MHSamplerConfig {
  MHConfig kernel;
  double refresh_probability = 1.0;
};

std::vector<Vec> run_mh_chain(KineticState start, const MHSamplerConfig& cfg,
                              const Target& target, std::size_t steps, Rng& rng,
                              RunMetrics& metrics);

}  // namespace pdmp
