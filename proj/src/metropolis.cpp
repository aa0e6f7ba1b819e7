#include "pdmp/metropolis.hpp"

#include <cmath>

namespace pdmp {

void MHConfig::validate() const {
  require(horizon > 0.0 && std::isfinite(horizon), "MHConfig: horizon must be positive");
  scheme.validate();
}

MHStepResult mh_pdmp_transition(const KineticState& z, const MHConfig& cfg, const Target& target,
                                Rng& rng, RunMetrics& metrics) {
  cfg.validate();
  require(z.x.size() == target.dim() && z.v.size() == target.dim(),
          "mh_pdmp_step: state dimension does not match target");
  require(z.gamma == 1 || z.gamma == -1, "mh_pdmp_step: gamma must be +1 or -1");
  PdmpModel model{target, cfg.kind, cfg.scheme};

  KineticState start = z.gamma == 1 ? z : flip_conjugate(z);
  start.gamma = 1;
  SimulatedPath sim = simulate_path(model, start, cfg.horizon, rng, metrics);
  KineticState end = sim.path.final_state();

  double forward = target.log_density(start.x) + sim.log_conditional;
  double backward = path_log_density(reverse_path(sim.path), model, metrics).total();
  double log_alpha = backward - forward;
  if (std::isnan(log_alpha)) log_alpha = -INFINITY;
  log_alpha = std::min(0.0, log_alpha);

  ++metrics.mh_proposals;
  MHStepResult result;
  result.log_alpha = log_alpha;
  if (std::log(uniform_open(rng)) < log_alpha) {
    ++metrics.mh_accepts;
    KineticState out = z.gamma == 1 ? end : flip_conjugate(end);
    out.gamma = -z.gamma;
    result.state = std::move(out);
    result.accepted = true;
  } else {
    result.state = z;
  }
  result.proposal = std::move(sim.path);
  return result;
}

std::vector<Vec> run_mh_chain(KineticState start, const MHSamplerConfig& cfg,
                              const Target& target, std::size_t steps, Rng& rng,
                              RunMetrics& metrics) {
  require(cfg.refresh_probability >= 0.0 && cfg.refresh_probability <= 1.0,
          "run_mh_chain: refresh probability must lie in [0, 1]");
  std::vector<Vec> samples;
  samples.reserve(steps);
  KineticState z = std::move(start);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t s = 0; s < steps; ++s) {
    if (cfg.refresh_probability > 0.0 && unif(rng) < cfg.refresh_probability) {
      z.v = refresh_velocity(cfg.kernel.kind, target.dim(), rng);
    }
    z = mh_pdmp_step(z, cfg.kernel, target, rng, metrics);
    ++metrics.steps;
    samples.push_back(z.x);
  }
  return samples;
}

}  // namespace pdmp
