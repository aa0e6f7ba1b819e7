#include "pdmp/hmc.hpp"

#include <cmath>

namespace pdmp {

void HMCConfig::validate() const {
  require(step_size > 0.0 && std::isfinite(step_size), "HMCConfig: step size must be positive");
  require(leapfrog_steps >= 1, "HMCConfig: leapfrog count must be at least 1");
}

LeapfrogResult leapfrog(const Target& target, const Vec& x, const Vec& v, double eps, int steps,
                        RunMetrics& metrics) {
  require(eps > 0.0, "leapfrog: step size must be positive");
  require(steps >= 1, "leapfrog: step count must be at least 1");
  LeapfrogResult out{x, v, false};
  Vec grad = target.grad_log_density(out.x, metrics);
  for (int i = 0; i < steps; ++i) {
    out.v += 0.5 * eps * grad;
    out.x += eps * out.v;
    grad = target.grad_log_density(out.x, metrics);
    out.v += 0.5 * eps * grad;
  }
  out.divergent = !out.x.allFinite() || !out.v.allFinite();
  return out;
}

double hamiltonian(const Target& target, const Vec& x, const Vec& v) {
  return -target.log_density(x) + 0.5 * v.squaredNorm();
}

HMCStepResult hmc_transition(const Vec& x, const HMCConfig& cfg, const Target& target, Rng& rng,
                             RunMetrics& metrics) {
  cfg.validate();
  require(x.size() == target.dim(), "hmc_step: dimension mismatch");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(x.size());
  for (auto& vi : v) vi = normal(rng);

  LeapfrogResult prop = leapfrog(target, x, v, cfg.step_size, cfg.leapfrog_steps, metrics);
  double log_u = std::log(uniform_open(rng));
  ++metrics.mh_proposals;
  HMCStepResult result{x, false, prop.divergent};
  if (!prop.divergent) {
    double delta = hamiltonian(target, x, v) - hamiltonian(target, prop.x, prop.v);
    if (std::isfinite(delta) && log_u < std::min(0.0, delta)) {
      ++metrics.mh_accepts;
      result.x = std::move(prop.x);
      result.accepted = true;
    } else if (!std::isfinite(delta)) {
      result.divergent = true;
    }
  }
  return result;
}

}  // namespace pdmp
