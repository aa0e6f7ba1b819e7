#include "pdmp/kinetic.hpp"

#include <cmath>

namespace pdmp {

std::string_view to_string(DynamicsKind kind) {
  return kind == DynamicsKind::BPS ? "bps" : "zigzag";
}

DynamicsKind parse_dynamics(std::string_view name) {
  if (name == "bps") return DynamicsKind::BPS;
  if (name == "zigzag") return DynamicsKind::ZigZag;
  throw ContractViolation("unknown dynamics '" + std::string(name) + "'");
}

KineticState flow(const KineticState& z, double t) {
  KineticState out = z;
  out.x.noalias() += (z.gamma * t) * z.v;
  return out;
}

KineticState flip_conjugate(const KineticState& z) {
  return KineticState{z.x, -z.v, z.gamma};
}

void signed_rates(DynamicsKind kind, const Vec& grad, const Vec& v, int gamma,
                  std::span<double> out) {
  if (kind == DynamicsKind::BPS) {
    out[0] = -gamma * grad.dot(v);
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[static_cast<std::size_t>(i)] = -gamma * v[i] * grad[i];
  }
}

double event_rate(DynamicsKind kind, const Target& target, const KineticState& z,
                  std::size_t channel, RunMetrics& metrics) {
  require(channel < channel_count(kind, z.dim()), "event_rate: channel out of range");
  Vec grad = target.grad_log_density(z.x, metrics);
  double rate = kind == DynamicsKind::BPS
                    ? -z.gamma * grad.dot(z.v)
                    : -z.gamma * z.v[static_cast<Eigen::Index>(channel)] *
                          grad[static_cast<Eigen::Index>(channel)];
  return rate > 0.0 ? rate : 0.0;
}

KineticState jump_with_gradient(DynamicsKind kind, const KineticState& z,
                                std::size_t channel, const Vec& grad) {
  KineticState out = z;
  if (kind == DynamicsKind::ZigZag) {
    require(channel < static_cast<std::size_t>(z.dim()), "jump: channel out of range");
    out.v[static_cast<Eigen::Index>(channel)] = -z.v[static_cast<Eigen::Index>(channel)];
    return out;
  }
  require(channel == 0, "jump: BPS has a single channel");
  double norm = grad.norm();
  if (!(norm >= 1e-13)) {
    throw DegenerateGradient("BPS reflection requested where the gradient vanishes");
  }
  Vec n = grad / norm;
  out.v.noalias() -= (2.0 * n.dot(z.v)) * n;
  return out;
}

KineticState jump(DynamicsKind kind, const Target& target, const KineticState& z,
                  std::size_t channel, RunMetrics& metrics) {
  if (kind == DynamicsKind::ZigZag) {
    return jump_with_gradient(kind, z, channel, z.x);
  }
  return jump_with_gradient(kind, z, channel, target.grad_log_density(z.x, metrics));
}

Vec refresh_velocity(DynamicsKind kind, int dim, Rng& rng) {
  Vec v(dim);
  if (kind == DynamicsKind::ZigZag) {
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < dim; ++i) v[i] = coin(rng) ? 1.0 : -1.0;
    return v;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  while (norm < 1e-300) {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    norm = v.norm();
  }
  return v / norm;
}

bool valid_velocity(DynamicsKind kind, const Vec& v, double tol) {
  if (kind == DynamicsKind::BPS) {
    return std::abs(v.norm() - 1.0) <= tol;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 1.0 && v[i] != -1.0) return false;
  }
  return true;
}

}  // namespace pdmp
