#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "pdmp/common.hpp"
#include "pdmp/targets.hpp"

namespace pdmp {

/// Position, velocity and time direction (+1 forward, -1 backward).
struct KineticState {
  Vec x;
  Vec v;
  int gamma = 1;

  int dim() const { return static_cast<int>(x.size()); }
};

enum class DynamicsKind { BPS, ZigZag };

std::string_view to_string(DynamicsKind kind);
DynamicsKind parse_dynamics(std::string_view name);

/// Number of jump channels: one bounce channel for BPS, one per coordinate
/// for Zig-Zag.
inline std::size_t channel_count(DynamicsKind kind, int dim) {
  return kind == DynamicsKind::BPS ? 1 : static_cast<std::size_t>(dim);
}

/// Straight-line flow: (x + gamma t v, v, gamma).
KineticState flow(const KineticState& z, double t);

/// (x, -v, gamma). Involution.
KineticState flip_conjugate(const KineticState& z);

/**
 * Signed (unclipped) event rates for every channel given the gradient of
 * log pi at z.x. BPS: -gamma grad.v. Zig-Zag channel i: -gamma v_i grad_i.
 * The event rate is the positive part.
 */
void signed_rates(DynamicsKind kind, const Vec& grad, const Vec& v, int gamma,
                  std::span<double> out);

double event_rate(DynamicsKind kind, const Target& target, const KineticState& z,
                  std::size_t channel, RunMetrics& metrics);

/// Jump using a precomputed gradient at z.x (only BPS reads it).
KineticState jump_with_gradient(DynamicsKind kind, const KineticState& z,
                                std::size_t channel, const Vec& grad);

/// BPS: reflect v against the normalised gradient. Zig-Zag: flip v_channel.
/// Throws DegenerateGradient for BPS when |grad log pi| < 1e-13.
KineticState jump(DynamicsKind kind, const Target& target, const KineticState& z,
                  std::size_t channel, RunMetrics& metrics);

/// Fresh velocity: uniform on the unit sphere (BPS) or on {-1,+1}^d (Zig-Zag).
Vec refresh_velocity(DynamicsKind kind, int dim, Rng& rng);

/// Unit norm for BPS (within tol), all entries +-1 for Zig-Zag.
bool valid_velocity(DynamicsKind kind, const Vec& v, double tol = 1e-12);

}  // namespace pdmp
