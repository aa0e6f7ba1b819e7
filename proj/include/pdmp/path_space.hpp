#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdmp/event_stream.hpp"

namespace pdmp {

struct PathEvent {
  double time;
  std::size_t channel;
  KineticState post;  // state right after the jump
};

/**
 * @brief Finite description of a path on [0, horizon]: the initial state and
 * the ordered jumps. Every state is stored in the forward frame (gamma = +1).
 */
struct PathSkeleton {
  KineticState initial;
  std::vector<PathEvent> events;
  double horizon = 0.0;

  /// State at time t in [0, horizon] (post-jump at event times).
  KineticState state_at(double t) const;
  KineticState final_state() const { return state_at(horizon); }
  /// State just before event k.
  KineticState pre_jump_state(std::size_t k) const;
};

/// Throws ContractViolation unless times are strictly increasing inside
/// (0, horizon) and every state has the initial state's dimension.
void check_structure(const PathSkeleton& path);

/// Throws ContractViolation unless each stored post-jump state equals the
/// jump of the flowed previous state (within tol).
void validate_skeleton(const PathSkeleton& path, DynamicsKind kind, const Target& target,
                       double tol = 1e-9);

/**
 * @brief Time reversal of a path.
 *
 * The reversed path starts at the flip-conjugated final state, has events at
 * horizon - t_k in reverse order with the same channels, and its post-jump
 * states are the flip-conjugated pre-jump states of the original.
 */
PathSkeleton reverse_path(const PathSkeleton& path);

/// Log-density contribution of one inter-event segment.
struct SegmentLogDensity {
  double duration = 0.0;
  std::optional<std::size_t> channel;  // set when the segment ends with a jump
  double log_rate = 0.0;               // log rate of that channel at the jump
  double integral = 0.0;

  double value() const { return (channel ? log_rate : 0.0) - integral; }
};

struct LogPathDensity {
  double log_mu0 = 0.0;
  double log_conditional = 0.0;
  std::vector<SegmentLogDensity> segments;

  double total() const { return log_mu0 + log_conditional; }
};

/// Rebuilds the rate approximation anchored at `anchor` and returns the
/// segment's contribution over `duration`, ending in a jump on `channel`
/// when given. A zero rate at the jump yields -infinity.
SegmentLogDensity segment_log_density(const PdmpModel& model, const KineticState& anchor,
                                      double duration, std::optional<std::size_t> channel,
                                      RunMetrics& metrics);

/// log pi(x_0) plus the conditional log-density of the skeleton under the
/// approximate process. Velocity measures are uniform and omitted.
LogPathDensity path_log_density(const PathSkeleton& path, const PdmpModel& model,
                                RunMetrics& metrics);

/// [log mu(z_0) + log p(w | z_0)] - [log mu(z_T) + log p(R(w) | flip z_T)].
/// Zero when the approximation is exact. No volume term: psi = 1.
double skew_reversibility_residual(const PathSkeleton& path, const PdmpModel& model,
                                   RunMetrics& metrics);

struct SimulatedPath {
  PathSkeleton path;
  double log_conditional = 0.0;  // accrued while simulating
};

/// Simulates the approximate process forward from `start` for `horizon`.
SimulatedPath simulate_path(const PdmpModel& model, const KineticState& start, double horizon,
                            Rng& rng, RunMetrics& metrics);

}  // namespace pdmp
