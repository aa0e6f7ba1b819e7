#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdmp/criterion.hpp"
#include "pdmp/path_space.hpp"

namespace pdmp {

enum class StopSide { Forward, Backward };

std::string_view to_string(StopSide side);

/// Runaway guards for trajectory growth. Exceeding either raises
/// BudgetExceeded.
struct GrowthLimits {
  std::size_t max_events = 10'000;
  double max_half_length = 1'000.0;
};

struct NutsConfig {
  DynamicsKind kind = DynamicsKind::BPS;
  ApproxScheme scheme;
  GrowthLimits limits;
};

/**
 * @brief A trajectory grown around a start point until the No-U-Turn
 * criterion broke, re-indexed to [0, T].
 *
 * `path` holds the interior events. The event that broke the criterion
 * sits exactly on the boundary of the stopping side; its channel and the
 * state beyond it (post-jump at T for a forward stop, pre-jump at 0 for a
 * backward stop, both in true time) are kept separately.
 */
struct StoppedPath {
  PathSkeleton path;
  double anchor = 0.0;  // l
  StopSide side = StopSide::Forward;
  std::size_t boundary_channel = 0;
  KineticState boundary_state;
  double construction_log_density = 0.0;  // accrued log q^r + log q at the anchor

  double length() const { return path.horizon; }

  // Anchor-independent segment contributions, filled lazily. forward[k]:
  // segment anchored at the post-jump state of event k up to the next event
  // (or T). backward[k]: segment of the flipped process anchored at the
  // flipped pre-jump state of event k back to the previous event (or 0).
  mutable std::vector<std::optional<double>> forward_cache;
  mutable std::vector<std::optional<double>> backward_cache;
};

/// Grows the trajectory both ways from z with split alpha (Algorithm-style
/// interleaving: checkpoints t = s / (1 - alpha) forward, s / alpha
/// backward, processed in order).
StoppedPath grow_stopped_path(const KineticState& z, double alpha, const NutsConfig& cfg,
                              const Target& target, Rng& rng, RunMetrics& metrics,
                              const StreamObserver* observer = nullptr);

/// Inverse-CDF draw from the triangular density on [0, T]: proportional to
/// T - l for a forward stop and to l for a backward stop.
double triangular_index_time(double length, StopSide side, double u);
double sample_index_time(double length, StopSide side, Rng& rng);

/// Triangular CDF matching sample_index_time.
double triangular_cdf(double length, StopSide side, double l);

/// Criterion view of a stopped path: interior events plus the boundary
/// event, in path time.
std::vector<CriterionEvent> criterion_events(const StoppedPath& sp);

/**
 * @brief log pi(X_l) + log q^r(left of l | X_l) + log q(right of l | X_l).
 *
 * Segments not touching l are taken from (and stored into) the path's
 * caches; only the segments adjacent to l are rebuilt.
 */
double anchored_log_density(const StoppedPath& sp, double l, const PdmpModel& model,
                            RunMetrics& metrics);

struct NutsStepResult {
  KineticState state;
  StoppedPath path;
  double proposed_index = 0.0;
  bool accepted = true;
  double log_alpha = 0.0;
};

/// Exact-process No-U-Turn step: refresh, grow, draw l', return X_{l'}.
/// Only valid when the scheme is exact for the target.
NutsStepResult nuts_transition_exact(const KineticState& z, const NutsConfig& cfg,
                                     const Target& target, Rng& rng, RunMetrics& metrics);

/// Doubly adaptive step: as the exact step, then a Metropolis test on the
/// index time l' against l.
NutsStepResult doubly_adaptive_transition(const KineticState& z, const NutsConfig& cfg,
                                          const Target& target, Rng& rng, RunMetrics& metrics,
                                          const StreamObserver* observer = nullptr);

inline KineticState nuts_step_exact(const KineticState& z, const NutsConfig& cfg,
                                    const Target& target, Rng& rng, RunMetrics& metrics) {
  return nuts_transition_exact(z, cfg, target, rng, metrics).state;
}

inline KineticState doubly_adaptive_step(const KineticState& z, const NutsConfig& cfg,
                                         const Target& target, Rng& rng, RunMetrics& metrics) {
  return doubly_adaptive_transition(z, cfg, target, rng, metrics).state;
}

}  // namespace pdmp
