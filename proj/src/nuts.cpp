#include "pdmp/nuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdmp {

std::string_view to_string(StopSide side) {
  return side == StopSide::Forward ? "forward" : "backward";
}

namespace {

double segment_value(const StreamEvent& e) { return e.log_rate - e.integral; }

CriterionEvent forward_view(const StreamEvent& e) {
  return CriterionEvent{e.time, e.pre.x, e.pre.v, e.post.v};
}

// Backward-stream velocities are negated true-time velocities, and the
// stream's pre-jump side is the true-time post-jump side.
CriterionEvent backward_view(const StreamEvent& e) {
  return CriterionEvent{-e.time, e.pre.x, -e.post.v, -e.pre.v};
}

}  // namespace

StoppedPath grow_stopped_path(const KineticState& z, double alpha, const NutsConfig& cfg,
                              const Target& target, Rng& rng, RunMetrics& metrics,
                              const StreamObserver* observer) {
  require(alpha > 0.0 && alpha < 1.0, "grow_stopped_path: alpha must lie in (0, 1)");
  require(z.x.size() == target.dim() && z.v.size() == target.dim(),
          "grow_stopped_path: state dimension does not match target");
  cfg.scheme.validate();
  const double cap = cfg.limits.max_half_length;
  PdmpModel model{target, cfg.kind, cfg.scheme};

  KineticState start = z;
  start.gamma = 1;
  StreamObserver backward_observer;
  if (observer != nullptr) {
    backward_observer = [observer](double s, const Vec& x) { (*observer)(-s, x); };
  }
  EventStream fwd(model, start, rng, metrics, cap, observer);
  EventStream bwd(model, flip_conjugate(start), rng, metrics, cap,
                  observer != nullptr ? &backward_observer : nullptr);

  std::vector<StreamEvent> fwd_events;
  std::vector<StreamEvent> bwd_events;
  std::vector<CriterionEvent> interior;
  const double inf = std::numeric_limits<double>::infinity();

  std::optional<StreamEvent> boundary;
  StopSide side = StopSide::Forward;
  while (!boundary) {
    if (interior.size() >= cfg.limits.max_events) {
      throw BudgetExceeded("trajectory growth exceeded the event budget");
    }
    const auto& next_f = fwd.peek();
    const auto& next_b = bwd.peek();
    double tf = next_f ? next_f->time / (1.0 - alpha) : inf;
    double tb = next_b ? next_b->time / alpha : inf;
    double t = std::min(tf, tb);
    if (!std::isfinite(t) || (1.0 - alpha) * t > cap || alpha * t > cap) {
      throw BudgetExceeded("trajectory growth exceeded the time budget");
    }
    if (tf <= tb) {
      CriterionEvent view = forward_view(*next_f);
      if (!forward_entry_valid(interior, view) || !forward_interior_valid(interior, view)) {
        boundary = *next_f;
        side = StopSide::Forward;
        break;
      }
      interior.push_back(std::move(view));
      fwd_events.push_back(*next_f);
      fwd.advance();
    } else {
      CriterionEvent view = backward_view(*next_b);
      if (!backward_entry_valid(interior, view) || !backward_interior_valid(interior, view)) {
        boundary = *next_b;
        side = StopSide::Backward;
        break;
      }
      interior.push_back(std::move(view));
      bwd_events.push_back(*next_b);
      bwd.advance();
    }
  }

  StoppedPath sp;
  sp.side = side;
  sp.boundary_channel = boundary->channel;
  double l = 0.0;
  double r = 0.0;
  double forward_tail = 0.0;
  double backward_tail = 0.0;
  KineticState back_end;
  if (side == StopSide::Forward) {
    r = boundary->time;
    l = alpha * (r / (1.0 - alpha));
    forward_tail = segment_value(*boundary);
    backward_tail = -bwd.open_integral(l);
    back_end = flow(bwd.anchor_state(), l - bwd.anchor_time());
    sp.boundary_state = boundary->post;
  } else {
    l = boundary->time;
    r = (1.0 - alpha) * (l / alpha);
    backward_tail = segment_value(*boundary);
    forward_tail = -fwd.open_integral(r);
    back_end = boundary->pre;
    sp.boundary_state = flip_conjugate(boundary->post);
  }
  sp.anchor = l;
  sp.path.horizon = l + r;
  sp.path.initial = flip_conjugate(back_end);
  sp.construction_log_density = fwd.committed_log_density() + forward_tail +
                                bwd.committed_log_density() + backward_tail;

  const std::size_t m = bwd_events.size();
  const std::size_t n = fwd_events.size();
  sp.path.events.reserve(m + n);
  sp.forward_cache.assign(m + n, std::nullopt);
  sp.backward_cache.assign(m + n, std::nullopt);
  for (std::size_t j = m; j-- > 0;) {
    const auto& e = bwd_events[j];
    sp.path.events.push_back(PathEvent{l - e.time, e.channel, flip_conjugate(e.pre)});
    sp.backward_cache[m - 1 - j] = j + 1 < m ? segment_value(bwd_events[j + 1]) : backward_tail;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = fwd_events[k];
    sp.path.events.push_back(PathEvent{l + e.time, e.channel, e.post});
    sp.forward_cache[m + k] = k + 1 < n ? segment_value(fwd_events[k + 1]) : forward_tail;
  }
  return sp;
}

double triangular_index_time(double length, StopSide side, double u) {
  require(length > 0.0, "triangular_index_time: length must be positive");
  require(u >= 0.0 && u <= 1.0, "triangular_index_time: u must lie in [0, 1]");
  return side == StopSide::Forward ? length * (1.0 - std::sqrt(1.0 - u))
                                   : length * std::sqrt(u);
}

double sample_index_time(double length, StopSide side, Rng& rng) {
  return triangular_index_time(length, side, uniform_open(rng));
}

double triangular_cdf(double length, StopSide side, double l) {
  double s = std::clamp(l / length, 0.0, 1.0);
  return side == StopSide::Forward ? 1.0 - (1.0 - s) * (1.0 - s) : s * s;
}

std::vector<CriterionEvent> criterion_events(const StoppedPath& sp) {
  const auto& events = sp.path.events;
  std::vector<CriterionEvent> out;
  out.reserve(events.size() + 1);
  if (sp.side == StopSide::Backward) {
    out.push_back(CriterionEvent{0.0, sp.path.initial.x, sp.boundary_state.v, sp.path.initial.v});
  }
  for (std::size_t k = 0; k < events.size(); ++k) {
    KineticState pre = sp.path.pre_jump_state(k);
    out.push_back(CriterionEvent{events[k].time, pre.x, pre.v, events[k].post.v});
  }
  if (sp.side == StopSide::Forward) {
    KineticState end = sp.path.final_state();
    out.push_back(CriterionEvent{sp.path.horizon, end.x, end.v, sp.boundary_state.v});
  }
  return out;
}

double anchored_log_density(const StoppedPath& sp, double l, const PdmpModel& model,
                            RunMetrics& metrics) {
  const auto& events = sp.path.events;
  const double horizon = sp.path.horizon;
  const std::size_t count = events.size();
  require(l >= 0.0 && l <= horizon, "anchored_log_density: anchor outside [0, T]");
  require(sp.forward_cache.size() == count && sp.backward_cache.size() == count,
          "anchored_log_density: cache size mismatch");
  std::optional<std::size_t> forward_end_channel;
  std::optional<std::size_t> backward_end_channel;
  if (sp.side == StopSide::Forward) {
    forward_end_channel = sp.boundary_channel;
  } else {
    backward_end_channel = sp.boundary_channel;
  }

  auto forward_segment = [&](std::size_t j) {
    if (!sp.forward_cache[j]) {
      bool last = j + 1 == count;
      double end = last ? horizon : events[j + 1].time;
      auto channel = last ? forward_end_channel : std::optional<std::size_t>(events[j + 1].channel);
      sp.forward_cache[j] =
          segment_log_density(model, events[j].post, end - events[j].time, channel, metrics)
              .value();
    }
    return *sp.forward_cache[j];
  };
  auto backward_segment = [&](std::size_t j) {
    if (!sp.backward_cache[j]) {
      double begin = j == 0 ? 0.0 : events[j - 1].time;
      auto channel = j == 0 ? backward_end_channel
                            : std::optional<std::size_t>(events[j - 1].channel);
      sp.backward_cache[j] =
          segment_log_density(model, flip_conjugate(sp.path.pre_jump_state(j)),
                              events[j].time - begin, channel, metrics)
              .value();
    }
    return *sp.backward_cache[j];
  };

  auto split = std::lower_bound(events.begin(), events.end(), l,
                                [](const PathEvent& e, double value) { return e.time < value; });
  const std::size_t k = static_cast<std::size_t>(split - events.begin());
  KineticState here = sp.path.state_at(l);

  double total = model.target.log_density(here.x);
  if (k < count) {
    total += segment_log_density(model, here, events[k].time - l, events[k].channel, metrics)
                 .value();
    for (std::size_t j = k; j < count; ++j) total += forward_segment(j);
  } else {
    total += segment_log_density(model, here, horizon - l, forward_end_channel, metrics).value();
  }
  KineticState flipped = flip_conjugate(here);
  if (k > 0) {
    total += segment_log_density(model, flipped, l - events[k - 1].time, events[k - 1].channel,
                                 metrics)
                 .value();
    for (std::size_t j = 0; j < k; ++j) total += backward_segment(j);
  } else {
    total += segment_log_density(model, flipped, l, backward_end_channel, metrics).value();
  }
  return total;
}

NutsStepResult nuts_transition_exact(const KineticState& z, const NutsConfig& cfg,
                                     const Target& target, Rng& rng, RunMetrics& metrics) {
  KineticState start = z;
  start.v = refresh_velocity(cfg.kind, target.dim(), rng);
  start.gamma = 1;
  double alpha = uniform_open(rng);
  NutsStepResult result;
  result.path = grow_stopped_path(start, alpha, cfg, target, rng, metrics);
  result.proposed_index = sample_index_time(result.path.length(), result.path.side, rng);
  result.state = result.path.path.state_at(result.proposed_index);
  return result;
}

NutsStepResult doubly_adaptive_transition(const KineticState& z, const NutsConfig& cfg,
                                          const Target& target, Rng& rng, RunMetrics& metrics,
                                          const StreamObserver* observer) {
  KineticState start = z;
  start.v = refresh_velocity(cfg.kind, target.dim(), rng);
  start.gamma = 1;
  double alpha = uniform_open(rng);
  NutsStepResult result;
  result.path = grow_stopped_path(start, alpha, cfg, target, rng, metrics, observer);
  const StoppedPath& sp = result.path;
  result.proposed_index = sample_index_time(sp.length(), sp.side, rng);

  PdmpModel model{target, cfg.kind, cfg.scheme};
  double current = target.log_density(start.x) + sp.construction_log_density;
  double proposed = anchored_log_density(sp, result.proposed_index, model, metrics);
  double log_alpha = proposed - current;
  if (std::isnan(log_alpha)) log_alpha = -std::numeric_limits<double>::infinity();
  result.log_alpha = std::min(0.0, log_alpha);

  ++metrics.mh_proposals;
  if (std::log(uniform_open(rng)) < result.log_alpha) {
    ++metrics.mh_accepts;
    result.accepted = true;
    result.state = sp.path.state_at(result.proposed_index);
  } else {
    result.accepted = false;
    result.state = std::move(start);
  }
  return result;
}

}  // namespace pdmp
