#include "pdmp/path_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdmp {

KineticState PathSkeleton::state_at(double t) const {
  require(t >= 0.0 && t <= horizon, "state_at: time outside [0, horizon]");
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double value, const PathEvent& e) { return value < e.time; });
  if (it == events.begin()) {
    return flow(initial, t);
  }
  const PathEvent& last = *(it - 1);
  return flow(last.post, t - last.time);
}

KineticState PathSkeleton::pre_jump_state(std::size_t k) const {
  require(k < events.size(), "pre_jump_state: event index out of range");
  const KineticState& before = k == 0 ? initial : events[k - 1].post;
  double start = k == 0 ? 0.0 : events[k - 1].time;
  KineticState pre = flow(before, events[k].time - start);
  return pre;
}

void check_structure(const PathSkeleton& path) {
  require(path.horizon > 0.0, "skeleton: horizon must be positive");
  require(path.initial.x.size() == path.initial.v.size(), "skeleton: x/v dimension mismatch");
  double previous = 0.0;
  for (const auto& e : path.events) {
    require(e.time > previous, "skeleton: event times must increase strictly from 0");
    require(e.post.x.size() == path.initial.x.size() && e.post.v.size() == path.initial.v.size(),
            "skeleton: event state dimension mismatch");
    previous = e.time;
  }
  require(previous < path.horizon || path.events.empty(),
          "skeleton: events must lie strictly before the horizon");
}

void validate_skeleton(const PathSkeleton& path, DynamicsKind kind, const Target& target,
                       double tol) {
  check_structure(path);
  RunMetrics scratch;
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const auto& e = path.events[k];
    require(e.channel < channel_count(kind, path.initial.dim()), "skeleton: channel out of range");
    KineticState expected = jump(kind, target, path.pre_jump_state(k), e.channel, scratch);
    double err = (expected.x - e.post.x).cwiseAbs().maxCoeff() +
                 (expected.v - e.post.v).cwiseAbs().maxCoeff();
    require(err <= tol, "skeleton: post-jump state inconsistent with the dynamics");
  }
}

PathSkeleton reverse_path(const PathSkeleton& path) {
  check_structure(path);
  PathSkeleton reversed;
  reversed.horizon = path.horizon;
  reversed.initial = flip_conjugate(path.final_state());
  reversed.events.reserve(path.events.size());
  for (std::size_t i = path.events.size(); i-- > 0;) {
    reversed.events.push_back(
        PathEvent{path.horizon - path.events[i].time, path.events[i].channel,
                  flip_conjugate(path.pre_jump_state(i))});
  }
  return reversed;
}

SegmentLogDensity segment_log_density(const PdmpModel& model, const KineticState& anchor,
                                      double duration, std::optional<std::size_t> channel,
                                      RunMetrics& metrics) {
  AnchoredRate rate(model, anchor, metrics);
  SegmentLogDensity out;
  out.duration = duration;
  out.channel = channel;
  out.integral = rate.total_integral(duration);
  if (channel) {
    double value = rate.rate(*channel, duration);
    out.log_rate = value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

LogPathDensity path_log_density(const PathSkeleton& path, const PdmpModel& model,
                                RunMetrics& metrics) {
  check_structure(path);
  LogPathDensity density;
  density.log_mu0 = model.target.log_density(path.initial.x);
  const KineticState* anchor = &path.initial;
  double start = 0.0;
  for (const auto& e : path.events) {
    density.segments.push_back(
        segment_log_density(model, *anchor, e.time - start, e.channel, metrics));
    anchor = &e.post;
    start = e.time;
  }
  density.segments.push_back(
      segment_log_density(model, *anchor, path.horizon - start, std::nullopt, metrics));
  for (const auto& s : density.segments) density.log_conditional += s.value();
  return density;
}

double skew_reversibility_residual(const PathSkeleton& path, const PdmpModel& model,
                                   RunMetrics& metrics) {
  double forward = path_log_density(path, model, metrics).total();
  double backward = path_log_density(reverse_path(path), model, metrics).total();
  return forward - backward;
}

SimulatedPath simulate_path(const PdmpModel& model, const KineticState& start, double horizon,
                            Rng& rng, RunMetrics& metrics) {
  require(horizon > 0.0, "simulate_path: horizon must be positive");
  SimulatedPath out;
  out.path.initial = start;
  out.path.horizon = horizon;
  EventStream stream(model, start, rng, metrics, horizon);
  while (const auto& event = stream.peek()) {
    out.path.events.push_back(PathEvent{event->time, event->channel, event->post});
    stream.advance();
  }
  out.log_conditional = stream.committed_log_density() - stream.open_integral(horizon);
  return out;
}

}  // namespace pdmp
