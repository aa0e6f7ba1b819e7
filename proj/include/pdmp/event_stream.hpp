#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "pdmp/rate_approx.hpp"

namespace pdmp {

/// One simulated jump of the approximate process.
struct StreamEvent {
  double time;  // since the stream's start
  std::size_t channel;
  KineticState pre;
  KineticState post;
  double log_rate;  // log of the firing channel's approximate rate at the event
  double integral;  // approximate rate integrated over the segment, all channels
};

/// Observer receiving (stream time, position) for every gradient evaluation.
using StreamObserver = std::function<void(double stream_time, const Vec& x)>;

/**
 * @brief Event-by-event simulation of the approximate process forward in
 * time from a start state.
 *
 * Each segment is re-anchored at the post-jump state and gets fresh
 * exponential budgets, one per channel (competing clocks). peek() simulates
 * the next event without committing to it; advance() re-anchors there.
 */
class EventStream {
 public:
  EventStream(const PdmpModel& model, KineticState start, Rng& rng, RunMetrics& metrics,
              double time_cap, const StreamObserver* observer = nullptr);
  EventStream(const EventStream&) = delete;
  EventStream& operator=(const EventStream&) = delete;

  /// The next event, or nullopt if none occurs before the time cap.
  const std::optional<StreamEvent>& peek();
  void advance();

  double anchor_time() const { return anchor_time_; }
  const KineticState& anchor_state() const { return segment_->anchor(); }
  std::size_t committed_events() const { return committed_; }

  /// Sum over committed segments of (log rate at the event - integral).
  double committed_log_density() const { return committed_log_density_; }

  /// Integrated rate of the open segment from its anchor to stream time t.
  double open_integral(double t);

 private:
  void anchor_at(KineticState state, const Vec* grad);

  const PdmpModel& model_;
  Rng& rng_;
  RunMetrics& metrics_;
  double time_cap_;
  const StreamObserver* observer_;
  EvaluationObserver segment_observer_;
  std::optional<AnchoredRate> segment_;
  double anchor_time_ = 0.0;
  std::optional<StreamEvent> pending_;
  bool peeked_ = false;
  Vec pending_grad_;
  bool pending_has_grad_ = false;
  std::size_t committed_ = 0;
  double committed_log_density_ = 0.0;
};

}  // namespace pdmp
