#include "pdmp/event_stream.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pdmp {

EventStream::EventStream(const PdmpModel& model, KineticState start, Rng& rng,
                         RunMetrics& metrics, double time_cap, const StreamObserver* observer)
    : model_(model), rng_(rng), metrics_(metrics), time_cap_(time_cap), observer_(observer) {
  if (observer_ != nullptr) {
    segment_observer_ = [this](double local, const Vec& x) {
      (*observer_)(anchor_time_ + local, x);
    };
  }
  anchor_at(std::move(start), nullptr);
}

void EventStream::anchor_at(KineticState state, const Vec* grad) {
  segment_.reset();
  segment_.emplace(model_, std::move(state), metrics_, grad,
                   observer_ != nullptr ? &segment_observer_ : nullptr);
}

const std::optional<StreamEvent>& EventStream::peek() {
  if (peeked_) return pending_;
  peeked_ = true;
  pending_.reset();
  pending_has_grad_ = false;

  std::vector<double> budgets(segment_->segment().channels());
  for (double& b : budgets) b = standard_exponential(rng_);
  auto crossing = segment_->first_crossing(budgets, time_cap_ - anchor_time_);
  if (!crossing || anchor_time_ + crossing->time >= time_cap_) {
    return pending_;
  }

  double tau = crossing->time;
  StreamEvent event;
  event.time = anchor_time_ + tau;
  event.channel = crossing->channel;
  event.pre = flow(segment_->anchor(), tau);
  if (model_.kind == DynamicsKind::BPS) {
    pending_grad_ = model_.target.grad_log_density(event.pre.x, metrics_);
    if (observer_ != nullptr) (*observer_)(event.time, event.pre.x);
    pending_has_grad_ = true;
    event.post = jump_with_gradient(model_.kind, event.pre, event.channel, pending_grad_);
  } else {
    event.post = jump_with_gradient(model_.kind, event.pre, event.channel, event.pre.x);
  }
  double rate = segment_->rate(event.channel, tau);
  event.log_rate = rate > 0.0 ? std::log(rate) : -std::numeric_limits<double>::infinity();
  event.integral = segment_->total_integral(tau);
  ++metrics_.events;
  pending_ = std::move(event);
  return pending_;
}

void EventStream::advance() {
  require(peeked_ && pending_.has_value(), "EventStream::advance: no pending event");
  StreamEvent event = std::move(*pending_);
  committed_log_density_ += event.log_rate - event.integral;
  ++committed_;
  anchor_time_ = event.time;
  Vec grad = pending_has_grad_ ? std::move(pending_grad_) : Vec();
  anchor_at(std::move(event.post), pending_has_grad_ ? &grad : nullptr);
  pending_.reset();
  peeked_ = false;
  pending_has_grad_ = false;
}

double EventStream::open_integral(double t) {
  require(t >= anchor_time_, "EventStream::open_integral: time before anchor");
  return segment_->total_integral(t - anchor_time_);
}

}  // namespace pdmp
