#include "pdmp/rate_approx.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pdmp/csv.hpp"

namespace pdmp {

namespace {

double positive_part(double value) { return value > 0.0 ? value : 0.0; }

// Integral over [0, u] of (a + (b - a) s / delta)^+.
double clipped_linear_integral(double a, double b, double delta, double u) {
  double slope = (b - a) / delta;
  if (a >= 0.0 && b >= 0.0) {
    return u * (a + 0.5 * slope * u);
  }
  if (a <= 0.0 && b <= 0.0) {
    return 0.0;
  }
  double root = delta * a / (a - b);
  if (a > 0.0) {
    double w = std::min(u, root);
    return w * (a + 0.5 * slope * w);
  }
  if (u <= root) {
    return 0.0;
  }
  double w = u - root;
  return 0.5 * slope * w * w;
}

// Smallest u >= 0 with c u + slope u^2 / 2 == remaining, assuming it exists.
double solve_linear_rate(double c, double slope, double remaining) {
  double disc = c * c + 2.0 * slope * remaining;
  double denom = c + std::sqrt(disc > 0.0 ? disc : 0.0);
  if (denom <= 0.0) {
    return 0.0;
  }
  return 2.0 * remaining / denom;
}

double parse_positive(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw ContractViolation(std::string(what) + ": expected a positive number, got '" +
                            std::string(text) + "'");
  }
  return value;
}

}  // namespace

void ApproxScheme::validate() const {
  if (const auto* fixed = std::get_if<FixedStep>(&step)) {
    require(fixed->h > 0.0 && std::isfinite(fixed->h), "scheme: fixed step h must be positive");
    return;
  }
  const auto& adaptive = std::get<AdaptiveStep>(step);
  require(adaptive.tol > 0.0, "scheme: tol must be positive");
  require(adaptive.h_guess > 0.0, "scheme: h_guess must be positive");
  require(adaptive.h_min > 0.0 && adaptive.h_min <= adaptive.h_max,
          "scheme: need 0 < h_min <= h_max");
}

ApproxScheme ApproxScheme::parse(std::string_view order, std::string_view step) {
  ApproxScheme scheme;
  if (order == "order0") {
    scheme.order = ApproxOrder::Order0;
  } else if (order == "order1") {
    scheme.order = ApproxOrder::Order1;
  } else {
    throw ContractViolation("scheme: expected order0 or order1, got '" + std::string(order) + "'");
  }
  if (step.starts_with("fixed:")) {
    scheme.step = FixedStep{parse_positive(step.substr(6), "fixed step")};
  } else if (step.starts_with("adaptive:")) {
    AdaptiveStep adaptive;
    adaptive.tol = parse_positive(step.substr(9), "adaptive tolerance");
    scheme.step = adaptive;
  } else {
    throw ContractViolation("step: expected fixed:<h> or adaptive:<tol>, got '" +
                            std::string(step) + "'");
  }
  scheme.validate();
  return scheme;
}

std::string ApproxScheme::describe() const {
  std::string text = order == ApproxOrder::Order0 ? "order0 " : "order1 ";
  if (const auto* fixed = std::get_if<FixedStep>(&step)) {
    return text + "fixed:" + format_double(fixed->h);
  }
  return text + "adaptive:" + format_double(std::get<AdaptiveStep>(step).tol);
}

double step_from_defect(double tau, double h_guess, double tol, double h_min, double h_max) {
  double magnitude = std::max(std::abs(tau), 1e-15);
  double h = h_guess * std::sqrt(tol / (2.0 * magnitude));
  return std::clamp(h, h_min, h_max);
}

double adapt_step(const std::function<double(double)>& rate_at, double h_guess, double tol,
                  double h_min, double h_max) {
  double rate_start = rate_at(0.0);
  double rate_mid = rate_at(0.5 * h_guess);
  // One step of size h_guess minus two steps of size h_guess/2.
  double tau = rate_start * h_guess - rate_start * h_guess / 2.0 - rate_mid * h_guess / 2.0;
  return step_from_defect(tau, h_guess, tol, h_min, h_max);
}

RateSegment::RateSegment(ApproxOrder order, std::size_t channels)
    : order_(order), channels_(channels) {
  require(channels > 0, "RateSegment: need at least one channel");
}

void RateSegment::append_knot(double time, std::span<const double> signed_values) {
  require(signed_values.size() == channels_, "RateSegment: channel count mismatch");
  if (times_.empty()) {
    require(time == 0.0, "RateSegment: first knot must be at time 0");
    times_.push_back(time);
    values_.insert(values_.end(), signed_values.begin(), signed_values.end());
    cumulative_.insert(cumulative_.end(), channels_, 0.0);
    return;
  }
  require(time > times_.back(), "RateSegment: knot times must increase");
  std::size_t k = times_.size() - 1;
  times_.push_back(time);
  values_.insert(values_.end(), signed_values.begin(), signed_values.end());
  for (std::size_t c = 0; c < channels_; ++c) {
    cumulative_.push_back(cumulative_[k * channels_ + c] +
                          piece_integral(k, c, times_[k + 1] - times_[k]));
  }
}

std::size_t RateSegment::piece_of(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (times_.size() >= 2 && k > times_.size() - 2) {
    k = times_.size() - 2;
  }
  return k;
}

double RateSegment::piece_integral(std::size_t k, std::size_t channel, double u) const {
  double a = knot_value(k, channel);
  if (order_ == ApproxOrder::Order0) {
    return positive_part(a) * u;
  }
  double b = knot_value(k + 1, channel);
  return clipped_linear_integral(a, b, times_[k + 1] - times_[k], u);
}

double RateSegment::rate(std::size_t channel, double t) const {
  require(t >= 0.0 && t <= end_time(), "RateSegment::rate: time outside covered range");
  if (order_ == ApproxOrder::Order0) {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    return positive_part(knot_value(k, channel));
  }
  if (times_.size() == 1) {
    return positive_part(knot_value(0, channel));
  }
  std::size_t k = piece_of(t);
  double a = knot_value(k, channel);
  double b = knot_value(k + 1, channel);
  double s = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return positive_part((1.0 - s) * a + s * b);
}

double RateSegment::integral(std::size_t channel, double t) const {
  require(t >= 0.0 && t <= end_time(), "RateSegment::integral: time outside covered range");
  if (times_.size() == 1) {
    return 0.0;
  }
  std::size_t k = piece_of(t);
  return cumulative_[k * channels_ + channel] + piece_integral(k, channel, t - times_[k]);
}

double RateSegment::total_integral(double t) const {
  double total = 0.0;
  for (std::size_t c = 0; c < channels_; ++c) total += integral(c, t);
  return total;
}

std::optional<double> RateSegment::piece_invert(std::size_t k, std::size_t channel,
                                                double remaining) const {
  double delta = times_[k + 1] - times_[k];
  double a = knot_value(k, channel);
  double u = 0.0;
  if (order_ == ApproxOrder::Order0) {
    if (a <= 0.0) return std::nullopt;
    u = remaining / a;
  } else {
    double b = knot_value(k + 1, channel);
    double slope = (b - a) / delta;
    if (a >= 0.0 && b >= 0.0) {
      u = solve_linear_rate(a, slope, remaining);
    } else if (a <= 0.0 && b <= 0.0) {
      return std::nullopt;
    } else if (a > 0.0) {
      u = solve_linear_rate(a, slope, remaining);
    } else {
      double root = delta * a / (a - b);
      u = root + std::sqrt(2.0 * remaining / slope);
    }
  }
  return std::min(u, delta);
}

std::optional<Crossing> RateSegment::crossing_in_piece(std::size_t k,
                                                       std::span<const double> budgets) const {
  require(budgets.size() == channels_, "crossing_in_piece: budget count mismatch");
  require(k + 1 < times_.size(), "crossing_in_piece: piece not built");
  std::optional<Crossing> best;
  for (std::size_t c = 0; c < channels_; ++c) {
    double before = cumulative_[k * channels_ + c];
    double after = cumulative_[(k + 1) * channels_ + c];
    if (after < budgets[c]) continue;
    auto u = piece_invert(k, c, budgets[c] - before);
    if (!u) continue;
    double t = times_[k] + *u;
    if (!best || t < best->time) best = Crossing{t, c};
  }
  return best;
}

std::optional<double> RateSegment::invert(std::size_t channel, double budget) const {
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    if (cumulative_[(k + 1) * channels_ + channel] < budget) continue;
    auto u = piece_invert(k, channel, budget - cumulative_[k * channels_ + channel]);
    if (u) return times_[k] + *u;
  }
  return std::nullopt;
}

std::optional<double> sample_event_time(const RateSegment& segment, Rng& rng) {
  require(segment.channels() == 1, "sample_event_time: single-channel segments only");
  return segment.invert(0, standard_exponential(rng));
}

AnchoredRate::AnchoredRate(const PdmpModel& model, KineticState anchor, RunMetrics& metrics,
                           const Vec* anchor_grad, const EvaluationObserver* observer)
    : model_(model),
      anchor_(std::move(anchor)),
      metrics_(metrics),
      observer_(observer),
      segment_(model.scheme.order, channel_count(model.kind, anchor_.dim())),
      scratch_(segment_.channels()) {
  if (const auto* adaptive = std::get_if<AdaptiveStep>(&model_.scheme.step)) {
    h_guess_ = adaptive->h_guess;
  }
  append_at(0.0, anchor_grad);
}

void AnchoredRate::append_at(double t, const Vec* grad) {
  Vec local;
  if (grad == nullptr) {
    KineticState at = flow(anchor_, t);
    local = model_.target.grad_log_density(at.x, metrics_);
    if (observer_ != nullptr) (*observer_)(t, at.x);
    grad = &local;
  }
  signed_rates(model_.kind, *grad, anchor_.v, anchor_.gamma, scratch_);
  segment_.append_knot(t, scratch_);
}

void AnchoredRate::extend() {
  if (segment_.knot_count() >= kMaxKnotsPerSegment) {
    throw BudgetExceeded("rate segment exceeded its knot budget");
  }
  double start = segment_.end_time();
  double h = 0.0;
  if (const auto* fixed = std::get_if<FixedStep>(&model_.scheme.step)) {
    h = fixed->h;
  } else {
    const auto& adaptive = std::get<AdaptiveStep>(model_.scheme.step);
    KineticState mid = flow(anchor_, start + 0.5 * h_guess_);
    Vec grad = model_.target.grad_log_density(mid.x, metrics_);
    if (observer_ != nullptr) (*observer_)(start + 0.5 * h_guess_, mid.x);
    std::vector<double> mid_rates(segment_.channels());
    signed_rates(model_.kind, grad, anchor_.v, anchor_.gamma, mid_rates);
    double tau = 0.0;
    for (std::size_t c = 0; c < mid_rates.size(); ++c) {
      double from = segment_.knot_value(segment_.knot_count() - 1, c);
      tau += std::abs((from - mid_rates[c]) * h_guess_ / 2.0);
    }
    h = step_from_defect(tau, h_guess_, adaptive.tol, adaptive.h_min, adaptive.h_max);
    h_guess_ = h;
  }
  append_at(start + h, nullptr);
}

void AnchoredRate::cover(double t) {
  while (segment_.end_time() < t) extend();
}

double AnchoredRate::rate(std::size_t channel, double t) {
  cover(t);
  return segment_.rate(channel, t);
}

double AnchoredRate::integral(std::size_t channel, double t) {
  cover(t);
  return segment_.integral(channel, t);
}

double AnchoredRate::total_integral(double t) {
  cover(t);
  return segment_.total_integral(t);
}

std::optional<Crossing> AnchoredRate::first_crossing(std::span<const double> budgets,
                                                     double horizon) {
  for (std::size_t k = 0;; ++k) {
    if (segment_.knot_count() <= k + 1) {
      if (segment_.knot_time(k) >= horizon) return std::nullopt;
      extend();
    }
    if (auto crossing = segment_.crossing_in_piece(k, budgets)) {
      if (crossing->time <= horizon) return crossing;
      return std::nullopt;
    }
    if (segment_.knot_time(k + 1) >= horizon) return std::nullopt;
  }
}

std::optional<double> AnchoredRate::sample_event_time(Rng& rng, double horizon) {
  require(segment_.channels() == 1, "sample_event_time: single-channel segments only");
  double budget = standard_exponential(rng);
  auto crossing = first_crossing(std::span<const double>(&budget, 1), horizon);
  if (!crossing) return std::nullopt;
  return crossing->time;
}

}  // namespace pdmp
