#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdmp/kinetic.hpp"

namespace pdmp {

enum class ApproxOrder { Order0, Order1 };

struct FixedStep {
  double h;
};

/// Locally adaptive knot spacing. h_guess is the spacing tried at the first
/// knot of every segment; later knots reuse the previous spacing as guess.
struct AdaptiveStep {
  double tol = 0.01;
  double h_guess = 0.1;
  double h_min = 1e-6;
  double h_max = 10.0;
};

using StepPolicy = std::variant<FixedStep, AdaptiveStep>;

struct ApproxScheme {
  ApproxOrder order = ApproxOrder::Order1;
  StepPolicy step = FixedStep{1.0};

  /// Throws ContractViolation if h, tol or the bounds are invalid.
  void validate() const;

  /// Parses "order0|order1" and "fixed:<h>|adaptive:<tol>".
  static ApproxScheme parse(std::string_view order, std::string_view step);
  std::string describe() const;
};

/**
 * @brief Locally adaptive step-size rule.
 *
 * Evaluates the rate at local times 0 and h_guess/2, forms
 * tau = (rate(0) - rate(h_guess/2)) h_guess/2 (one step of size h_guess
 * minus two half steps) and returns h_guess sqrt(tol / (2|tau|)) clamped to
 * [h_min, h_max]. |tau| is floored at 1e-15.
 */
double adapt_step(const std::function<double(double)>& rate_at, double h_guess, double tol,
                  double h_min, double h_max);

/// h_guess sqrt(tol / (2 max(|tau|, 1e-15))) clamped to [h_min, h_max].
double step_from_defect(double tau, double h_guess, double tol, double h_min, double h_max);

struct Crossing {
  double time;
  std::size_t channel;
};

/**
 * @brief Piecewise approximation of the event rate along one inter-event
 * segment, one curve per jump channel.
 *
 * Knots store signed (unclipped) rates. Order 0 holds the clipped knot value
 * until the next knot. Order 1 interpolates the signed rate linearly between
 * knots and clips the result, so a sign change inside a piece becomes an
 * extra breakpoint and rates that are affine along the flow are reproduced
 * exactly, including across their zero.
 */
class RateSegment {
 public:
  RateSegment(ApproxOrder order, std::size_t channels);

  /// Times must start at 0 and increase strictly.
  void append_knot(double time, std::span<const double> signed_values);

  ApproxOrder order() const { return order_; }
  std::size_t channels() const { return channels_; }
  std::size_t knot_count() const { return times_.size(); }
  double knot_time(std::size_t k) const { return times_[k]; }
  double knot_value(std::size_t k, std::size_t channel) const {
    return values_[k * channels_ + channel];
  }
  double end_time() const { return times_.back(); }

  /// Approximate rate at local time t in [0, end_time()].
  double rate(std::size_t channel, double t) const;
  /// Exact integral of the approximate rate over [0, t], t in [0, end_time()].
  double integral(std::size_t channel, double t) const;
  double total_integral(double t) const;

  /// Earliest time in piece k (between knots k and k+1) at which some
  /// channel's integral reaches its budget.
  std::optional<Crossing> crossing_in_piece(std::size_t k, std::span<const double> budgets) const;

  /// Smallest t in [0, end_time()] with integral(channel, t) == budget.
  std::optional<double> invert(std::size_t channel, double budget) const;

 private:
  std::size_t piece_of(double t) const;
  double piece_integral(std::size_t k, std::size_t channel, double u) const;
  std::optional<double> piece_invert(std::size_t k, std::size_t channel, double remaining) const;

  ApproxOrder order_;
  std::size_t channels_;
  std::vector<double> times_;
  std::vector<double> values_;      // knot-major, signed
  std::vector<double> cumulative_;  // knot-major, integral up to each knot
};

/// Draws E ~ Exp(1) and returns the first time the integrated rate reaches
/// E, or nullopt if the covered range ends first.
std::optional<double> sample_event_time(const RateSegment& segment, Rng& rng);

/// Everything that defines the approximate process for a target.
struct PdmpModel {
  const Target& target;
  DynamicsKind kind;
  ApproxScheme scheme;
};

/// Called for every gradient evaluation with the segment-local time and
/// the evaluation position.
using EvaluationObserver = std::function<void(double local_time, const Vec& x)>;

/// Upper bound on knots in one segment; guards runaway extension.
inline constexpr std::size_t kMaxKnotsPerSegment = 1'000'000;

/**
 * @brief The rate approximation anchored at a state, built lazily knot by
 * knot along the flow.
 *
 * Adaptive spacing applies the step rule to the signed channel rates, with
 * tau summed in absolute value over channels.
 *
 * Knot placement depends only on the anchor state and the model, so
 * rebuilding from the same anchor reproduces the same segment bit for bit.
 */
class AnchoredRate {
 public:
  AnchoredRate(const PdmpModel& model, KineticState anchor, RunMetrics& metrics,
               const Vec* anchor_grad = nullptr, const EvaluationObserver* observer = nullptr);

  const RateSegment& segment() const { return segment_; }
  const KineticState& anchor() const { return anchor_; }

  /// Appends knots until end_time() >= t.
  void cover(double t);

  double rate(std::size_t channel, double t);
  double integral(std::size_t channel, double t);
  double total_integral(double t);

  /// First time some channel's integrated rate reaches its budget, or
  /// nullopt if that does not happen by the horizon.
  std::optional<Crossing> first_crossing(std::span<const double> budgets, double horizon);

  /// Single-channel convenience: draws E ~ Exp(1) and inverts.
  std::optional<double> sample_event_time(Rng& rng, double horizon);

 private:
  void append_at(double t, const Vec* grad);
  void extend();

  const PdmpModel& model_;
  KineticState anchor_;
  RunMetrics& metrics_;
  const EvaluationObserver* observer_;
  RateSegment segment_;
  std::vector<double> scratch_;
  double h_guess_ = 0.0;
};

}  // namespace pdmp
