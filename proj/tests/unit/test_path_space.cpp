#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "pdmp/path_space.hpp"
#include "pdmp/skeleton_io.hpp"

using namespace pdmp;

namespace {

KineticState bps_state(int d, Rng& rng) {
  return KineticState{test::random_vec(d, rng), refresh_velocity(DynamicsKind::BPS, d, rng), 1};
}

double max_diff(const KineticState& a, const KineticState& b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff());
}

// Simulates until the path has at least `events` events.
PathSkeleton path_with_events(const PdmpModel& model, int d, std::size_t events, Rng& rng) {
  RunMetrics m;
  for (;;) {
    auto sim = simulate_path(model, bps_state(d, rng), 4.0, rng, m);
    if (sim.path.events.size() >= events) return sim.path;
  }
}

}  // namespace

TEST_CASE("reverse of an event-free path is pure flow reversal") {
  Vec x(2), v(2);
  x << 1, 2;
  v << 0.6, 0.8;
  PathSkeleton w{KineticState{x, v, 1}, {}, 2.5};
  PathSkeleton r = reverse_path(w);
  CHECK((r.initial.x - (x + 2.5 * v)).norm() < 1e-15);
  CHECK(r.initial.v == -v);
  CHECK(r.events.empty());
}

TEST_CASE("single-event reversal keeps the channel and mirrors the time") {
  Target g = Target::gaussian(2);
  PdmpModel model{g, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order1, FixedStep{1.0}}};
  Rng rng(31);
  PathSkeleton w = path_with_events(model, 2, 1, rng);
  PathSkeleton r = reverse_path(w);
  REQUIRE(r.events.size() == w.events.size());
  CHECK(r.events.back().time == doctest::Approx(w.horizon - w.events.front().time));
  CHECK(r.events.back().channel == w.events.front().channel);
  validate_skeleton(r, DynamicsKind::BPS, g);
}

TEST_CASE("property: reversal is an involution") {
  Target f = Target::funnel(3, 1.5);
  PdmpModel model{f, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order0, AdaptiveStep{}}};
  Rng rng(32);
  RunMetrics m;
  for (int k = 0; k < 100; ++k) {
    auto w = simulate_path(model, bps_state(2, rng), 3.0, rng, m).path;
    auto rr = reverse_path(reverse_path(w));
    REQUIRE(rr.events.size() == w.events.size());
    CHECK(max_diff(rr.initial, w.initial) < 1e-12);
    for (std::size_t i = 0; i < w.events.size(); ++i) {
      CHECK(std::abs(rr.events[i].time - w.events[i].time) < 1e-12);
      CHECK(rr.events[i].channel == w.events[i].channel);
      CHECK(max_diff(rr.events[i].post, w.events[i].post) < 1e-12);
    }
  }
}

TEST_CASE("zig-zag reversal is consistent") {
  Target g = Target::gaussian(3);
  PdmpModel model{g, DynamicsKind::ZigZag, ApproxScheme{ApproxOrder::Order1, FixedStep{0.5}}};
  Rng rng(33);
  RunMetrics m;
  KineticState z{test::random_vec(3, rng), refresh_velocity(DynamicsKind::ZigZag, 3, rng), 1};
  auto w = simulate_path(model, z, 5.0, rng, m).path;
  validate_skeleton(w, DynamicsKind::ZigZag, g);
  validate_skeleton(reverse_path(w), DynamicsKind::ZigZag, g);
  CHECK(std::abs(skew_reversibility_residual(w, model, m)) < 1e-8);
}

TEST_CASE("inconsistent skeletons are rejected") {
  Target g = Target::gaussian(2);
  Vec x = Vec::Ones(2);
  Vec v(2);
  v << 1, 0;
  PathSkeleton unordered{KineticState{x, v, 1},
                         {PathEvent{0.5, 0, KineticState{x, v, 1}},
                          PathEvent{0.4, 0, KineticState{x, v, 1}}},
                         1.0};
  CHECK_THROWS_AS(reverse_path(unordered), ContractViolation);
  PathSkeleton beyond{KineticState{x, v, 1}, {PathEvent{1.5, 0, KineticState{x, v, 1}}}, 1.0};
  CHECK_THROWS_AS(check_structure(beyond), ContractViolation);
  PathSkeleton wrong_jump{KineticState{x, v, 1}, {PathEvent{0.5, 0, KineticState{x, v, 1}}}, 1.0};
  CHECK_THROWS_AS(validate_skeleton(wrong_jump, DynamicsKind::BPS, g), ContractViolation);
}

TEST_CASE("path density oracles") {
  Target g = Target::gaussian(2);
  RunMetrics m;
  // x.v = 0.5 at the start: an order-0 rate held constant at 0.5 for the
  // whole path when the step exceeds the horizon.
  Vec x(2), v(2);
  x << 0.5, 0.0;
  v << 1.0, 0.0;
  PdmpModel constant{g, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order0, FixedStep{100.0}}};
  PathSkeleton w{KineticState{x, v, 1}, {}, 2.0};
  auto density = path_log_density(w, constant, m);
  CHECK(density.log_conditional == doctest::Approx(-0.5 * 2.0).epsilon(1e-14));
  CHECK(density.log_mu0 == doctest::Approx(g.log_density(x)));

  // Zero-event residual: log mu(z0) - log mu(zT) - c T + c' T.
  double c_rev = 0.0;  // reversed start moves toward the mode: rate 0
  double residual = skew_reversibility_residual(w, constant, m);
  Vec end = x + 2.0 * v;
  CHECK(residual == doctest::Approx(g.log_density(x) - g.log_density(end) - 0.5 * 2.0 + c_rev * 2.0));

  // One-event path under the exact order-1 scheme.
  PdmpModel exact{g, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order1, FixedStep{1.0}}};
  Rng rng(34);
  PathSkeleton one = path_with_events(exact, 2, 1, rng);
  one.events.resize(1);
  one.horizon = std::min(one.horizon, one.events[0].time + 0.3);
  auto d1 = path_log_density(one, exact, m);
  KineticState pre = one.pre_jump_state(0);
  double rate_at_event = event_rate(DynamicsKind::BPS, g, pre, 0, m);
  REQUIRE(d1.segments.size() == 2);
  CHECK(d1.segments[0].log_rate == doctest::Approx(std::log(rate_at_event)).epsilon(1e-10));
  CHECK(d1.log_conditional ==
        doctest::Approx(d1.segments[0].log_rate - d1.segments[0].integral - d1.segments[1].integral));
}

TEST_CASE("impossible paths have zero density") {
  Target g = Target::gaussian(2);
  RunMetrics m;
  Vec x(2), v(2);
  x << -1.0, 0.0;
  v << 1.0, 0.0;
  PdmpModel model{g, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order1, FixedStep{1.0}}};
  // Jump at t = 0.5 where x.v = -0.5 < 0: the rate is zero there.
  KineticState pre = flow(KineticState{x, v, 1}, 0.5);
  KineticState post = jump(DynamicsKind::BPS, g, pre, 0, m);
  PathSkeleton w{KineticState{x, v, 1}, {PathEvent{0.5, 0, post}}, 1.0};
  CHECK(path_log_density(w, model, m).total() == -INFINITY);
}

TEST_CASE("order1 on gaussians is exactly skew-reversible") {
  Target g = Target::gaussian(4);
  PdmpModel model{g, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order1, AdaptiveStep{}}};
  Rng rng(35);
  RunMetrics m;
  for (int k = 0; k < 100; ++k) {
    auto sim = simulate_path(model, bps_state(4, rng), 3.0, rng, m);
    CHECK(std::abs(skew_reversibility_residual(sim.path, model, m)) < 1e-8);
    double recomputed = path_log_density(sim.path, model, m).log_conditional;
    CHECK(std::abs(recomputed - sim.log_conditional) < 1e-10);
  }
}

TEST_CASE("approximate schemes are not skew-reversible on the funnel") {
  Target f = Target::funnel(3, 1.5);
  PdmpModel model{f, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order0, FixedStep{0.5}}};
  Rng rng(36);
  RunMetrics m;
  double largest = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto sim = simulate_path(model, bps_state(2, rng), 3.0, rng, m);
    largest = std::max(largest, std::abs(skew_reversibility_residual(sim.path, model, m)));
  }
  CHECK(largest > 1e-3);
}

TEST_CASE("survival probability matches the simulator") {
  Target f = Target::funnel(3, 1.5);
  PdmpModel model{f, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order0, FixedStep{0.2}}};
  Vec x(2), v(2);
  x << 0.5, 0.7;
  v << 0.6, 0.8;
  KineticState z{x, v, 1};
  RunMetrics m;
  const double horizon = 0.8;
  double p = std::exp(path_log_density(PathSkeleton{z, {}, horizon}, model, m).log_conditional);
  Rng rng(37);
  const int n = 100000;
  int none = 0;
  for (int i = 0; i < n; ++i) {
    if (simulate_path(model, z, horizon, rng, m).path.events.empty()) ++none;
  }
  double freq = static_cast<double>(none) / n;
  double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(freq - p) < 3 * se);
}

TEST_CASE("skeleton text format round-trips") {
  Target f = Target::funnel(3, 1.5);
  PdmpModel model{f, DynamicsKind::BPS, ApproxScheme{ApproxOrder::Order0, AdaptiveStep{}}};
  Rng rng(38);
  RunMetrics m;
  auto w = path_with_events(model, 2, 2, rng);
  std::stringstream buffer;
  write_skeleton(buffer, w);
  std::string first_line;
  std::getline(std::stringstream(buffer.str()), first_line);
  CHECK(first_line.rfind("skeleton dim=2 horizon=4 events=", 0) == 0);
  auto back = read_skeleton(buffer);
  REQUIRE(back.events.size() == w.events.size());
  CHECK(back.horizon == w.horizon);
  CHECK(back.initial.x == w.initial.x);
  for (std::size_t i = 0; i < w.events.size(); ++i) {
    CHECK(back.events[i].time == w.events[i].time);
    CHECK(back.events[i].post.v == w.events[i].post.v);
  }
  std::stringstream bad("skeleton dim=2 horizon=1 events=1\ninitial 0 0 1 0\n");
  CHECK_THROWS_AS(read_skeleton(bad), ContractViolation);
}
