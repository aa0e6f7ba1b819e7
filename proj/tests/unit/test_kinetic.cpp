#include <doctest.h>

#include "helpers.hpp"
#include "pdmp/kinetic.hpp"

using namespace pdmp;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

KineticState random_bps_state(int d, Rng& rng) {
  return KineticState{test::random_vec(d, rng), refresh_velocity(DynamicsKind::BPS, d, rng), 1};
}

}  // namespace

TEST_CASE("flow oracles") {
  KineticState z{v2(0, 0), v2(1, 0), 1};
  CHECK(flow(z, 2.0).x == v2(2, 0));
  KineticState back{v2(2, 0), v2(1, 0), -1};
  CHECK(flow(back, 2.0).x == v2(0, 0));
  CHECK(flow(z, 0.0).x == z.x);
  CHECK(flow(z, 0.0).v == z.v);
}

TEST_CASE("event rate oracles") {
  Target g = Target::gaussian(2);
  RunMetrics m;
  CHECK(event_rate(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(1, 0), 1}, 0, m) == 1.0);
  CHECK(event_rate(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(-1, 0), 1}, 0, m) == 0.0);
  CHECK(event_rate(DynamicsKind::ZigZag, g, KineticState{v2(1, 2), v2(1, -1), 1}, 1, m) == 0.0);
  CHECK(event_rate(DynamicsKind::ZigZag, g, KineticState{v2(1, 2), v2(1, 1), 1}, 1, m) == 2.0);
  CHECK(event_rate(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(1, 0), -1}, 0, m) == 0.0);
  CHECK_THROWS_AS(event_rate(DynamicsKind::ZigZag, g, KineticState{v2(1, 2), v2(1, 1), 1}, 2, m),
                  ContractViolation);
}

TEST_CASE("jump oracles") {
  Target g = Target::gaussian(2);
  RunMetrics m;
  CHECK(jump(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(1, 0), 1}, 0, m).v == v2(-1, 0));
  CHECK(jump(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(0, 1), 1}, 0, m).v == v2(0, 1));
  CHECK(jump(DynamicsKind::ZigZag, g, KineticState{v2(3, 4), v2(1, 1), 1}, 0, m).v == v2(-1, 1));
  auto jumped = jump(DynamicsKind::BPS, g, KineticState{v2(1, 0), v2(1, 0), 1}, 0, m);
  CHECK(jumped.x == v2(1, 0));
  CHECK_THROWS_AS(jump(DynamicsKind::BPS, g, KineticState{v2(0, 0), v2(1, 0), 1}, 0, m),
                  DegenerateGradient);
}

TEST_CASE("refresh velocity") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    CHECK(std::abs(refresh_velocity(DynamicsKind::BPS, 3, rng).norm() - 1.0) < 1e-12);
    Vec zz = refresh_velocity(DynamicsKind::ZigZag, 4, rng);
    CHECK(valid_velocity(DynamicsKind::ZigZag, zz));
  }
  std::vector<double> first;
  for (int k = 0; k < 100000; ++k) first.push_back(refresh_velocity(DynamicsKind::BPS, 2, rng)(0));
  CHECK(std::abs(test::mean(first)) < 0.02);
}

TEST_CASE("flip conjugate") {
  KineticState z{v2(1, 2), v2(1, 0), 1};
  CHECK(flip_conjugate(z).v == v2(-1, 0));
  CHECK(flip_conjugate(z).x == z.x);
  CHECK(flip_conjugate(flip_conjugate(z)).v == z.v);
  CHECK(flip_conjugate(z).v.norm() == z.v.norm());
}

TEST_CASE("property: BPS jump is a norm-preserving involution") {
  Rng rng(11);
  RunMetrics m;
  Target t = Target::funnel(3, 1.5);
  for (int k = 0; k < 100; ++k) {
    KineticState z = random_bps_state(2, rng);
    KineticState once = jump(DynamicsKind::BPS, t, z, 0, m);
    KineticState twice = jump(DynamicsKind::BPS, t, once, 0, m);
    CHECK((twice.v - z.v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(once.v.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("property: positive-part decomposition") {
  Rng rng(12);
  RunMetrics m;
  Target t = Target::funnel(3, 1.5);
  for (int k = 0; k < 100; ++k) {
    KineticState z = random_bps_state(2, rng);
    double sum = event_rate(DynamicsKind::BPS, t, z, 0, m) +
                 event_rate(DynamicsKind::BPS, t, flip_conjugate(z), 0, m);
    double expected = std::abs(t.grad_log_density(z.x, m).dot(z.v));
    CHECK(sum == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("property: flow composes and is a unit translation") {
  Rng rng(13);
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    KineticState z = random_bps_state(3, rng);
    double s = unif(rng);
    double t = unif(rng);
    CHECK((flow(flow(z, s), t).x - flow(z, s + t).x).cwiseAbs().maxCoeff() < 1e-12);
    // The map is x -> x + t v with v fixed: its Jacobian is the identity.
    Vec e = test::random_vec(3, rng);
    KineticState shifted = z;
    shifted.x += e;
    CHECK(((flow(shifted, t).x - flow(z, t).x) - e).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(flow(z, t).v == z.v);
  }
}
