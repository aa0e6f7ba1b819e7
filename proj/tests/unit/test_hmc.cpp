#include <doctest.h>

#include "helpers.hpp"
#include "pdmp/hmc.hpp"

using namespace pdmp;

TEST_CASE("leapfrog hand arithmetic") {
  Target g = Target::gaussian(1);
  RunMetrics m;
  Vec x(1), v(1);
  x << 1.0;
  v << 0.0;
  auto out = leapfrog(g, x, v, 0.1, 1, m);
  CHECK(out.x(0) == doctest::Approx(0.995).epsilon(1e-14));
  CHECK(out.v(0) == doctest::Approx(-0.09975).epsilon(1e-14));
  CHECK(m.gradient_evaluations == 2);
  leapfrog(g, x, v, 0.1, 7, m);
  CHECK(m.gradient_evaluations == 2 + 8);
}

TEST_CASE("leapfrog is time-reversible") {
  Target f = Target::funnel(3, 1.5);
  Rng rng(71);
  RunMetrics m;
  for (int k = 0; k < 20; ++k) {
    Vec x = test::random_vec(2, rng);
    Vec v = test::random_vec(2, rng);
    auto fwd = leapfrog(f, x, v, 0.05, 20, m);
    auto back = leapfrog(f, fwd.x, -fwd.v, 0.05, 20, m);
    CHECK((back.x - x).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.v + v).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("energy error is second order") {
  Target g = Target::gaussian(2);
  RunMetrics m;
  Vec x(2), v(2);
  x << 1.0, -0.5;
  v << 0.3, 0.8;
  auto error = [&](double eps) {
    auto out = leapfrog(g, x, v, eps, static_cast<int>(std::lround(1.0 / eps)), m);
    return std::abs(hamiltonian(g, out.x, out.v) - hamiltonian(g, x, v));
  };
  double ratio = error(0.1) / error(0.05);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("tiny steps are always accepted") {
  Target g = Target::gaussian(2);
  Rng rng(72);
  RunMetrics m;
  Vec x = Vec::Zero(2);
  HMCConfig cfg{1e-4, 1};
  for (int i = 0; i < 1000; ++i) x = hmc_step(x, cfg, g, rng, m);
  CHECK(m.acceptance_rate() > 0.999);
}

TEST_CASE("HMC variance on a 1-d gaussian") {
  Target g = Target::gaussian(1);
  Rng rng(73);
  RunMetrics m;
  Vec x = Vec::Zero(1);
  HMCConfig cfg{0.5, 10};
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    x = hmc_step(x, cfg, g, rng, m);
    xs.push_back(x(0));
  }
  CHECK(test::variance(xs) > 0.95);
  CHECK(test::variance(xs) < 1.05);
}

TEST_CASE("divergent trajectories are rejected") {
  Target f = Target::funnel(3, 1.5);
  Rng rng(74);
  RunMetrics m;
  Vec x(2);
  x << -12.0, 0.5;
  HMCConfig cfg{5.0, 50};
  auto result = hmc_transition(x, cfg, f, rng, m);
  CHECK_FALSE(result.accepted);
  CHECK(result.x == x);
}

TEST_CASE("HMC configuration validation") {
  Target g = Target::gaussian(1);
  Rng rng(75);
  RunMetrics m;
  CHECK_THROWS_AS(hmc_step(Vec::Zero(1), HMCConfig{0.0, 1}, g, rng, m), ContractViolation);
  CHECK_THROWS_AS(hmc_step(Vec::Zero(1), HMCConfig{0.1, 0}, g, rng, m), ContractViolation);
  CHECK_THROWS_AS(leapfrog(g, Vec::Zero(1), Vec::Zero(1), -1.0, 1, m), ContractViolation);
}
