#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "pdmp/criterion.hpp"

using namespace pdmp;

namespace {

Vec s(double a) {
  Vec v(1);
  v << a;
  return v;
}

std::vector<CriterionEvent> random_events(Rng& rng, int d, int n) {
  std::vector<CriterionEvent> events;
  double t = 0.0;
  Vec x = Vec::Zero(d);
  Vec v = test::random_vec(d, rng).normalized();
  for (int i = 0; i < n; ++i) {
    double dt = std::uniform_real_distribution<double>(0.2, 1.5)(rng);
    t += dt;
    x += dt * v;
    // Mostly small deflections so that valid windows occur.
    Vec w = (v + 0.4 * test::random_vec(d, rng)).normalized();
    events.push_back(CriterionEvent{t, x, v, w});
    v = w;
  }
  return events;
}

}  // namespace

TEST_CASE("criterion oracles") {
  std::vector<CriterionEvent> none;
  CHECK(criterion_valid(none, 0.0, 1.0));
  std::vector<CriterionEvent> one{CriterionEvent{0.5, s(0), s(1), s(-1)}};
  CHECK(criterion_valid(one, 0.0, 1.0));

  std::vector<CriterionEvent> apart{CriterionEvent{1.0, s(0), s(1), s(1)},
                                    CriterionEvent{2.0, s(3), s(1), s(1)}};
  CHECK(criterion_valid(apart, 0.0, 3.0));

  std::vector<CriterionEvent> turning{CriterionEvent{1.0, s(0), s(1), s(1)},
                                      CriterionEvent{2.0, s(3), s(1), s(-1)}};
  CHECK_FALSE(criterion_valid(turning, 0.0, 3.0));
  // The post-jump velocity is not checked at the right boundary.
  CHECK(criterion_valid(turning, 0.0, 2.0));
  // Nor the pre-jump velocity at the left boundary.
  std::vector<CriterionEvent> arriving{CriterionEvent{1.0, s(0), s(-1), s(1)},
                                       CriterionEvent{2.0, s(3), s(1), s(1)}};
  CHECK(criterion_valid(arriving, 1.0, 3.0));
  CHECK_FALSE(criterion_valid(arriving, 0.0, 3.0));
}

TEST_CASE("criterion input validation") {
  std::vector<CriterionEvent> unsorted{CriterionEvent{2.0, s(0), s(1), s(1)},
                                       CriterionEvent{1.0, s(3), s(1), s(1)}};
  CHECK_THROWS_AS(criterion_valid(unsorted, 0.0, 3.0), ContractViolation);
  CHECK_THROWS_AS(criterion_valid(unsorted, 0.0, 1.5), ContractViolation);
}

TEST_CASE("property: sub-windows of valid windows are valid") {
  Rng rng(51);
  int valid_windows = 0;
  for (int trial = 0; trial < 400 && valid_windows < 100; ++trial) {
    auto events = random_events(rng, 3, 6);
    double a = events.front().time - 0.1;
    double b = events.back().time + 0.1;
    if (!criterion_valid(events, a, b)) continue;
    ++valid_windows;
    std::uniform_real_distribution<double> unif(a, b);
    for (int k = 0; k < 5; ++k) {
      double lo = unif(rng);
      double hi = unif(rng);
      if (lo > hi) std::swap(lo, hi);
      std::vector<CriterionEvent> sub;
      for (const auto& e : events) {
        if (e.time >= lo && e.time <= hi) sub.push_back(e);
      }
      CHECK(criterion_valid(sub, lo, hi));
      // Windows that end exactly on events.
      if (sub.size() >= 2) CHECK(criterion_valid(sub, sub.front().time, sub.back().time));
    }
  }
  CHECK(valid_windows == 100);
}

TEST_CASE("property: supersets of invalid windows are invalid") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    auto events = random_events(rng, 2, 6);
    std::vector<CriterionEvent> inner(events.begin() + 1, events.end() - 1);
    double a = inner.front().time - 0.05;
    double b = inner.back().time + 0.05;
    if (criterion_valid(inner, a, b)) continue;
    CHECK_FALSE(criterion_valid(events, events.front().time - 0.05, events.back().time + 0.05));
  }
}

TEST_CASE("incremental checks agree with the batch criterion") {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    auto events = random_events(rng, 2, 5);
    // Grow forward: events[0..k-1] interior, events[k] arrives on the right.
    for (std::size_t k = 1; k < events.size(); ++k) {
      std::vector<CriterionEvent> interior(events.begin(), events.begin() + k);
      double a = events.front().time - 0.1;
      if (!criterion_valid(interior, a, events[k].time - 1e-9)) break;
      std::vector<CriterionEvent> with(events.begin(), events.begin() + k + 1);
      CHECK(forward_entry_valid(interior, events[k]) == criterion_valid(with, a, events[k].time));
      if (forward_entry_valid(interior, events[k])) {
        CHECK(forward_interior_valid(interior, events[k]) ==
              criterion_valid(with, a, events[k].time + 0.1));
      }
    }
    // Grow backward: events[k+1..] interior, events[k] arrives on the left.
    for (std::size_t k = events.size() - 1; k-- > 0;) {
      std::vector<CriterionEvent> interior(events.begin() + k + 1, events.end());
      double b = events.back().time + 0.1;
      if (!criterion_valid(interior, events[k].time + 1e-9, b)) break;
      std::vector<CriterionEvent> with(events.begin() + k, events.end());
      CHECK(backward_entry_valid(interior, events[k]) == criterion_valid(with, events[k].time, b));
      if (backward_entry_valid(interior, events[k])) {
        CHECK(backward_interior_valid(interior, events[k]) ==
              criterion_valid(with, events[k].time - 0.1, b));
      }
    }
  }
}
