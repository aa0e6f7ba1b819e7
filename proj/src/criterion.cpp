#include "pdmp/criterion.hpp"

namespace pdmp {

bool criterion_valid(std::span<const CriterionEvent> events, double a, double b) {
  require(a <= b, "criterion_valid: empty window");
  for (std::size_t k = 0; k < events.size(); ++k) {
    require(events[k].time >= a && events[k].time <= b, "criterion_valid: event outside window");
    require(k == 0 || events[k - 1].time < events[k].time,
            "criterion_valid: events must be sorted by time");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const auto& early = events[i];
      const auto& late = events[j];
      Vec gap = late.x - early.x;
      if (!(gap.dot(late.v_minus) > 0.0)) return false;
      if (late.time != b && !(gap.dot(late.v_plus) > 0.0)) return false;
      if (!(gap.dot(early.v_plus) > 0.0)) return false;
      if (early.time != a && !(gap.dot(early.v_minus) > 0.0)) return false;
    }
  }
  return true;
}

bool forward_entry_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e) {
  for (const auto& p : interior) {
    Vec gap = e.x - p.x;
    if (!(gap.dot(e.v_minus) > 0.0) || !(gap.dot(p.v_plus) > 0.0) ||
        !(gap.dot(p.v_minus) > 0.0)) {
      return false;
    }
  }
  return true;
}

bool forward_interior_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e) {
  for (const auto& p : interior) {
    if (!((e.x - p.x).dot(e.v_plus) > 0.0)) return false;
  }
  return true;
}

bool backward_entry_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e) {
  for (const auto& q : interior) {
    Vec gap = q.x - e.x;
    if (!(gap.dot(q.v_minus) > 0.0) || !(gap.dot(q.v_plus) > 0.0) ||
        !(gap.dot(e.v_plus) > 0.0)) {
      return false;
    }
  }
  return true;
}

bool backward_interior_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e) {
  for (const auto& q : interior) {
    if (!((q.x - e.x).dot(e.v_minus) > 0.0)) return false;
  }
  return true;
}

}  // namespace pdmp
