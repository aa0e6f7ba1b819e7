#pragma once

#include <span>

#include "pdmp/common.hpp"

namespace pdmp {

/// State of the trajectory at one event, velocities taken in true time.
struct CriterionEvent {
  double time;
  Vec x;
  Vec v_minus;
  Vec v_plus;
};

/**
 * @brief No-U-Turn validity of the window [a, b] given its events.
 *
 * For every pair t_i < t_j of event times in the window:
 *   (x_i - x_j) . v_j^- < 0,
 *   (x_i - x_j) . v_j^+ < 0 unless t_j == b,
 *   (x_j - x_i) . v_i^+ > 0,
 *   (x_j - x_i) . v_i^- > 0 unless t_i == a.
 * Events must be sorted by time and lie in [a, b].
 */
bool criterion_valid(std::span<const CriterionEvent> events, double a, double b);

/// Incremental checks used while growing a window. `interior` holds the
/// events already inside (all strictly interior). The entry checks test the
/// pairs formed by a new event sitting on the boundary; the interior checks
/// add the velocity that only counts once the window extends past it.
bool forward_entry_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e);
bool forward_interior_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e);
bool backward_entry_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e);
bool backward_interior_valid(std::span<const CriterionEvent> interior, const CriterionEvent& e);

}  // namespace pdmp
