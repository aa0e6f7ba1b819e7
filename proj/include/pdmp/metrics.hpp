#pragma once

#include <cstdint>
#include <string>

namespace pdmp {

/// Per-chain complexity counters. Never shared between chains.
struct RunMetrics {
  std::uint64_t gradient_evaluations = 0;
  std::uint64_t events = 0;
  std::uint64_t steps = 0;
  std::uint64_t mh_proposals = 0;
  std::uint64_t mh_accepts = 0;
  double wall_time = 0.0;  // seconds

  double acceptance_rate() const {
    return mh_proposals == 0
               ? 0.0
               : static_cast<double>(mh_accepts) / static_cast<double>(mh_proposals);
  }

  RunMetrics& operator+=(const RunMetrics& other);

  /// CSV header matching csv_row(). Wall time is optional because it is
  /// the only non-deterministic field.
  static std::string csv_header(bool with_wall_time = false);
  std::string csv_row(bool with_wall_time = false) const;
};

}  // namespace pdmp
