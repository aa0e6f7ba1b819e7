#include "pdmp/metrics.hpp"

#include "pdmp/csv.hpp"

namespace pdmp {

RunMetrics& RunMetrics::operator+=(const RunMetrics& other) {
  gradient_evaluations += other.gradient_evaluations;
  events += other.events;
  steps += other.steps;
  mh_proposals += other.mh_proposals;
  mh_accepts += other.mh_accepts;
  wall_time += other.wall_time;
  return *this;
}

std::string RunMetrics::csv_header(bool with_wall_time) {
  std::string header =
      "gradient_evaluations,events,steps,mh_proposals,mh_accepts";
  if (with_wall_time) {
    header += ",wall_time";
  }
  return header;
}

std::string RunMetrics::csv_row(bool with_wall_time) const {
  CsvRow row;
  row.add(gradient_evaluations)
      .add(events)
      .add(steps)
      .add(mh_proposals)
      .add(mh_accepts);
  if (with_wall_time) {
    row.add(wall_time);
  }
  return row.str();
}

}  // namespace pdmp
