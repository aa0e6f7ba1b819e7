#include "pdmp/skeleton_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pdmp/csv.hpp"

namespace pdmp {

namespace {

void write_state(std::ostream& out, const KineticState& z) {
  for (double x : z.x) out << ' ' << format_double(x);
  for (double v : z.v) out << ' ' << format_double(v);
}

double parse_number(const std::string& token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  require(ec == std::errc() && ptr == token.data() + token.size(),
          "skeleton: malformed number '" + token + "'");
  return value;
}

std::string expect_field(std::istringstream& line, const std::string& key) {
  std::string token;
  require(static_cast<bool>(line >> token) && token.rfind(key + "=", 0) == 0,
          "skeleton: expected field " + key);
  return token.substr(key.size() + 1);
}

KineticState read_state(std::istringstream& line, int dim) {
  KineticState z{Vec(dim), Vec(dim), 1};
  std::string token;
  for (int i = 0; i < 2 * dim; ++i) {
    require(static_cast<bool>(line >> token), "skeleton: truncated state");
    (i < dim ? z.x(i) : z.v(i - dim)) = parse_number(token);
  }
  return z;
}

std::istringstream next_line(std::istream& in, const std::string& tag) {
  std::string text;
  require(static_cast<bool>(std::getline(in, text)), "skeleton: missing '" + tag + "' line");
  std::istringstream line(text);
  std::string head;
  line >> head;
  require(head == tag, "skeleton: expected '" + tag + "' line, found '" + head + "'");
  return line;
}

}  // namespace

void write_skeleton(std::ostream& out, const PathSkeleton& path) {
  out << "skeleton dim=" << path.initial.dim() << " horizon=" << format_double(path.horizon)
      << " events=" << path.events.size() << '\n';
  out << "initial";
  write_state(out, path.initial);
  out << '\n';
  for (const auto& e : path.events) {
    out << "event " << format_double(e.time) << ' ' << e.channel;
    write_state(out, e.post);
    out << '\n';
  }
}

PathSkeleton read_skeleton(std::istream& in) {
  auto header = next_line(in, "skeleton");
  double dim_value = parse_number(expect_field(header, "dim"));
  double horizon = parse_number(expect_field(header, "horizon"));
  double count_value = parse_number(expect_field(header, "events"));
  require(dim_value >= 1 && dim_value == static_cast<int>(dim_value), "skeleton: bad dim");
  require(count_value >= 0 && count_value == static_cast<double>(static_cast<long>(count_value)),
          "skeleton: bad event count");
  int dim = static_cast<int>(dim_value);

  PathSkeleton path;
  path.horizon = horizon;
  auto initial = next_line(in, "initial");
  path.initial = read_state(initial, dim);
  for (long k = 0; k < static_cast<long>(count_value); ++k) {
    auto line = next_line(in, "event");
    std::string time_token;
    std::string channel_token;
    require(static_cast<bool>(line >> time_token >> channel_token), "skeleton: truncated event");
    double channel = parse_number(channel_token);
    require(channel >= 0 && channel == static_cast<double>(static_cast<long>(channel)),
            "skeleton: bad channel");
    double time = parse_number(time_token);
    path.events.push_back(
        PathEvent{time, static_cast<std::size_t>(channel), read_state(line, dim)});
  }
  check_structure(path);
  return path;
}

}  // namespace pdmp
