#include "pdmp/targets.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include "pdmp/csv.hpp"

namespace pdmp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

int family_dim(const Target::Family& family) {
  return std::visit(
      [](const auto& f) -> int {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Funnel>) {
          return 2;
        } else {
          return f.dim;
        }
      },
      family);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view key) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ContractViolation("target: invalid value for '" + std::string(key) +
                            "': '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, std::string_view key) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ContractViolation("target: invalid integer for '" + std::string(key) +
                            "': '" + std::string(text) + "'");
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body) {
  std::map<std::string, std::string, std::less<>> params;
  while (!body.empty()) {
    auto comma = body.find(',');
    auto item = trim(body.substr(0, comma));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ContractViolation("target: expected key=value, got '" + std::string(item) + "'");
    }
    params.emplace(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
  }
  return params;
}

const std::string& need(const std::map<std::string, std::string, std::less<>>& params,
                        std::string_view key, std::string_view family) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw ContractViolation("target: '" + std::string(family) + "' requires '" +
                            std::string(key) + "'");
  }
  return it->second;
}

}  // namespace

Target::Target(Family family) : family_(family), dim_(family_dim(family)) {}

Target Target::gaussian(int dim) {
  require(dim > 0, "gaussian: dimension must be positive");
  return Target(StandardGaussian{dim});
}

Target Target::scaled_gaussian(int dim, double sigma) {
  require(dim > 0, "scaled-gaussian: dimension must be positive");
  require(sigma > 0.0 && std::isfinite(sigma), "scaled-gaussian: sigma must be positive");
  return Target(ScaledGaussian{dim, sigma});
}

Target Target::funnel(double a, double b) {
  require(a > 0.0 && std::isfinite(a), "funnel: a must be positive");
  require(b != 0.0 && std::isfinite(b), "funnel: b must be nonzero");
  return Target(Funnel{a, b});
}

Target Target::parse(std::string_view spec) {
  auto colon = spec.find(':');
  auto name = trim(spec.substr(0, colon));
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{}
                                                             : spec.substr(colon + 1));
  auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : params) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) {
        throw ContractViolation("target: unknown parameter '" + key + "' for '" +
                                std::string(name) + "'");
      }
    }
  };
  if (name == "gaussian") {
    check_keys({"d"});
    return gaussian(parse_int(need(params, "d", name), "d"));
  }
  if (name == "scaled-gaussian") {
    check_keys({"d", "sigma"});
    return scaled_gaussian(parse_int(need(params, "d", name), "d"),
                           parse_real(need(params, "sigma", name), "sigma"));
  }
  if (name == "funnel") {
    check_keys({"a", "b"});
    return funnel(parse_real(need(params, "a", name), "a"),
                  parse_real(need(params, "b", name), "b"));
  }
  throw ContractViolation("target: unknown family '" + std::string(name) + "'");
}

std::string Target::describe() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, StandardGaussian>) {
          return "gaussian:d=" + std::to_string(f.dim);
        } else if constexpr (std::is_same_v<F, ScaledGaussian>) {
          return "scaled-gaussian:d=" + std::to_string(f.dim) + ",sigma=" + format_double(f.sigma);
        } else {
          return "funnel:a=" + format_double(f.a) + ",b=" + format_double(f.b);
        }
      },
      family_);
}

double Target::log_density(const Vec& x) const {
  require(x.size() == dim_, "log_density: dimension mismatch");
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, StandardGaussian>) {
          return -0.5 * x.squaredNorm() - 0.5 * f.dim * kLogTwoPi;
        } else if constexpr (std::is_same_v<F, ScaledGaussian>) {
          double s2 = f.sigma * f.sigma;
          return -0.5 * s2 * x.squaredNorm() - 0.5 * f.dim * kLogTwoPi +
                 f.dim * std::log(f.sigma);
        } else {
          double x1 = x[0];
          double x2 = x[1];
          double log_x1 = -0.5 * x1 * x1 / (f.a * f.a) - 0.5 * (kLogTwoPi + 2.0 * std::log(f.a));
          double log_x2 = -0.5 * x2 * x2 * std::exp(-x1 / f.b) - 0.5 * x1 / f.b - 0.5 * kLogTwoPi;
          return log_x1 + log_x2;
        }
      },
      family_);
}

Vec Target::grad_log_density(const Vec& x, RunMetrics& metrics) const {
  require(x.size() == dim_, "grad_log_density: dimension mismatch");
  ++metrics.gradient_evaluations;
  return std::visit(
      [&](const auto& f) -> Vec {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, StandardGaussian>) {
          return -x;
        } else if constexpr (std::is_same_v<F, ScaledGaussian>) {
          return -(f.sigma * f.sigma) * x;
        } else {
          double x1 = x[0];
          double x2 = x[1];
          double inv_var = std::exp(-x1 / f.b);
          Vec g(2);
          g[0] = -x1 / (f.a * f.a) + 0.5 * x2 * x2 * inv_var / f.b - 0.5 / f.b;
          g[1] = -x2 * inv_var;
          return g;
        }
      },
      family_);
}

}  // namespace pdmp
