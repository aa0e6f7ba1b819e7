#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdmp/harness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputDirEnv = "PDMP_NUTS_OUTPUT_DIR";

fs::path resolve_output(const std::string& out, const std::string& default_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv(kOutputDirEnv);
  return fs::path(dir != nullptr && *dir != '\0' ? dir : ".") / default_name;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + path.string() + "'");
  file << content;
  if (!file) throw std::runtime_error("failed writing output file '" + path.string() + "'");
}

fs::path stem_of(const fs::path& path) { return path.parent_path() / path.stem(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metropolis-adjusted approximate PDMP samplers: experiment runner"};
  app.require_subcommand(1);

  std::string target;
  std::string sampler;
  std::string dynamics = "bps";
  std::string order;
  std::vector<std::string> steps;
  double horizon = 1.0;
  double refresh = 1.0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<int> dims{4, 16, 64};
  std::vector<double> hmc_eps{0.5, 0.1};
  double hmc_step = 0.1;
  int leapfrog = 10;
  bool serial = false;
  std::string chain_out;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--target", target, "gaussian:d=<int> | scaled-gaussian:d=<int>,sigma=<real> | funnel:a=<real>,b=<real>");
    sub->add_option("--sampler", sampler, "mh-bps | mh-zigzag | nuts-exact | doubly-adaptive | hmc");
    sub->add_option("--dynamics", dynamics, "bps | zigzag (NUTS samplers)");
    sub->add_option("--scheme", order, "order0 | order1");
    sub->add_option("--step", steps, "fixed:<h> | adaptive:<tol>; repeat for a grid");
    sub->add_option("--horizon", horizon, "MH path length T");
    sub->add_option("--refresh", refresh, "MH velocity refresh probability per step");
    sub->add_option("--steps", n_steps, "Markov chain steps");
    sub->add_option("--seed", seed, "root seed");
    sub->add_option("--out", out, "output file (default: $" + std::string(kOutputDirEnv) + "/<experiment file>)");
    sub->add_option("--hmc-step", hmc_step, "HMC step size (sampler hmc)");
    sub->add_option("--leapfrog", leapfrog, "HMC leapfrog steps");
    sub->add_flag("--serial", serial, "run grid cells serially");
  };

  auto* scaling = app.add_subcommand("gaussian-scaling", "events and ESS per step across dimensions");
  common(scaling);
  scaling->add_option("--dims", dims, "dimension grid")->delimiter(',');
  auto* funnel = app.add_subcommand("funnel-compare", "doubly adaptive sampler against fixed-step HMC");
  common(funnel);
  funnel->add_option("--hmc-eps", hmc_eps, "HMC step-size grid")->delimiter(',');
  auto* trajectory = app.add_subcommand("trajectory", "stopped paths with gradient-evaluation locations");
  common(trajectory);
  auto* single = app.add_subcommand("run", "single chain summary");
  common(single);
  single->add_option("--chain-out", chain_out, "also write the chain as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    struct Defaults {
      const char* target;
      const char* sampler;
      const char* order;
      std::size_t steps;
      const char* file;
    };
    Defaults defaults = *scaling      ? Defaults{"gaussian:d=4", "nuts-exact", "order1", 1000, "gaussian_scaling.csv"}
                        : *funnel     ? Defaults{"funnel:a=3,b=1.5", "doubly-adaptive", "order0", 20000, "funnel_compare.csv"}
                        : *trajectory ? Defaults{"funnel:a=3,b=2", "doubly-adaptive", "order0", 20, "trajectory.txt"}
                                      : Defaults{"gaussian:d=2", "doubly-adaptive", "order0", 1000, "run.csv"};
    if (target.empty()) target = defaults.target;
    if (sampler.empty()) sampler = defaults.sampler;
    if (order.empty()) order = defaults.order;
    if (n_steps == 0) n_steps = defaults.steps;

    pdmp::ExperimentConfig cfg;
    cfg.target = target;
    cfg.steps = n_steps;
    cfg.sampler.kind = pdmp::parse_sampler(sampler);
    cfg.sampler.dynamics = pdmp::parse_dynamics(dynamics);
    cfg.sampler.horizon = horizon;
    cfg.sampler.refresh_probability = refresh;
    cfg.sampler.hmc = pdmp::HMCConfig{hmc_step, leapfrog};
    if (steps.empty()) steps.push_back("adaptive:0.01");
    for (const auto& s : steps) cfg.schemes.push_back(pdmp::ApproxScheme::parse(order, s));
    cfg.sampler.scheme = cfg.schemes.front();
    cfg.dims = dims;
    cfg.hmc_steps = hmc_eps;
    cfg.seed = seed;
    cfg.parallel = !serial;

    std::ostringstream buffer;
    fs::path path = resolve_output(out, defaults.file);
    if (*scaling) {
      pdmp::run_gaussian_scaling(cfg, buffer);
      write_file(path, buffer.str());
    } else if (*funnel) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      pdmp::run_funnel_compare(cfg, buffer, stem_of(path));
      write_file(path, buffer.str());
    } else if (*trajectory) {
      pdmp::run_trajectory_dump(cfg, buffer);
      write_file(path, buffer.str());
    } else {
      if (!chain_out.empty() && fs::path(chain_out).has_parent_path()) {
        fs::create_directories(fs::path(chain_out).parent_path());
      }
      pdmp::run_single(cfg, buffer, chain_out);
      write_file(path, buffer.str());
    }
    std::cerr << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "pdmp-nuts: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
