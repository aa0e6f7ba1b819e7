#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pdmp/hmc.hpp"
#include "pdmp/metropolis.hpp"
#include "pdmp/nuts.hpp"

namespace pdmp {

enum class SamplerKind { MHBPS, MHZigZag, NUTSExact, DoublyAdaptive, HMC };

std::string_view to_string(SamplerKind kind);
/// "mh-bps", "mh-zigzag", "nuts-exact", "doubly-adaptive" or "hmc".
SamplerKind parse_sampler(std::string_view name);

struct SamplerConfig {
  SamplerKind kind = SamplerKind::DoublyAdaptive;
  DynamicsKind dynamics = DynamicsKind::BPS;  // NUTS samplers only
  ApproxScheme scheme{ApproxOrder::Order0, AdaptiveStep{}};
  double horizon = 1.0;                       // MH samplers only
  double refresh_probability = 1.0;           // MH samplers only
  HMCConfig hmc;
  GrowthLimits limits;

  void validate() const;
  /// Step setting shown in outputs: the fixed h, the adaptive tol, or the
  /// HMC step size.
  double step_value() const;
  std::string describe_step() const;
};

struct ChainResult {
  std::vector<Vec> samples;
  RunMetrics metrics;

  std::vector<double> coordinate(int i) const;
};

/// Runs one chain from the origin. The seed fully determines the result.
ChainResult run_chain(const Target& target, const SamplerConfig& cfg, std::size_t steps,
                      std::uint64_t seed);

/// One independent unit of work in an experiment grid.
struct Cell {
  Target target;
  SamplerConfig sampler;
  std::size_t steps;
  std::uint64_t seed;
};

/// Reference implementation: cells run one after another.
std::vector<ChainResult> run_cells_serial(const std::vector<Cell>& cells);
/// OpenMP implementation; results are stored by cell index, so the output
/// equals run_cells_serial's for the same cells.
std::vector<ChainResult> run_cells_parallel(const std::vector<Cell>& cells);

inline constexpr int kCsvSchemaVersion = 1;

struct ExperimentConfig {
  std::string target = "gaussian:d=2";
  SamplerConfig sampler;
  std::vector<ApproxScheme> schemes;  // step grid; empty means {sampler.scheme}
  std::vector<int> dims{4, 16, 64};
  std::vector<double> hmc_steps{0.5, 0.1};
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  bool parallel = true;
};

/// One row per (d, step setting) on standard Gaussians.
void run_gaussian_scaling(const ExperimentConfig& cfg, std::ostream& out);

/// One row per sampler setting on the funnel target. When chain_stem is
/// non-empty, each chain is also written to <chain_stem>_<sampler>_<step>.csv.
void run_funnel_compare(const ExperimentConfig& cfg, std::ostream& out,
                        const std::filesystem::path& chain_stem = {});

/// Doubly adaptive steps on the target, written as stopped paths with every
/// gradient evaluation made while growing them.
void run_trajectory_dump(const ExperimentConfig& cfg, std::ostream& out);

/// Single chain: one summary row.
void run_single(const ExperimentConfig& cfg, std::ostream& out,
                const std::filesystem::path& chain_path = {});

/// Writes a chain as CSV: step,x1..xd.
void write_chain(std::ostream& out, const ChainResult& chain);

}  // namespace pdmp
