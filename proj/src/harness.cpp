#include "pdmp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <utility>

#include "pdmp/csv.hpp"
#include "pdmp/ess.hpp"
#include "pdmp/skeleton_io.hpp"

namespace pdmp {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::MHBPS: return "mh-bps";
    case SamplerKind::MHZigZag: return "mh-zigzag";
    case SamplerKind::NUTSExact: return "nuts-exact";
    case SamplerKind::DoublyAdaptive: return "doubly-adaptive";
    case SamplerKind::HMC: return "hmc";
  }
  return "unknown";
}

SamplerKind parse_sampler(std::string_view name) {
  for (auto kind : {SamplerKind::MHBPS, SamplerKind::MHZigZag, SamplerKind::NUTSExact,
                    SamplerKind::DoublyAdaptive, SamplerKind::HMC}) {
    if (name == to_string(kind)) return kind;
  }
  throw ContractViolation("unknown sampler '" + std::string(name) +
                          "' (expected mh-bps, mh-zigzag, nuts-exact, doubly-adaptive or hmc)");
}

void SamplerConfig::validate() const {
  switch (kind) {
    case SamplerKind::HMC:
      hmc.validate();
      break;
    case SamplerKind::MHBPS:
    case SamplerKind::MHZigZag:
      require(horizon > 0.0 && std::isfinite(horizon), "sampler: horizon must be positive");
      require(refresh_probability >= 0.0 && refresh_probability <= 1.0,
              "sampler: refresh probability must lie in [0, 1]");
      scheme.validate();
      break;
    default:
      scheme.validate();
  }
}

double SamplerConfig::step_value() const {
  if (kind == SamplerKind::HMC) return hmc.step_size;
  if (const auto* fixed = std::get_if<FixedStep>(&scheme.step)) return fixed->h;
  return std::get<AdaptiveStep>(scheme.step).tol;
}

std::string SamplerConfig::describe_step() const {
  if (kind == SamplerKind::HMC) return "eps=" + format_double(hmc.step_size);
  return scheme.describe();
}

std::vector<double> ChainResult::coordinate(int i) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& x : samples) out.push_back(x(i));
  return out;
}

ChainResult run_chain(const Target& target, const SamplerConfig& cfg, std::size_t steps,
                      std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  ChainResult result;
  result.samples.reserve(steps);
  const int d = target.dim();
  switch (cfg.kind) {
    case SamplerKind::MHBPS:
    case SamplerKind::MHZigZag: {
      MHSamplerConfig mh;
      mh.kernel.horizon = cfg.horizon;
      mh.kernel.kind = cfg.kind == SamplerKind::MHBPS ? DynamicsKind::BPS : DynamicsKind::ZigZag;
      mh.kernel.scheme = cfg.scheme;
      mh.refresh_probability = cfg.refresh_probability;
      KineticState z{Vec::Zero(d), refresh_velocity(mh.kernel.kind, d, rng), 1};
      result.samples = run_mh_chain(std::move(z), mh, target, steps, rng, result.metrics);
      break;
    }
    case SamplerKind::NUTSExact:
    case SamplerKind::DoublyAdaptive: {
      NutsConfig nc{cfg.dynamics, cfg.scheme, cfg.limits};
      KineticState z{Vec::Zero(d), refresh_velocity(cfg.dynamics, d, rng), 1};
      for (std::size_t s = 0; s < steps; ++s) {
        z = cfg.kind == SamplerKind::NUTSExact
                ? nuts_step_exact(z, nc, target, rng, result.metrics)
                : doubly_adaptive_step(z, nc, target, rng, result.metrics);
        ++result.metrics.steps;
        result.samples.push_back(z.x);
      }
      break;
    }
    case SamplerKind::HMC: {
      Vec x = Vec::Zero(d);
      for (std::size_t s = 0; s < steps; ++s) {
        x = hmc_step(x, cfg.hmc, target, rng, result.metrics);
        ++result.metrics.steps;
        result.samples.push_back(x);
      }
      break;
    }
  }
  return result;
}

std::vector<ChainResult> run_cells_serial(const std::vector<Cell>& cells) {
  std::vector<ChainResult> results;
  results.reserve(cells.size());
  for (const auto& cell : cells) {
    results.push_back(run_chain(cell.target, cell.sampler, cell.steps, cell.seed));
  }
  return results;
}

std::vector<ChainResult> run_cells_parallel(const std::vector<Cell>& cells) {
  std::vector<ChainResult> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  const long n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      const auto& cell = cells[static_cast<std::size_t>(i)];
      results[static_cast<std::size_t>(i)] =
          run_chain(cell.target, cell.sampler, cell.steps, cell.seed);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return results;
}

namespace {

std::vector<ChainResult> run_cells(const std::vector<Cell>& cells, bool parallel) {
  return parallel ? run_cells_parallel(cells) : run_cells_serial(cells);
}

std::vector<ApproxScheme> scheme_grid(const ExperimentConfig& cfg) {
  return cfg.schemes.empty() ? std::vector<ApproxScheme>{cfg.sampler.scheme} : cfg.schemes;
}

double mean_of(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return values.empty() ? 0.0 : total / static_cast<double>(values.size());
}

double std_of(const std::vector<double>& values) {
  double m = mean_of(values);
  double total = 0.0;
  for (double v : values) total += (v - m) * (v - m);
  return values.empty() ? 0.0 : std::sqrt(total / static_cast<double>(values.size()));
}

double ratio(double num, std::uint64_t den) {
  return den == 0 ? 0.0 : num / static_cast<double>(den);
}

double chain_ess(const ChainResult& chain) {
  auto first = chain.coordinate(0);
  return first.size() < 10 ? 0.0 : ess(first).value;
}

std::string file_token(std::string text) {
  for (char& c : text) {
    if (c == ':' || c == '=' || c == ',' || c == '/') c = '-';
    if (c == ' ') c = '_';
  }
  return text;
}

}  // namespace

void run_gaussian_scaling(const ExperimentConfig& cfg, std::ostream& out) {
  auto schemes = scheme_grid(cfg);
  std::vector<Cell> cells;
  for (int d : cfg.dims) {
    for (const auto& scheme : schemes) {
      SamplerConfig sampler = cfg.sampler;
      sampler.scheme = scheme;
      cells.push_back(Cell{Target::gaussian(d), sampler, cfg.steps,
                           derive_seed(cfg.seed, cells.size())});
    }
  }
  auto results = run_cells(cells, cfg.parallel);

  out << "schema_version,sampler,scheme,d,h,steps,events,gradient_evaluations,acceptance_rate,"
         "ess_first_coordinate,ess_per_step,events_per_step,gradient_evaluations_per_event\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& m = results[i].metrics;
    double e = chain_ess(results[i]);
    CsvRow row;
    row.add(kCsvSchemaVersion)
        .add(std::string(to_string(cells[i].sampler.kind)))
        .add(cells[i].sampler.describe_step())
        .add(cells[i].target.dim())
        .add(cells[i].sampler.step_value())
        .add(m.steps)
        .add(m.events)
        .add(m.gradient_evaluations)
        .add(m.acceptance_rate())
        .add(e)
        .add(ratio(e, m.steps))
        .add(ratio(static_cast<double>(m.events), m.steps))
        .add(ratio(static_cast<double>(m.gradient_evaluations), m.events));
    out << row.str() << '\n';
  }
}

void run_funnel_compare(const ExperimentConfig& cfg, std::ostream& out,
                        const std::filesystem::path& chain_stem) {
  Target target = Target::parse(cfg.target);
  std::vector<Cell> cells;
  for (const auto& scheme : scheme_grid(cfg)) {
    SamplerConfig sampler = cfg.sampler;
    if (sampler.kind == SamplerKind::HMC) sampler.kind = SamplerKind::DoublyAdaptive;
    sampler.scheme = scheme;
    cells.push_back(Cell{target, sampler, cfg.steps, derive_seed(cfg.seed, cells.size())});
  }
  for (double eps : cfg.hmc_steps) {
    SamplerConfig sampler = cfg.sampler;
    sampler.kind = SamplerKind::HMC;
    sampler.hmc.step_size = eps;
    cells.push_back(Cell{target, sampler, cfg.steps, derive_seed(cfg.seed, cells.size())});
  }
  auto results = run_cells(cells, cfg.parallel);

  out << "schema_version,sampler,setting,steps,x1_mean,x1_std,ess_first_coordinate,"
         "gradient_evaluations,acceptance_rate\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& m = results[i].metrics;
    auto x1 = results[i].coordinate(0);
    CsvRow row;
    row.add(kCsvSchemaVersion)
        .add(std::string(to_string(cells[i].sampler.kind)))
        .add(cells[i].sampler.describe_step())
        .add(m.steps)
        .add(mean_of(x1))
        .add(std_of(x1))
        .add(chain_ess(results[i]))
        .add(m.gradient_evaluations)
        .add(m.acceptance_rate());
    out << row.str() << '\n';

    if (!chain_stem.empty()) {
      std::filesystem::path path = chain_stem;
      path += "_" + std::string(to_string(cells[i].sampler.kind)) + "_" +
              file_token(cells[i].sampler.describe_step()) + ".csv";
      std::ofstream file(path);
      if (!file) throw std::runtime_error("cannot open chain output '" + path.string() + "'");
      write_chain(file, results[i]);
      if (!file) throw std::runtime_error("failed writing chain output '" + path.string() + "'");
    }
  }
}

void run_trajectory_dump(const ExperimentConfig& cfg, std::ostream& out) {
  Target target = Target::parse(cfg.target);
  SamplerConfig sampler = cfg.sampler;
  sampler.scheme = scheme_grid(cfg).front();
  sampler.scheme.validate();
  NutsConfig nc{sampler.dynamics, sampler.scheme, sampler.limits};
  Rng rng(derive_seed(cfg.seed, 0));
  RunMetrics metrics;
  KineticState z{Vec::Zero(target.dim()), refresh_velocity(nc.kind, target.dim(), rng), 1};

  out << "trajectory target=" << target.describe() << " dynamics=" << to_string(nc.kind)
      << " scheme=" << sampler.scheme.describe() << " steps=" << cfg.steps << '\n';
  std::vector<std::pair<double, Vec>> evaluations;
  StreamObserver observer = [&evaluations](double t, const Vec& x) {
    evaluations.emplace_back(t, x);
  };
  for (std::size_t s = 0; s < cfg.steps; ++s) {
    evaluations.clear();
    auto step = doubly_adaptive_transition(z, nc, target, rng, metrics, &observer);
    const auto& sp = step.path;
    out << "step " << s << " length=" << format_double(sp.length())
        << " anchor=" << format_double(sp.anchor) << " side=" << to_string(sp.side)
        << " proposed=" << format_double(step.proposed_index)
        << " accepted=" << (step.accepted ? 1 : 0) << '\n';
    write_skeleton(out, sp.path);
    for (auto& e : evaluations) e.first += sp.anchor;
    std::stable_sort(evaluations.begin(), evaluations.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, x] : evaluations) {
      out << "eval " << format_double(t);
      for (double xi : x) out << ' ' << format_double(xi);
      out << '\n';
    }
    z = std::move(step.state);
  }
}

void run_single(const ExperimentConfig& cfg, std::ostream& out,
                const std::filesystem::path& chain_path) {
  Target target = Target::parse(cfg.target);
  SamplerConfig sampler = cfg.sampler;
  sampler.scheme = scheme_grid(cfg).front();
  ChainResult chain = run_chain(target, sampler, cfg.steps, derive_seed(cfg.seed, 0));
  auto x1 = chain.coordinate(0);
  out << "schema_version,sampler,target,setting,d,steps,x1_mean,x1_std,ess_first_coordinate,"
         "ess_per_step,acceptance_rate,"
      << RunMetrics::csv_header() << '\n';
  CsvRow row;
  row.add(kCsvSchemaVersion)
      .add(std::string(to_string(sampler.kind)))
      .add(target.describe())
      .add(sampler.describe_step())
      .add(target.dim())
      .add(chain.metrics.steps)
      .add(mean_of(x1))
      .add(std_of(x1))
      .add(chain_ess(chain))
      .add(ratio(chain_ess(chain), chain.metrics.steps))
      .add(chain.metrics.acceptance_rate());
  out << row.str() << ',' << chain.metrics.csv_row() << '\n';
  if (!chain_path.empty()) {
    std::ofstream file(chain_path);
    if (!file) throw std::runtime_error("cannot open chain output '" + chain_path.string() + "'");
    write_chain(file, chain);
  }
}

void write_chain(std::ostream& out, const ChainResult& chain) {
  out << "step";
  int d = chain.samples.empty() ? 0 : static_cast<int>(chain.samples.front().size());
  for (int i = 0; i < d; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t s = 0; s < chain.samples.size(); ++s) {
    CsvRow row;
    row.add(static_cast<std::uint64_t>(s));
    for (double x : chain.samples[s]) row.add(x);
    out << row.str() << '\n';
  }
}

}  // namespace pdmp
