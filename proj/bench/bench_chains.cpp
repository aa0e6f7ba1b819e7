#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <omp.h>

#include "pdmp/csv.hpp"
#include "pdmp/harness.hpp"

using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double seconds(F&& f) {
  auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool identical(const std::vector<pdmp::ChainResult>& a, const std::vector<pdmp::ChainResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].samples.size() != b[i].samples.size()) return false;
    for (std::size_t s = 0; s < a[i].samples.size(); ++s) {
      if (a[i].samples[s] != b[i].samples[s]) return false;
    }
    if (a[i].metrics.gradient_evaluations != b[i].metrics.gradient_evaluations) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t steps = argc > 1 ? std::stoul(argv[1]) : 200;
  std::string out_path = argc > 2 ? argv[2] : "bench_chains.csv";

  std::vector<pdmp::Cell> cells;
  for (int d : {4, 16, 64}) {
    for (auto kind : {pdmp::SamplerKind::NUTSExact, pdmp::SamplerKind::DoublyAdaptive}) {
      pdmp::SamplerConfig sampler;
      sampler.kind = kind;
      sampler.scheme = kind == pdmp::SamplerKind::NUTSExact
                           ? pdmp::ApproxScheme{pdmp::ApproxOrder::Order1, pdmp::FixedStep{1.0}}
                           : pdmp::ApproxScheme{pdmp::ApproxOrder::Order0, pdmp::AdaptiveStep{}};
      cells.push_back(pdmp::Cell{pdmp::Target::gaussian(d), sampler, steps,
                                 pdmp::derive_seed(2024, cells.size())});
    }
  }

  std::vector<pdmp::ChainResult> serial;
  std::vector<pdmp::ChainResult> parallel;
  double serial_time = seconds([&] { serial = pdmp::run_cells_serial(cells); });
  double parallel_time = seconds([&] { parallel = pdmp::run_cells_parallel(cells); });
  bool same = identical(serial, parallel);

  std::ofstream file(out_path);
  if (!file) {
    std::cerr << "bench_chains: cannot open '" << out_path << "'\n";
    return 1;
  }
  file << "implementation,threads,cells,steps_per_cell,wall_time,speedup,identical\n";
  int threads = omp_get_max_threads();
  file << pdmp::CsvRow().add("serial").add(1).add(static_cast<std::uint64_t>(cells.size()))
              .add(static_cast<std::uint64_t>(steps)).add(serial_time).add(1.0).add("yes").str()
       << '\n';
  file << pdmp::CsvRow().add("openmp").add(threads).add(static_cast<std::uint64_t>(cells.size()))
              .add(static_cast<std::uint64_t>(steps)).add(parallel_time)
              .add(serial_time / parallel_time).add(same ? "yes" : "no").str()
       << '\n';

  std::cout << "serial   " << serial_time << " s\n"
            << "openmp   " << parallel_time << " s (" << threads << " threads)\n"
            << "speedup  " << serial_time / parallel_time << "\n"
            << "identical results: " << (same ? "yes" : "no") << "\n";
  return same ? 0 : 1;
}
