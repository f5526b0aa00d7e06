#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "meek/discrimination.hpp"
#include "meek/io.hpp"

// Times the OpenMP Monte-Carlo kernel against the serial reference on
// the same workload and verifies the reports are bit-identical.
int main(int argc, char** argv) {
  using namespace meek;
  long long runs = argc > 1 ? std::atoll(argv[1]) : 400000;
  double delta_l = argc > 2 ? std::atof(argv[2]) : 0.2;
  std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 12345;

  SprtConfig config;
  CategoricalPair pair = make_lattice_pair(delta_l, config, 20, seed);

  auto time_one = [&](auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    MonteCarloReport report = fn();
    auto stop = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(stop - start).count();
    return std::pair<MonteCarloReport, double>(report, seconds);
  };

  auto [serial, serial_s] = time_one([&] {
    return monte_carlo_expected_tokens_serial(pair.p0, pair.p0, pair.p_b,
                                              config, runs, seed);
  });
  auto [parallel, parallel_s] = time_one([&] {
    return monte_carlo_expected_tokens(pair.p0, pair.p0, pair.p_b, config,
                                       runs, seed);
  });

  bool identical = serial.mean_tokens == parallel.mean_tokens &&
                   serial.ci95_half_width == parallel.ci95_half_width &&
                   serial.n_runs == parallel.n_runs &&
                   serial.false_rate == parallel.false_rate &&
                   serial.capped_runs == parallel.capped_runs &&
                   serial.decided_runs == parallel.decided_runs;

#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif

  std::cout << "runs=" << runs << " delta_l=" << format_double(delta_l)
            << " seed=" << seed << " threads=" << threads << "\n";
  std::cout << "mean_tokens=" << format_double(serial.mean_tokens)
            << " formula="
            << format_double(expected_tokens_symmetric(delta_l, config))
            << "\n";
  std::cout << "serial:   " << format_double(serial_s) << " s ("
            << format_double(runs / serial_s) << " runs/s)\n";
  std::cout << "parallel: " << format_double(parallel_s) << " s ("
            << format_double(runs / parallel_s) << " runs/s)\n";
  std::cout << "speedup:  " << format_double(serial_s / parallel_s) << "x\n";
  std::cout << "reports identical: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
