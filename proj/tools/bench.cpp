#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lpp/experiments.hpp"
#include "lpp/rng.hpp"
#include "lpp/stationary.hpp"

// Kernel and replica-driver timings: serial fill against the blocked fill at
// several thread counts (outputs compared bitwise), then the replica loop on
// a stationary-table workload.

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void set_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 2500;
  const std::int64_t cells = n * n;
  std::printf("kernel grid: %lld x %lld (%.1f Mcells)\n",
              static_cast<long long>(n), static_cast<long long>(n),
              static_cast<double>(cells) / 1e6);

  std::vector<double> w(static_cast<std::size_t>(cells));
  lpp::RngStream stream(1, 0);
  for (double& x : w) x = stream.exponential(1.0);

  std::vector<double> serial(w.size());
  auto t0 = std::chrono::steady_clock::now();
  lpp::fill_forward(w.data(), n, n, serial.data());
  const double serial_s = seconds_since(t0);
  std::printf("  serial            %7.3fs  %7.1f Mcells/s\n", serial_s,
              static_cast<double>(cells) / 1e6 / serial_s);

  std::vector<double> blocked(w.size());
  for (int threads : {1, 2, 4}) {
    set_threads(threads);
    t0 = std::chrono::steady_clock::now();
    lpp::fill_forward_blocked(w.data(), n, n, blocked.data());
    const double dt = seconds_since(t0);
    const bool same = serial == blocked;
    std::printf("  blocked %d thread%s %7.3fs  %7.1f Mcells/s  %s\n", threads,
                threads == 1 ? " " : "s", dt,
                static_cast<double>(cells) / 1e6 / dt,
                same ? "bitwise equal" : "MISMATCH");
    if (!same) return 1;
  }
  set_threads(0);

  const std::int64_t replicas = 200;
  const std::int64_t N = 500;
  const lpp::LatticePoint v = lpp::characteristic_point(0.5, N).point;
  std::printf("replica driver: %lld stationary tables at N=%lld\n",
              static_cast<long long>(replicas), static_cast<long long>(N));
  std::vector<std::int64_t> sink(static_cast<std::size_t>(replicas));
  for (int workers : {1, 2, 4}) {
    t0 = std::chrono::steady_clock::now();
    lpp::run_replicas(replicas, workers, [&](std::int64_t rep) {
      lpp::RngStream boundary_stream = lpp::replica_stream(7, rep, 1);
      const lpp::BoundarySpec boundary =
          lpp::make_sw_boundary(0.5, {0, 0}, v.x1, v.x2, boundary_stream);
      lpp::RngStream bulk_stream = lpp::replica_stream(7, rep, 0);
      const lpp::WeightField bulk =
          lpp::generate_bulk({{1, 1}, v}, bulk_stream);
      const lpp::PassageTable table = lpp::stationary_forward(boundary, bulk);
      sink[static_cast<std::size_t>(rep)] = lpp::exit_time(table, v);
    });
    const double dt = seconds_since(t0);
    std::int64_t checksum = 0;
    for (std::int64_t z : sink) checksum += z;
    std::printf("  %d worker%s %7.3fs  %7.1f replicas/s  (exit-time sum %lld)\n",
                workers, workers == 1 ? " " : "s", dt,
                static_cast<double>(replicas) / dt,
                static_cast<long long>(checksum));
  }
  return 0;
}
