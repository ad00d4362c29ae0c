#include "taillab/estimate.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace taillab {

std::vector<Estimate> mc_run(std::uint64_t n, unsigned lanes, std::uint64_t seed,
                             std::size_t n_stats,
                             const std::function<void(Rng&, std::span<double>)>& fill) {
  if (lanes == 0) lanes = 1;
  if (n == 0) throw std::invalid_argument("mc_run: n must be positive");

  std::vector<std::vector<Welford>> acc(lanes, std::vector<Welford>(n_stats));
  std::vector<std::exception_ptr> errors(lanes);
  auto work = [&](unsigned lane) {
    try {
      Rng rng = lane_rng(seed, lane);
      std::uint64_t n_lane = n / lanes + (lane < n % lanes ? 1 : 0);
      std::vector<double> row(n_stats);
      for (std::uint64_t i = 0; i < n_lane; ++i) {
        fill(rng, row);
        for (std::size_t s = 0; s < n_stats; ++s) acc[lane][s].add(row[s]);
      }
    } catch (...) {
      errors[lane] = std::current_exception();
    }
  };

  if (lanes == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(lanes);
    for (unsigned lane = 0; lane < lanes; ++lane) threads.emplace_back(work, lane);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Estimate> out(n_stats);
  for (std::size_t s = 0; s < n_stats; ++s) {
    Welford merged;
    for (unsigned lane = 0; lane < lanes; ++lane) merged.merge(acc[lane][s]);
    out[s] = merged.estimate(seed);
  }
  return out;
}

unsigned default_lanes() {
  if (const char* env = std::getenv("TAILLAB_LANES")) {
    int v = std::atoi(env);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 4;
}

}  // namespace taillab
