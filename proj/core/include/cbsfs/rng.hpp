#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace cbsfs {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Independent generator for replicate `index` of a run seeded with `seed`.
/// Depends only on (seed, index), never on which worker draws it.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Uniform on the open interval (0, 1), 53 random bits.
double uniform01(Rng& rng);

/// Exponential with the given rate.
double exponential(Rng& rng, double rate = 1.0);

/// Poisson with the given mean; 0 when mean == 0.
std::int64_t poisson(Rng& rng, double mean);

/// Runs fn(rng, index) for index in [0, reps) on `workers` threads and
/// returns the results in index order. Each replicate gets substream(seed,
/// index), so the output is identical for every worker count.
template <class T, class F>
std::vector<T> run_replicates(std::size_t reps, unsigned workers, std::uint64_t seed, F&& fn) {
  std::vector<T> out(reps);
  if (workers == 0) workers = 1;
  if (workers > reps) workers = static_cast<unsigned>(reps == 0 ? 1 : reps);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < reps; i += workers) {
        Rng rng = substream(seed, i);
        out[i] = fn(rng, i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace cbsfs
