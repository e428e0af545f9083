// Copyright 2026 The tetronsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TETRON_SWEEP_HPP_
#define TETRON_SWEEP_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tetron {

// Stateless 64-bit mixer; used to derive per-item seeds from a run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t item_seed(std::uint64_t run_seed, std::uint64_t index) {
  return splitmix64(splitmix64(run_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Evaluates fn(0..n-1) on a fixed pool. Results come back in index order
// whatever the completion order. The first exception is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < w; ++k) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

// n log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0 && hi >= lo) || n < 1) throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : double(i) / (n - 1);
    g[i] = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
  }
  g.front() = lo;
  g.back() = n == 1 ? lo : hi;
  return g;
}

// n evenly spaced points from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linear_grid: n >= 1");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / (n - 1);
  return g;
}

}  // namespace tetron

#endif  // TETRON_SWEEP_HPP_
