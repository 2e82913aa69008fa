// Parameter-grid parsing ("start:stop:count" inclusive, or comma lists) and
// the indexed worker pool used by the CLI. Work is stolen via an atomic
// cursor but results land by index, so output files do not depend on the
// worker count.
#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/dataset_io.hpp"

namespace rdmgeo {

/// Inclusive grid: "0:3:61" -> 61 values from 0 to 3; "1,2,5" -> listed
/// values; a single number is a 1-point grid.
inline std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) throw Error("parse_grid: empty grid spec");
  std::vector<double> out;
  if (spec.find(',') != std::string::npos) {
    for (const auto part : io_detail::split(spec, ',')) {
      if (part.empty()) throw Error("parse_grid: empty list entry in '" + spec + "'");
      out.push_back(parse_double(part));
    }
    return out;
  }
  const auto parts = io_detail::split(spec, ':');
  if (parts.size() == 1) {
    out.push_back(parse_double(parts[0]));
    return out;
  }
  if (parts.size() != 3)
    throw Error("parse_grid: expected 'start:stop:count' or a comma list, got '" + spec + "'");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const long count = std::strtol(std::string(parts[2]).c_str(), nullptr, 10);
  if (count < 1) throw Error("parse_grid: count must be >= 1 in '" + spec + "'");
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  out.reserve(count);
  for (long i = 0; i < count; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
  return out;
}

inline int default_worker_count() {
  if (const char* env = std::getenv("RDMGEO_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run f(i) for i in [0, n) on `workers` threads; f must write only to its
/// own index slot. Exceptions are captured and rethrown on the caller thread.
inline void parallel_for_indexed(std::size_t n, int workers,
                                 const std::function<void(std::size_t)>& f) {
  if (workers < 1) workers = 1;
  if (n == 0) return;
  if (workers == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        f(i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = static_cast<int>(std::min<std::size_t>(workers, n));
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failed.load()) throw Error("parallel task failed: " + first_error);
}

}  // namespace rdmgeo
