#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tabulog/session.hpp"

namespace tabulog {

struct bench_report {
  std::string name;
  std::int64_t size = 0;
  double ms = 0.0;
  std::uint64_t answers = 0;
  engine_stats stats;
  std::uint64_t peak_rss_bytes = 0;  // best effort, 0 if unavailable
};

// Named benchmark programs with built-in generators. Each run validates its
// answer count (or answer term) against an independently computed expected
// value and throws on mismatch.
std::vector<std::string> bench_names();
bool is_bench(std::string_view name);

// The generated program and query, exposed for inspection and tests.
std::string bench_program_text(std::string_view name, std::int64_t size);
std::string bench_query_text(std::string_view name, std::int64_t size);

bench_report run_bench(std::string_view name, std::int64_t size);

}  // namespace tabulog
