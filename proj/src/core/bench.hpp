#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace cgcp::analysis {

struct BenchOptions {
  std::vector<int> degrees = {1, 2, 3, 4, 5, 6};
  int reps = 15;
  int warmup = 10;
  std::uint64_t seed = 42;
  bool fp32 = false;           // 32-bit kernels (timings only; verification is 64-bit)
  double min_sample_ns = 2e4;  // timer-resolution guard, see median_time_ns
};

struct BenchRow {
  int max_degree = 0;
  int dim = 0;
  int rank = 0;  // 7 L^2 clamped to the generic bound
  std::size_t nnz = 0;
  std::int64_t sparse_ns = 0;  // path-wise sparse exact product
  std::int64_t dense_ns = 0;   // dense d x d^2 reference contraction
  std::int64_t cp_ns = 0;      // Hadamard-form CP product
  double speedup = 0.0;        // sparse_ns / cp_ns
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // Log-log slopes of time against (L+1) over rows with L >= 2 (all
  // kernel dimensions scale with L+1); NaN when fewer than two such rows.
  double slope_sparse = 0.0;
  double slope_dense = 0.0;
  double slope_cp = 0.0;
  bool fp32 = false;
};

// Single-threaded runtime comparison of the three product kernels per L at
// R = 7 L^2. Factor values are seeded random (timings depend only on shapes).
BenchResult benchmark_tp(const BenchOptions& opts);

std::string bench_to_csv(const BenchResult& result);
nlohmann::json bench_to_json(const BenchResult& result);

}  // namespace cgcp::analysis
