#include "core/bench.hpp"

#include <Eigen/Dense>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#ifdef __linux__
#include <sched.h>
#endif

#include "core/apply.hpp"
#include "core/cg_tensor.hpp"
#include "core/common.hpp"
#include "core/timing.hpp"

namespace cgcp::analysis {

namespace {

struct SparseEntryF {
  int k, i, j;
  float v;
};

template <typename Scalar>
double fitted_slope(const std::vector<BenchRow>& rows, Scalar BenchRow::* field) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : rows) {
    if (row.max_degree < 2) continue;
    const double x = std::log(row.max_degree + 1.0);
    const double y = std::log(static_cast<double>(row.*field));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <typename Scalar>
void run_rows(const BenchOptions& opts, std::vector<BenchRow>& rows) {
  for (int degree : opts.degrees) {
    const cgtp::CGTensor m = cgtp::CGTensor::build(degree);
    const int d = m.dim();
    const int rank = static_cast<int>(std::min<std::int64_t>(
        std::max(1, 7 * degree * degree), tensor3::generic_rank_bound(d, d, d)));

    auto rng = seeded_rng(opts.seed, {0x62656e6368ull, static_cast<std::uint64_t>(degree)});
    std::normal_distribution<double> normal;
    auto random_matrix = [&](int r, int c) {
      Eigen::MatrixXd out(r, c);
      for (int jj = 0; jj < c; ++jj)
        for (int ii = 0; ii < r; ++ii) out(ii, jj) = normal(rng);
      return out;
    };

    // Timings depend on shapes only, so the CP factors are seeded random.
    const cgtp::CpKernelT<Scalar> kernel(random_matrix(d, rank), random_matrix(d, rank),
                                         random_matrix(d, rank));

    using Vec = Eigen::VectorX<Scalar>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Vec x(d), y(d), z(d);
    for (int ii = 0; ii < d; ++ii) {
      x(ii) = static_cast<Scalar>(normal(rng));
      y(ii) = static_cast<Scalar>(normal(rng));
    }

    std::vector<SparseEntryF> entries_f;
    entries_f.reserve(m.entries().size());
    for (const auto& e : m.entries())
      entries_f.push_back({e.k, e.i, e.j, static_cast<float>(e.value)});

    const Mat dense = m.dense_matrix().cast<Scalar>();
    Vec outer(std::int64_t(d) * d);

    BenchRow row;
    row.max_degree = degree;
    row.dim = d;
    row.rank = rank;
    row.nnz = m.entries().size();

    if constexpr (std::is_same_v<Scalar, double>) {
      row.sparse_ns = median_time_ns(
          [&] { cgtp::exact_tp_into(m, x.data(), y.data(), z.data()); }, opts.reps,
          opts.warmup, opts.min_sample_ns);
    } else {
      row.sparse_ns = median_time_ns(
          [&] {
            z.setZero();
            Scalar* zv = z.data();
            const Scalar* xv = x.data();
            const Scalar* yv = y.data();
            for (const auto& e : entries_f) zv[e.k] += e.v * xv[e.i] * yv[e.j];
          },
          opts.reps, opts.warmup, opts.min_sample_ns);
    }

    row.dense_ns = median_time_ns(
        [&] {
          for (int jj = 0; jj < d; ++jj)
            for (int ii = 0; ii < d; ++ii) outer(std::int64_t(jj) * d + ii) = x(ii) * y(jj);
          z.noalias() = dense * outer;
        },
        opts.reps, opts.warmup, opts.min_sample_ns);

    row.cp_ns = median_time_ns([&] { kernel.apply(x, y, z); }, opts.reps, opts.warmup,
                               opts.min_sample_ns);

    row.speedup = row.cp_ns > 0 ? double(row.sparse_ns) / double(row.cp_ns) : 0.0;
    rows.push_back(row);
  }
}

}  // namespace

BenchResult benchmark_tp(const BenchOptions& opts) {
  if (opts.degrees.empty()) throw ArgumentError("bench: empty degree list");
  if (opts.reps < 3) throw ArgumentError("bench: reps must be >= 3");
#ifdef __linux__
  // best-effort pin to the current CPU for timing stability
  {
    const int cpu = sched_getcpu();
    if (cpu >= 0) {
      cpu_set_t set;
      CPU_ZERO(&set);
      CPU_SET(cpu, &set);
      (void)sched_setaffinity(0, sizeof set, &set);
    }
  }
#endif
  BenchResult result;
  result.fp32 = opts.fp32;
  if (opts.fp32)
    run_rows<float>(opts, result.rows);
  else
    run_rows<double>(opts, result.rows);
  result.slope_sparse = fitted_slope(result.rows, &BenchRow::sparse_ns);
  result.slope_dense = fitted_slope(result.rows, &BenchRow::dense_ns);
  result.slope_cp = fitted_slope(result.rows, &BenchRow::cp_ns);
  return result;
}

std::string bench_to_csv(const BenchResult& result) {
  std::string out =
      "format_version,L,dim,R,nnz,precision,sparse_time_ns,dense_time_ns,cp_time_ns,"
      "speedup,slope_sparse,slope_dense,slope_cp\n";
  char buf[384];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf,
                  "1,%d,%d,%d,%zu,%s,%" PRId64 ",%" PRId64 ",%" PRId64 ",%.6g,%.6g,%.6g,%.6g\n",
                  r.max_degree, r.dim, r.rank, r.nnz, result.fp32 ? "fp32" : "fp64",
                  r.sparse_ns, r.dense_ns, r.cp_ns, r.speedup, result.slope_sparse,
                  result.slope_dense, result.slope_cp);
    out += buf;
  }
  return out;
}

nlohmann::json bench_to_json(const BenchResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows)
    rows.push_back({{"L", r.max_degree},
                    {"dim", r.dim},
                    {"R", r.rank},
                    {"nnz", r.nnz},
                    {"sparse_time_ns", r.sparse_ns},
                    {"dense_time_ns", r.dense_ns},
                    {"cp_time_ns", r.cp_ns},
                    {"speedup", r.speedup}});
  auto slope_or_null = [](double v) {
    return std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
  };
  return {{"format_version", 1},
          {"precision", result.fp32 ? "fp32" : "fp64"},
          {"rows", rows},
          {"slope_sparse", slope_or_null(result.slope_sparse)},
          {"slope_dense", slope_or_null(result.slope_dense)},
          {"slope_cp", slope_or_null(result.slope_cp)}};
}

}  // namespace cgcp::analysis
