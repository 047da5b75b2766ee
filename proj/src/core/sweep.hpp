#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "core/cg_tensor.hpp"
#include "core/cp_als.hpp"
#include "core/schedule.hpp"

namespace cgcp::analysis {

// One (L, schedule) cell of the rank-schedule experiment.
struct ErrorReport {
  int max_degree = 0;
  std::string schedule;
  int rank_requested = 0;
  int rank = 0;  // after clamping to the generic bound
  double fit = 0.0;
  double approx_error = 0.0;
  double equiv_error_mean = 0.0;
  double equiv_error_max = 0.0;
  double tail_bound = 0.0;        // uniform bound at R_T = ceil(R^(1/3))
  double proof_step_bound = 0.0;  // 2 C^2 ||M - M_hat||_F
  std::int64_t exact_time_ns = 0;
  std::int64_t approx_time_ns = 0;
  int sample_count = 0;
  int rotation_count = 0;
  int degenerate_skipped = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string fail_reason;
};

struct SweepOptions {
  int samples = 1000;
  int rotations = 1000;
  int samples_per_rotation = 1;
  double radius = 1.0;
  std::uint64_t seed = 42;
  tensor3::CpOptions fit{.max_iters = 200, .tol = 1e-9, .restarts = 3, .seed = 42};
  int timing_reps = 9;
  int timing_warmup = 10;
  int threads = 1;  // per-degree groups run concurrently when > 1
};

// Runs every (L, schedule) cell. Per maximum degree, the distinct ranks are
// fitted in ascending order with warm starts (plus fresh restarts), so the
// reported approximation error is non-increasing in R at fixed L. Cell
// failures are recorded in the report instead of aborting the sweep. Every
// cell derives its RNG stream from (seed, L, schedule), so results do not
// depend on the thread count.
std::vector<ErrorReport> sweep(const std::vector<int>& degrees,
                               const std::vector<RankSchedule>& schedules,
                               const SweepOptions& opts = {});

// Warm-started fit chain over increasing ranks (doubling-style curves).
std::vector<tensor3::CPFactors> fit_rank_chain(const cgtp::CGTensor& m,
                                               const std::vector<int>& ranks,
                                               const tensor3::CpOptions& opts);

inline constexpr int kReportFormatVersion = 1;

// CSV with a fixed column order (documented in the header row); timing
// columns are exactly those suffixed "_time_ns".
std::string reports_to_csv(const std::vector<ErrorReport>& reports);
nlohmann::json report_to_json(const ErrorReport& report);
nlohmann::json reports_to_json(const std::vector<ErrorReport>& reports);

}  // namespace cgcp::analysis
