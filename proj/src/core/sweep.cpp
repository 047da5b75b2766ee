#include "core/sweep.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

#include "core/apply.hpp"
#include "core/common.hpp"
#include "core/metrics.hpp"
#include "core/timing.hpp"

namespace cgcp::analysis {

std::vector<tensor3::CPFactors> fit_rank_chain(const cgtp::CGTensor& m,
                                               const std::vector<int>& ranks,
                                               const tensor3::CpOptions& opts) {
  for (std::size_t i = 1; i < ranks.size(); ++i)
    if (ranks[i] < ranks[i - 1]) throw ArgumentError("fit_rank_chain: ranks must be ascending");
  const tensor3::Tensor3 t = m.to_tensor();
  std::vector<tensor3::CPFactors> out;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    tensor3::CpOptions cell = opts;
    cell.seed = splitmix64(opts.seed ^ (0x636861696eull + ranks[i]));
    if (out.empty())
      out.push_back(tensor3::cp_als(t, ranks[i], cell));
    else
      out.push_back(tensor3::cp_als_warm(t, ranks[i], cell, out.back()));
  }
  return out;
}

namespace {

std::vector<ErrorReport> sweep_degree(int degree, const std::vector<RankSchedule>& schedules,
                                      const SweepOptions& opts) {
  std::vector<ErrorReport> reports;
  {
    const cgtp::CGTensor m = cgtp::CGTensor::build(degree);
    const auto bound = tensor3::generic_rank_bound(m.dim(), m.dim(), m.dim());

    // Requested ranks for this degree, clamped; fit each distinct rank once,
    // warm-starting larger ranks from smaller ones.
    std::vector<int> wanted;
    for (const auto& schedule : schedules)
      wanted.push_back(std::min<std::int64_t>(schedule.rank_for(degree), bound));
    std::vector<int> unique_ranks = wanted;
    std::sort(unique_ranks.begin(), unique_ranks.end());
    unique_ranks.erase(std::unique(unique_ranks.begin(), unique_ranks.end()),
                       unique_ranks.end());

    std::map<int, tensor3::CPFactors> fitted;
    std::string fit_failure;
    try {
      tensor3::CpOptions fit_opts = opts.fit;
      fit_opts.seed = splitmix64(opts.seed ^ (0x7377656570ull + degree));
      auto chain = fit_rank_chain(m, unique_ranks, fit_opts);
      for (std::size_t i = 0; i < unique_ranks.size(); ++i)
        fitted.emplace(unique_ranks[i], std::move(chain[i]));
    } catch (const std::exception& e) {
      fit_failure = e.what();
    }

    for (std::size_t s = 0; s < schedules.size(); ++s) {
      ErrorReport report;
      report.max_degree = degree;
      report.schedule = schedules[s].name();
      report.rank_requested = schedules[s].rank_for(degree);
      report.rank = wanted[s];
      report.sample_count = opts.samples;
      report.rotation_count = opts.rotations;
      report.seed = opts.seed;
      try {
        if (!fit_failure.empty()) throw NumericalError(fit_failure);
        const tensor3::CPFactors& factors = fitted.at(report.rank);
        const cgtp::CpKernel kernel(factors);
        report.fit = factors.fit;

        const std::uint64_t cell_seed = splitmix64(opts.seed ^ splitmix64(degree * 131 + s));
        const auto approx =
            approximation_error(m, kernel, opts.samples, opts.radius, cell_seed);
        report.approx_error = approx.mean;
        report.degenerate_skipped = approx.skipped;

        const auto equiv = equivariance_error(kernel, degree, opts.rotations,
                                              opts.samples_per_rotation, opts.radius, cell_seed);
        report.equiv_error_mean = equiv.mean;
        report.equiv_error_max = equiv.max;

        report.tail_bound = equivariance_tail_bound(m, report.rank, opts.radius);
        report.proof_step_bound = proof_step_bound(m, factors, opts.radius);

        auto rng = seeded_rng(cell_seed, {0x74696d65ull});
        std::normal_distribution<double> normal;
        Eigen::VectorXd x(m.dim()), y(m.dim()), z(m.dim());
        for (int i = 0; i < m.dim(); ++i) { x(i) = normal(rng); y(i) = normal(rng); }
        report.exact_time_ns = median_time_ns(
            [&] { z.noalias() = cgtp::exact_tp(m, x, y); }, opts.timing_reps,
            opts.timing_warmup);
        report.approx_time_ns = median_time_ns([&] { kernel.apply(x, y, z); },
                                               opts.timing_reps, opts.timing_warmup);
      } catch (const std::exception& e) {
        report.failed = true;
        report.fail_reason = e.what();
      }
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

}  // namespace

std::vector<ErrorReport> sweep(const std::vector<int>& degrees,
                               const std::vector<RankSchedule>& schedules,
                               const SweepOptions& opts) {
  if (degrees.empty()) throw ArgumentError("sweep: empty degree list");
  if (schedules.empty()) throw ArgumentError("sweep: empty schedule list");
  if (opts.threads < 1) throw ArgumentError("sweep: threads must be >= 1");

  std::vector<ErrorReport> reports;
  if (opts.threads == 1 || degrees.size() == 1) {
    for (int degree : degrees) {
      auto group = sweep_degree(degree, schedules, opts);
      reports.insert(reports.end(), std::make_move_iterator(group.begin()),
                     std::make_move_iterator(group.end()));
    }
    return reports;
  }

  // Degree groups are independent; results are appended in input order, so
  // the output is identical to the serial run (timings aside).
  std::size_t next = 0;
  std::mutex mutex;
  std::vector<std::vector<ErrorReport>> groups(degrees.size());
  {
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(opts.threads, static_cast<int>(degrees.size()));
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t idx;
          {
            std::scoped_lock lock(mutex);
            if (next >= degrees.size()) return;
            idx = next++;
          }
          groups[idx] = sweep_degree(degrees[idx], schedules, opts);
        }
      });
    for (auto& th : pool) th.join();
  }
  for (auto& group : groups)
    reports.insert(reports.end(), std::make_move_iterator(group.begin()),
                   std::make_move_iterator(group.end()));
  return reports;
}

std::string reports_to_csv(const std::vector<ErrorReport>& reports) {
  std::string out =
      "format_version,L,schedule,R_requested,R,fit,approx_error,equiv_error_mean,"
      "equiv_error_max,tail_bound,proof_step_bound,exact_time_ns,approx_time_ns,"
      "sample_count,rotation_count,degenerate_skipped,seed,failed,fail_reason\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%" PRId64 ",%" PRId64
                  ",%d,%d,%d,%" PRIu64 ",%d,%s\n",
                  kReportFormatVersion, r.max_degree, r.schedule.c_str(), r.rank_requested,
                  r.rank, r.fit, r.approx_error, r.equiv_error_mean, r.equiv_error_max,
                  r.tail_bound, r.proof_step_bound, r.exact_time_ns, r.approx_time_ns,
                  r.sample_count, r.rotation_count, r.degenerate_skipped, r.seed,
                  r.failed ? 1 : 0, r.fail_reason.c_str());
    out += buf;
  }
  return out;
}

nlohmann::json report_to_json(const ErrorReport& r) {
  return {{"L", r.max_degree},
          {"schedule", r.schedule},
          {"R_requested", r.rank_requested},
          {"R", r.rank},
          {"fit", r.fit},
          {"approx_error", r.approx_error},
          {"equiv_error_mean", r.equiv_error_mean},
          {"equiv_error_max", r.equiv_error_max},
          {"tail_bound", r.tail_bound},
          {"proof_step_bound", r.proof_step_bound},
          {"exact_time_ns", r.exact_time_ns},
          {"approx_time_ns", r.approx_time_ns},
          {"sample_count", r.sample_count},
          {"rotation_count", r.rotation_count},
          {"degenerate_skipped", r.degenerate_skipped},
          {"seed", r.seed},
          {"failed", r.failed},
          {"fail_reason", r.fail_reason}};
}

nlohmann::json reports_to_json(const std::vector<ErrorReport>& reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) rows.push_back(report_to_json(r));
  return {{"format_version", kReportFormatVersion}, {"reports", rows}};
}

}  // namespace cgcp::analysis
