#include "cgcp.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <new>
#include <string>

#include "core/apply.hpp"
#include "core/bench.hpp"
#include "core/cg.hpp"
#include "core/cg_tensor.hpp"
#include "core/common.hpp"
#include "core/cp_als.hpp"
#include "core/irreps.hpp"
#include "core/rotation.hpp"
#include "core/sweep.hpp"
#include "core/verify.hpp"
#include "core/wigner.hpp"

using nlohmann::json;

struct cgcp_irreps {
  cgcp::so3::IrrepsSpec spec;
};
struct cgcp_cg_tensor {
  cgcp::cgtp::CGTensor tensor;
};
struct cgcp_cp_factors {
  cgcp::tensor3::CPFactors factors;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cgcp::ArgumentError& e) {
    return fail(CGCP_ERROR_ARGUMENT, e.what());
  } catch (const cgcp::NumericalError& e) {
    return fail(CGCP_ERROR_NUMERIC, e.what());
  } catch (const std::bad_alloc& e) {
    return fail(CGCP_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CGCP_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(CGCP_ERROR_INTERNAL, "unknown exception");
  }
}

template <typename T>
int require(const T* p) {
  if (!p) throw cgcp::ArgumentError("null handle argument");
  return CGCP_OK;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return json::object();
  json opts = json::parse(options_json, nullptr, false);
  if (opts.is_discarded() || !opts.is_object())
    throw cgcp::ArgumentError("options must be a JSON object");
  return opts;
}

}  // namespace

extern "C" {

const char* cgcp_version(void) { return "0.1.0"; }

const char* cgcp_last_error(void) { return g_last_error.c_str(); }

int cgcp_irreps_parse(const char* text, cgcp_irreps** out) {
  return guarded([&] {
    if (!text || !out) throw cgcp::ArgumentError("null argument");
    *out = new cgcp_irreps{cgcp::so3::IrrepsSpec::parse(text)};
    return CGCP_OK;
  });
}

int cgcp_irreps_uniform(int multiplicity, int max_degree, cgcp_irreps** out) {
  return guarded([&] {
    if (!out) throw cgcp::ArgumentError("null argument");
    *out = new cgcp_irreps{cgcp::so3::IrrepsSpec::uniform(multiplicity, max_degree)};
    return CGCP_OK;
  });
}

int cgcp_irreps_dim(const cgcp_irreps* irreps, int* out_dim) {
  return guarded([&] {
    require(irreps);
    require(out_dim);
    *out_dim = irreps->spec.total_dim();
    return CGCP_OK;
  });
}

int cgcp_irreps_format(const cgcp_irreps* irreps, char* buf, size_t* len) {
  return guarded([&] {
    require(irreps);
    require(len);
    const std::string text = irreps->spec.to_string();
    const size_t needed = text.size() + 1;
    if (!buf || *len < needed) {
      *len = needed;
      throw cgcp::ArgumentError("buffer too small");
    }
    std::memcpy(buf, text.c_str(), needed);
    *len = needed;
    return CGCP_OK;
  });
}

void cgcp_irreps_free(cgcp_irreps* irreps) { delete irreps; }

int cgcp_cg_coefficient(int l1, int m1, int l2, int m2, int l3, int m3, double* out) {
  return guarded([&] {
    require(out);
    *out = cgcp::so3::cg_coefficient(l1, m1, l2, m2, l3, m3);
    return CGCP_OK;
  });
}

int cgcp_cg_tensor_build(int max_degree, int path_limit, cgcp_cg_tensor** out) {
  return guarded([&] {
    require(out);
    if (path_limit != 0 && path_limit != 1)
      throw cgcp::ArgumentError("path_limit must be 0 or 1");
    const auto limit = path_limit == 0 ? cgcp::cgtp::PathLimit::kClampOutput
                                       : cgcp::cgtp::PathLimit::kRestrictSum;
    *out = new cgcp_cg_tensor{cgcp::cgtp::CGTensor::build(max_degree, limit)};
    return CGCP_OK;
  });
}

int cgcp_cg_tensor_dim(const cgcp_cg_tensor* m, int* out_dim) {
  return guarded([&] {
    require(m);
    require(out_dim);
    *out_dim = m->tensor.dim();
    return CGCP_OK;
  });
}

int cgcp_cg_tensor_nnz(const cgcp_cg_tensor* m, long long* out_nnz) {
  return guarded([&] {
    require(m);
    require(out_nnz);
    *out_nnz = static_cast<long long>(m->tensor.entries().size());
    return CGCP_OK;
  });
}

int cgcp_cg_tensor_path_count(const cgcp_cg_tensor* m, int* out_count) {
  return guarded([&] {
    require(m);
    require(out_count);
    *out_count = static_cast<int>(m->tensor.paths().size());
    return CGCP_OK;
  });
}

int cgcp_cg_tensor_export(const cgcp_cg_tensor* m, const char* path) {
  return guarded([&] {
    require(m);
    if (!path) throw cgcp::ArgumentError("null path");
    std::ofstream out(path);
    if (!out) return fail(CGCP_ERROR_IO, "cannot open output file");
    m->tensor.export_text(out);
    if (!out) return fail(CGCP_ERROR_IO, "write failed");
    return CGCP_OK;
  });
}

void cgcp_cg_tensor_free(cgcp_cg_tensor* m) { delete m; }

int cgcp_exact_tp(const cgcp_cg_tensor* m, const double* x, const double* y, double* z) {
  return guarded([&] {
    require(m);
    if (!x || !y || !z) throw cgcp::ArgumentError("null buffer");
    cgcp::cgtp::exact_tp_into(m->tensor, x, y, z);
    return CGCP_OK;
  });
}

int cgcp_wigner_block(const cgcp_irreps* irreps, const double quat_wxyz[4], double* out) {
  return guarded([&] {
    require(irreps);
    if (!quat_wxyz || !out) throw cgcp::ArgumentError("null buffer");
    const auto rot = cgcp::so3::Rotation::from_quaternion(quat_wxyz[0], quat_wxyz[1],
                                                          quat_wxyz[2], quat_wxyz[3]);
    const Eigen::MatrixXd d = cgcp::so3::wigner_block(irreps->spec, rot);
    const int n = irreps->spec.total_dim();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out[static_cast<size_t>(r) * n + c] = d(r, c);
    return CGCP_OK;
  });
}

int cgcp_sample_rotation(unsigned long long seed, unsigned long long index,
                         double quat_wxyz[4]) {
  return guarded([&] {
    if (!quat_wxyz) throw cgcp::ArgumentError("null buffer");
    auto rng = cgcp::seeded_rng(seed, {index});
    const auto rot = cgcp::so3::sample_rotation(rng);
    for (int i = 0; i < 4; ++i) quat_wxyz[i] = rot.quaternion()[i];
    return CGCP_OK;
  });
}

void cgcp_fit_options_default(cgcp_fit_options* opts) {
  if (!opts) return;
  const cgcp::tensor3::CpOptions defaults;
  opts->max_iters = defaults.max_iters;
  opts->tol = defaults.tol;
  opts->restarts = defaults.restarts;
  opts->seed = defaults.seed;
}

int cgcp_cp_fit(const cgcp_cg_tensor* m, int rank, const cgcp_fit_options* opts,
                cgcp_cp_factors** out) {
  return guarded([&] {
    require(m);
    require(out);
    cgcp::tensor3::CpOptions fit_opts;
    if (opts) {
      fit_opts.max_iters = opts->max_iters;
      fit_opts.tol = opts->tol;
      fit_opts.restarts = opts->restarts;
      fit_opts.seed = opts->seed;
    }
    *out = new cgcp_cp_factors{cgcp::tensor3::cp_als(m->tensor.to_tensor(), rank, fit_opts)};
    return CGCP_OK;
  });
}

int cgcp_cp_factors_rank(const cgcp_cp_factors* f, int* out_rank) {
  return guarded([&] {
    require(f);
    require(out_rank);
    *out_rank = f->factors.rank;
    return CGCP_OK;
  });
}

int cgcp_cp_factors_fit(const cgcp_cp_factors* f, double* out_fit) {
  return guarded([&] {
    require(f);
    require(out_fit);
    *out_fit = f->factors.fit;
    return CGCP_OK;
  });
}

int cgcp_cp_factors_iterations(const cgcp_cp_factors* f, int* out_iters) {
  return guarded([&] {
    require(f);
    require(out_iters);
    *out_iters = f->factors.iterations;
    return CGCP_OK;
  });
}

int cgcp_cp_factors_dims(const cgcp_cp_factors* f, int out_dims[3]) {
  return guarded([&] {
    require(f);
    if (!out_dims) throw cgcp::ArgumentError("null buffer");
    out_dims[0] = static_cast<int>(f->factors.A.rows());
    out_dims[1] = static_cast<int>(f->factors.B.rows());
    out_dims[2] = static_cast<int>(f->factors.C.rows());
    return CGCP_OK;
  });
}

int cgcp_cp_factors_save(const cgcp_cp_factors* f, const char* path) {
  return guarded([&] {
    require(f);
    if (!path) throw cgcp::ArgumentError("null path");
    try {
      cgcp::tensor3::save_cpf_file(f->factors, path);
    } catch (const std::exception& e) {
      return fail(CGCP_ERROR_IO, e.what());
    }
    return CGCP_OK;
  });
}

int cgcp_cp_factors_load(const char* path, cgcp_cp_factors** out) {
  return guarded([&] {
    require(out);
    if (!path) throw cgcp::ArgumentError("null path");
    *out = new cgcp_cp_factors{cgcp::tensor3::load_cpf_file(path)};
    return CGCP_OK;
  });
}

void cgcp_cp_factors_free(cgcp_cp_factors* f) { delete f; }

int cgcp_cp_apply(const cgcp_cp_factors* f, const double* x, const double* y, double* z) {
  return guarded([&] {
    require(f);
    if (!x || !y || !z) throw cgcp::ArgumentError("null buffer");
    const auto& m = f->factors;
    const cgcp::cgtp::CpKernel kernel(m);
    Eigen::Map<const Eigen::VectorXd> xv(x, m.B.rows());
    Eigen::Map<const Eigen::VectorXd> yv(y, m.C.rows());
    Eigen::Map<Eigen::VectorXd> zv(z, m.A.rows());
    Eigen::VectorXd out = kernel.apply(xv, yv);
    zv = out;
    return CGCP_OK;
  });
}

int cgcp_cp_apply_batched(const cgcp_cp_factors* f, int channels, const double* x,
                          const double* y, double* z) {
  return guarded([&] {
    require(f);
    if (!x || !y || !z) throw cgcp::ArgumentError("null buffer");
    if (channels < 1) throw cgcp::ArgumentError("channels must be >= 1");
    const auto& m = f->factors;
    const cgcp::cgtp::CpKernel kernel(m);
    Eigen::Map<const cgcp::cgtp::RowMatrixXd> xm(x, channels, m.B.rows());
    Eigen::Map<const cgcp::cgtp::RowMatrixXd> ym(y, channels, m.C.rows());
    cgcp::cgtp::RowMatrixXd out = kernel.apply_batched(xm, ym);
    Eigen::Map<cgcp::cgtp::RowMatrixXd>(z, channels, m.A.rows()) = out;
    return CGCP_OK;
  });
}

int cgcp_shared_weight_tp(const cgcp_cp_factors* f, int channels, const double* w,
                          const double* x, const double* y, double* z) {
  return guarded([&] {
    require(f);
    if (!w || !x || !y || !z) throw cgcp::ArgumentError("null buffer");
    if (channels < 1) throw cgcp::ArgumentError("channels must be >= 1");
    const auto& m = f->factors;
    const cgcp::cgtp::CpKernel kernel(m);
    Eigen::Map<const cgcp::cgtp::RowMatrixXd> wm(w, channels, channels);
    cgcp::cgtp::SharedWeight weight{Eigen::MatrixXd(wm)};
    Eigen::Map<const cgcp::cgtp::RowMatrixXd> xm(x, channels, m.B.rows());
    Eigen::Map<const cgcp::cgtp::RowMatrixXd> ym(y, channels, m.C.rows());
    cgcp::cgtp::RowMatrixXd out =
        cgcp::cgtp::shared_weight_tp(kernel, weight, xm, ym);
    Eigen::Map<cgcp::cgtp::RowMatrixXd>(z, channels, m.A.rows()) = out;
    return CGCP_OK;
  });
}

int cgcp_verify_run(const char* options_json, char** json_out, int* all_passed) {
  return guarded([&] {
    require(json_out);
    const json opts_in = parse_options(options_json);
    cgcp::analysis::VerifyOptions opts;
    opts.max_degree = opts_in.value("L", opts.max_degree);
    opts.rotations = opts_in.value("rotations", opts.rotations);
    opts.pairs = opts_in.value("pairs", opts.pairs);
    opts.bound_samples = opts_in.value("bound_samples", opts.bound_samples);
    opts.multiplicity = opts_in.value("multiplicity", opts.multiplicity);
    opts.lambda_trials = opts_in.value("lambda_trials", opts.lambda_trials);
    opts.universality_pairs = opts_in.value("universality_pairs", opts.universality_pairs);
    opts.radius = opts_in.value("radius", opts.radius);
    opts.seed = opts_in.value("seed", opts.seed);
    opts.corrupt_cg = opts_in.value("corrupt_cg", opts.corrupt_cg);
    opts.only_check = opts_in.value("check", opts.only_check);
    opts.irreps = opts_in.value("irreps", opts.irreps);

    const auto checks = cgcp::analysis::run_verification(opts);
    const json report = cgcp::analysis::verification_to_json(opts, checks);
    *json_out = dup_string(report.dump(2));
    if (all_passed) *all_passed = cgcp::analysis::all_passed(checks) ? 1 : 0;
    return CGCP_OK;
  });
}

int cgcp_sweep_run(const char* options_json, char** csv_out, char** json_out) {
  return guarded([&] {
    const json opts_in = parse_options(options_json);
    cgcp::analysis::SweepOptions opts;
    std::vector<int> degrees = opts_in.value("L", std::vector<int>{1, 2, 3});
    std::vector<std::string> schedule_names = opts_in.value(
        "schedules",
        std::vector<std::string>{"quartic", "log2", "linear7", "quadratic7"});
    opts.samples = opts_in.value("samples", opts.samples);
    opts.rotations = opts_in.value("rotations", opts.rotations);
    opts.samples_per_rotation =
        opts_in.value("samples_per_rotation", opts.samples_per_rotation);
    opts.radius = opts_in.value("radius", opts.radius);
    opts.seed = opts_in.value("seed", opts.seed);
    opts.threads = opts_in.value("threads", opts.threads);
    opts.fit.restarts = opts_in.value("restarts", opts.fit.restarts);
    opts.fit.max_iters = opts_in.value("max_iters", opts.fit.max_iters);
    opts.fit.tol = opts_in.value("tol", opts.fit.tol);
    opts.fit.seed = opts.seed;

    std::vector<cgcp::analysis::RankSchedule> schedules;
    for (const auto& name : schedule_names)
      schedules.push_back(cgcp::analysis::RankSchedule::parse(name));

    const auto reports = cgcp::analysis::sweep(degrees, schedules, opts);

    bool all_failed = !reports.empty();
    for (const auto& r : reports) all_failed = all_failed && r.failed;

    json out = cgcp::analysis::reports_to_json(reports);
    out["config"] = {{"L", degrees},
                     {"schedules", schedule_names},
                     {"samples", opts.samples},
                     {"rotations", opts.rotations},
                     {"samples_per_rotation", opts.samples_per_rotation},
                     {"radius", opts.radius},
                     {"seed", opts.seed},
                     {"threads", opts.threads},
                     {"restarts", opts.fit.restarts},
                     {"max_iters", opts.fit.max_iters},
                     {"tol", opts.fit.tol}};
    out["all_failed"] = all_failed;

    if (csv_out) *csv_out = dup_string(cgcp::analysis::reports_to_csv(reports));
    if (json_out) *json_out = dup_string(out.dump(2));
    return CGCP_OK;
  });
}

int cgcp_bench_run(const char* options_json, char** csv_out, char** json_out) {
  return guarded([&] {
    const json opts_in = parse_options(options_json);
    cgcp::analysis::BenchOptions opts;
    opts.degrees = opts_in.value("L", opts.degrees);
    opts.reps = opts_in.value("reps", opts.reps);
    opts.warmup = opts_in.value("warmup", opts.warmup);
    opts.seed = opts_in.value("seed", opts.seed);
    opts.fp32 = opts_in.value("fp32", opts.fp32);

    const auto result = cgcp::analysis::benchmark_tp(opts);
    json out = cgcp::analysis::bench_to_json(result);
    out["config"] = {{"L", opts.degrees},
                     {"reps", opts.reps},
                     {"warmup", opts.warmup},
                     {"seed", opts.seed},
                     {"fp32", opts.fp32}};
    if (csv_out) *csv_out = dup_string(cgcp::analysis::bench_to_csv(result));
    if (json_out) *json_out = dup_string(out.dump(2));
    return CGCP_OK;
  });
}

void cgcp_string_free(char* s) { delete[] s; }

}  // extern "C"
