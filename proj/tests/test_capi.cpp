#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cgcp.h"

namespace {

struct Str {
  char* v = nullptr;
  ~Str() { cgcp_string_free(v); }
};

}  // namespace

TEST_CASE("capi: version and error reporting") {
  CHECK(std::strlen(cgcp_version()) > 0);
  double out = 0;
  CHECK(cgcp_cg_coefficient(1, 2, 1, 0, 1, 0, &out) == CGCP_ERROR_ARGUMENT);
  CHECK(std::strlen(cgcp_last_error()) > 0);
  CHECK(cgcp_cg_coefficient(1, 0, 1, 0, 1, 0, nullptr) == CGCP_ERROR_ARGUMENT);
}

TEST_CASE("capi: irreps lifecycle") {
  cgcp_irreps* spec = nullptr;
  REQUIRE(cgcp_irreps_parse("8x0+4x1", &spec) == CGCP_OK);
  int dim = 0;
  CHECK(cgcp_irreps_dim(spec, &dim) == CGCP_OK);
  CHECK(dim == 20);

  char buf[32];
  size_t len = sizeof buf;
  CHECK(cgcp_irreps_format(spec, buf, &len) == CGCP_OK);
  CHECK(std::string(buf) == "8x0+4x1");
  len = 2;
  CHECK(cgcp_irreps_format(spec, buf, &len) == CGCP_ERROR_ARGUMENT);
  CHECK(len == 8);  // needed size reported
  cgcp_irreps_free(spec);

  CHECK(cgcp_irreps_parse("bogus", &spec) == CGCP_ERROR_ARGUMENT);
  cgcp_irreps* uniform = nullptr;
  REQUIRE(cgcp_irreps_uniform(3, 2, &uniform) == CGCP_OK);
  CHECK(cgcp_irreps_dim(uniform, &dim) == CGCP_OK);
  CHECK(dim == 27);
  cgcp_irreps_free(uniform);
}

TEST_CASE("capi: cg tensor, exact product, wigner equivariance") {
  double c = 0;
  REQUIRE(cgcp_cg_coefficient(0, 0, 0, 0, 0, 0, &c) == CGCP_OK);
  CHECK(c == 1.0);

  cgcp_cg_tensor* m = nullptr;
  REQUIRE(cgcp_cg_tensor_build(1, 0, &m) == CGCP_OK);
  int dim = 0, paths = 0;
  long long nnz = 0;
  CHECK(cgcp_cg_tensor_dim(m, &dim) == CGCP_OK);
  CHECK(cgcp_cg_tensor_nnz(m, &nnz) == CGCP_OK);
  CHECK(cgcp_cg_tensor_path_count(m, &paths) == CGCP_OK);
  CHECK(dim == 4);
  CHECK(nnz == 16);
  CHECK(paths == 5);

  CHECK(cgcp_cg_tensor_build(99, 0, &m) == CGCP_ERROR_ARGUMENT);
  CHECK(cgcp_cg_tensor_build(1, 7, &m) == CGCP_ERROR_ARGUMENT);

  cgcp_irreps* spec = nullptr;
  REQUIRE(cgcp_irreps_uniform(1, 1, &spec) == CGCP_OK);
  double quat[4];
  REQUIRE(cgcp_sample_rotation(7, 0, quat) == CGCP_OK);
  CHECK(std::abs(quat[0] * quat[0] + quat[1] * quat[1] + quat[2] * quat[2] +
                 quat[3] * quat[3] - 1.0) < 1e-12);

  std::vector<double> d(16);
  REQUIRE(cgcp_wigner_block(spec, quat, d.data()) == CGCP_OK);
  CHECK(d[0] == 1.0);

  std::vector<double> x = {0.3, 0.1, -0.4, 0.9}, y = {-0.2, 0.5, 0.7, 0.2};
  std::vector<double> z(4), dx(4, 0.0), dy(4, 0.0), dz(4, 0.0), zr(4);
  REQUIRE(cgcp_exact_tp(m, x.data(), y.data(), z.data()) == CGCP_OK);
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) {
      dx[r] += d[r * 4 + col] * x[col];
      dy[r] += d[r * 4 + col] * y[col];
    }
  REQUIRE(cgcp_exact_tp(m, dx.data(), dy.data(), zr.data()) == CGCP_OK);
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) dz[r] += d[r * 4 + col] * z[col];
  for (int r = 0; r < 4; ++r) CHECK(std::abs(zr[r] - dz[r]) < 1e-10);

  cgcp_irreps_free(spec);
  cgcp_cg_tensor_free(m);
}

TEST_CASE("capi: fit, apply, save/load round trip") {
  cgcp_cg_tensor* m = nullptr;
  REQUIRE(cgcp_cg_tensor_build(1, 0, &m) == CGCP_OK);

  cgcp_fit_options opts;
  cgcp_fit_options_default(&opts);
  CHECK(opts.max_iters == 500);
  CHECK(opts.restarts == 8);
  opts.seed = 7;

  cgcp_cp_factors* f = nullptr;
  REQUIRE(cgcp_cp_fit(m, 16, &opts, &f) == CGCP_OK);
  double fit = 1.0;
  int rank = 0, iters = 0, dims[3] = {0, 0, 0};
  CHECK(cgcp_cp_factors_fit(f, &fit) == CGCP_OK);
  CHECK(cgcp_cp_factors_rank(f, &rank) == CGCP_OK);
  CHECK(cgcp_cp_factors_iterations(f, &iters) == CGCP_OK);
  CHECK(cgcp_cp_factors_dims(f, dims) == CGCP_OK);
  CHECK(fit < 1e-6);
  CHECK(rank == 16);
  CHECK(iters >= 1);
  CHECK(dims[0] == 4);

  CHECK(cgcp_cp_fit(m, 999, &opts, &f) == CGCP_ERROR_ARGUMENT);

  std::vector<double> x = {0.3, 0.1, -0.4, 0.9}, y = {-0.2, 0.5, 0.7, 0.2};
  std::vector<double> z_exact(4), z_cp(4);
  REQUIRE(cgcp_exact_tp(m, x.data(), y.data(), z_exact.data()) == CGCP_OK);
  REQUIRE(cgcp_cp_apply(f, x.data(), y.data(), z_cp.data()) == CGCP_OK);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(z_exact[i] - z_cp[i]) < 1e-5);

  REQUIRE(cgcp_cp_factors_save(f, "capi_roundtrip.cpf") == CGCP_OK);
  cgcp_cp_factors* g = nullptr;
  REQUIRE(cgcp_cp_factors_load("capi_roundtrip.cpf", &g) == CGCP_OK);
  std::vector<double> z_loaded(4);
  REQUIRE(cgcp_cp_apply(g, x.data(), y.data(), z_loaded.data()) == CGCP_OK);
  for (int i = 0; i < 4; ++i) CHECK(z_loaded[i] == z_cp[i]);
  CHECK(cgcp_cp_factors_load("no_such_file.cpf", &g) == CGCP_ERROR_ARGUMENT);
  std::remove("capi_roundtrip.cpf");

  // batched apply matches the per-row loop
  const int channels = 3;
  std::vector<double> xb(channels * 4), yb(channels * 4), zb(channels * 4);
  for (int i = 0; i < channels * 4; ++i) {
    xb[i] = 0.1 * i - 0.5;
    yb[i] = 0.05 * i * i - 0.3 * i;
  }
  REQUIRE(cgcp_cp_apply_batched(f, channels, xb.data(), yb.data(), zb.data()) == CGCP_OK);
  for (int ch = 0; ch < channels; ++ch) {
    std::vector<double> row(4);
    REQUIRE(cgcp_cp_apply(f, xb.data() + ch * 4, yb.data() + ch * 4, row.data()) == CGCP_OK);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(zb[ch * 4 + i] - row[i]) < 1e-12);
  }

  // shared weight: identity W reproduces the batched result
  std::vector<double> w(channels * channels, 0.0);
  for (int i = 0; i < channels; ++i) w[i * channels + i] = 1.0;
  std::vector<double> zw(channels * 4);
  REQUIRE(cgcp_shared_weight_tp(f, channels, w.data(), xb.data(), yb.data(), zw.data()) ==
          CGCP_OK);
  for (int i = 0; i < channels * 4; ++i) CHECK(std::abs(zw[i] - zb[i]) < 1e-13);

  cgcp_cp_factors_free(f);
  cgcp_cp_factors_free(g);
  cgcp_cg_tensor_free(m);
}

TEST_CASE("capi: export writes the text format") {
  cgcp_cg_tensor* m = nullptr;
  REQUIRE(cgcp_cg_tensor_build(0, 0, &m) == CGCP_OK);
  REQUIRE(cgcp_cg_tensor_export(m, "capi_export.txt") == CGCP_OK);
  FILE* fp = std::fopen("capi_export.txt", "r");
  REQUIRE(fp != nullptr);
  char line[64];
  REQUIRE(std::fgets(line, sizeof line, fp) != nullptr);
  CHECK(std::string(line) == "0 1 1\n");
  std::fclose(fp);
  std::remove("capi_export.txt");
  cgcp_cg_tensor_free(m);
}

TEST_CASE("capi: verify/sweep/bench runners") {
  Str report;
  int ok = 0;
  REQUIRE(cgcp_verify_run(R"({"L":1,"rotations":5,"pairs":2,"bound_samples":10,)"
                          R"("lambda_trials":1,"universality_pairs":5})",
                          &report.v, &ok) == CGCP_OK);
  CHECK(ok == 1);
  CHECK(std::string(report.v).find("\"all_passed\": true") != std::string::npos);

  Str report2;
  REQUIRE(cgcp_verify_run(R"({"L":1,"corrupt_cg":true,"rotations":5,"pairs":2,)"
                          R"("bound_samples":5,"lambda_trials":1,"universality_pairs":2})",
                          &report2.v, &ok) == CGCP_OK);
  CHECK(ok == 0);

  CHECK(cgcp_verify_run("[1,2]", &report2.v, &ok) == CGCP_ERROR_ARGUMENT);

  Str csv, json;
  REQUIRE(cgcp_sweep_run(R"({"L":[1],"schedules":["linear7"],"samples":20,)"
                         R"("rotations":20,"restarts":1,"max_iters":40})",
                         &csv.v, &json.v) == CGCP_OK);
  CHECK(std::string(csv.v).rfind("format_version,L,schedule", 0) == 0);
  CHECK(std::string(json.v).find("\"config\"") != std::string::npos);

  Str bcsv, bjson;
  REQUIRE(cgcp_bench_run(R"({"L":[1],"reps":3,"warmup":1})", &bcsv.v, &bjson.v) == CGCP_OK);
  CHECK(std::string(bcsv.v).find("fp64") != std::string::npos);

  Str fcsv, fjson;
  REQUIRE(cgcp_bench_run(R"({"L":[1],"reps":3,"warmup":1,"fp32":true})", &fcsv.v, &fjson.v) ==
          CGCP_OK);
  CHECK(std::string(fcsv.v).find("fp32") != std::string::npos);
}
