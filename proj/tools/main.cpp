// cgcp command-line front end. Links the C API only; all numerics live in the
// shared library.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "cgcp.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(int api_code) {
  switch (api_code) {
    case CGCP_OK: return kExitOk;
    case CGCP_ERROR_ARGUMENT:
    case CGCP_ERROR_IO: return kExitUsage;
    default: return kExitNumeric;
  }
}

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "cgcp: " << message << "\n";
  std::exit(code);
}

void check_api(int rc) {
  if (rc != CGCP_OK) die(exit_code_for(rc), cgcp_last_error());
}

// "1..4" (inclusive range), "2" or "1,3,5".
std::vector<int> parse_degree_list(const std::string& text) {
  std::vector<int> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots));
      const int hi = std::stoi(text.substr(dots + 2));
      for (int l = lo; l <= hi; ++l) out.push_back(l);
    } else {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto term = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        out.push_back(std::stoi(term));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const std::exception&) {
    die(kExitUsage, "malformed degree list '" + text + "' (use e.g. 2, 1,3,5 or 1..4)");
  }
  if (out.empty()) die(kExitUsage, "empty degree list");
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    out.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos
                                                              : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// --config FILE overrides any flag value for keys present in the file.
void merge_config_file(json& options, const std::string& config_path) {
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) die(kExitUsage, "cannot open config file '" + config_path + "'");
  json overrides = json::parse(in, nullptr, false);
  if (overrides.is_discarded() || !overrides.is_object())
    die(kExitUsage, "config file must contain a JSON object");
  for (auto& [key, value] : overrides.items()) options[key] = value;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitUsage, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) die(kExitUsage, "failed writing '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) die(kExitUsage, "cannot create output directory '" + dir + "'");
  return p;
}

struct ApiString {
  char* value = nullptr;
  ~ApiString() { cgcp_string_free(value); }
};

int cmd_fit(const json& options, const fs::path& out_dir) {
  const int degree = options.value("L", 1);
  const int rank = options.value("R", 1);
  cgcp_fit_options fit;
  cgcp_fit_options_default(&fit);
  fit.max_iters = options.value("max_iters", fit.max_iters);
  fit.tol = options.value("tol", fit.tol);
  fit.restarts = options.value("restarts", fit.restarts);
  fit.seed = options.value("seed", fit.seed);

  cgcp_cg_tensor* tensor = nullptr;
  check_api(cgcp_cg_tensor_build(degree, 0, &tensor));

  const auto t0 = std::chrono::steady_clock::now();
  cgcp_cp_factors* factors = nullptr;
  const int rc = cgcp_cp_fit(tensor, rank, &fit, &factors);
  if (rc != CGCP_OK) {
    cgcp_cg_tensor_free(tensor);
    die(exit_code_for(rc), cgcp_last_error());
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const fs::path cpf_path =
      out_dir / ("cg_L" + std::to_string(degree) + "_R" + std::to_string(rank) + ".cpf");
  check_api(cgcp_cp_factors_save(factors, cpf_path.string().c_str()));

  double fit_value = 0.0;
  int iterations = 0;
  check_api(cgcp_cp_factors_fit(factors, &fit_value));
  check_api(cgcp_cp_factors_iterations(factors, &iterations));

  const json summary = {
      {"format_version", 1},
      {"config",
       {{"L", degree},
        {"R", rank},
        {"max_iters", fit.max_iters},
        {"tol", fit.tol},
        {"restarts", fit.restarts},
        {"seed", fit.seed}}},
      {"fit", fit_value},
      {"iterations", iterations},
      {"wall_ms", wall_ms},
      {"factors_file", cpf_path.string()},
  };
  write_text_file(out_dir / "fit_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";

  cgcp_cp_factors_free(factors);
  cgcp_cg_tensor_free(tensor);
  return kExitOk;
}

int cmd_verify(const json& options, const fs::path& out_dir) {
  ApiString report;
  int all_passed = 0;
  const int rc = cgcp_verify_run(options.dump().c_str(), &report.value, &all_passed);
  if (rc != CGCP_OK) die(exit_code_for(rc), cgcp_last_error());
  write_text_file(out_dir / "verify_report.json", std::string(report.value) + "\n");

  const json parsed = json::parse(report.value);
  for (const auto& check : parsed.at("checks"))
    std::printf("%-28s %s  max_residual=%.3e  tol=%.1e\n",
                check.at("name").get<std::string>().c_str(),
                check.at("passed").get<bool>() ? "PASS" : "FAIL",
                check.at("max_residual").get<double>(),
                check.at("tolerance").get<double>());
  if (!all_passed) {
    for (const auto& check : parsed.at("checks"))
      if (!check.at("passed").get<bool>())
        std::cerr << "cgcp: invariant failure in check '"
                  << check.at("name").get<std::string>() << "'\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_sweep(const json& options, const fs::path& out_dir) {
  ApiString csv, report;
  const int rc = cgcp_sweep_run(options.dump().c_str(), &csv.value, &report.value);
  if (rc != CGCP_OK) die(exit_code_for(rc), cgcp_last_error());
  write_text_file(out_dir / "sweep.csv", csv.value);
  write_text_file(out_dir / "sweep.json", std::string(report.value) + "\n");
  const json parsed = json::parse(report.value);
  std::cout << "sweep: " << parsed.at("reports").size() << " cells -> "
            << (out_dir / "sweep.csv").string() << "\n";
  if (parsed.value("all_failed", false)) {
    std::cerr << "cgcp: every sweep cell failed\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_bench(const json& options, const fs::path& out_dir) {
  ApiString csv, report;
  const int rc = cgcp_bench_run(options.dump().c_str(), &csv.value, &report.value);
  if (rc != CGCP_OK) die(exit_code_for(rc), cgcp_last_error());
  write_text_file(out_dir / "bench.csv", csv.value);
  write_text_file(out_dir / "bench.json", std::string(report.value) + "\n");
  std::cout << csv.value;
  return kExitOk;
}

int cmd_export_cg(const json& options, const fs::path& out_dir) {
  const int degree = options.value("L", 1);
  const int path_limit = options.value("restrict_sum", false) ? 1 : 0;
  cgcp_cg_tensor* tensor = nullptr;
  check_api(cgcp_cg_tensor_build(degree, path_limit, &tensor));
  const fs::path path = out_dir / ("cg_L" + std::to_string(degree) + ".txt");
  const int rc = cgcp_cg_tensor_export(tensor, path.string().c_str());
  cgcp_cg_tensor_free(tensor);
  if (rc != CGCP_OK) die(exit_code_for(rc), cgcp_last_error());
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CP-decomposed Clebsch-Gordan tensor products: fitting, verification, "
               "rank-schedule sweeps and runtime benchmarks"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string config_path;
  app.add_option("--out-dir", out_dir, "Directory all outputs are written to");
  app.add_option("--config", config_path,
                 "JSON file whose values override command-line flags");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit CP factors of the CG tensor and write a .cpf");
  int fit_L = 1, fit_R = 1, fit_restarts = 8, fit_max_iters = 500;
  double fit_tol = 1e-9;
  std::uint64_t fit_seed = 42;
  fit->add_option("--L", fit_L, "Maximum degree (0..8)")->required();
  fit->add_option("--R", fit_R, "CP rank")->required();
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--restarts", fit_restarts, "Random restarts");
  fit->add_option("--max-iters", fit_max_iters, "Maximum ALS sweeps");
  fit->add_option("--tol", fit_tol, "Relative fit-change stop tolerance");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant checks");
  int verify_L = 3, verify_rotations = 50;
  std::uint64_t verify_seed = 42;
  std::string verify_check;
  bool corrupt_cg = false;
  verify->add_option("--L", verify_L, "Maximum degree checked");
  verify->add_option("--rotations", verify_rotations, "Random rotations per check");
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify->add_option("--check", verify_check, "Run a single named check");
  std::string verify_irreps;
  verify->add_option("--irreps", verify_irreps,
                     "Feature field for the universality check, e.g. 2x0+2x1");
  verify->add_flag("--corrupt-cg", corrupt_cg,
                   "Fault-injection hook: flip one CG entry sign (must fail)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Rank-schedule error/timing sweep (CSV + JSON)");
  std::string sweep_L = "1..3";
  std::string sweep_schedules = "quartic,log2,linear7,quadratic7";
  int sweep_samples = 1000, sweep_rotations = 1000, sweep_restarts = 3, sweep_max_iters = 200;
  double sweep_radius = 1.0, sweep_tol = 1e-9;
  std::uint64_t sweep_seed = 42;
  sweep->add_option("--L", sweep_L, "Degrees, e.g. 1..4 or 1,2,4");
  sweep->add_option("--schedules", sweep_schedules,
                    "Comma list of quartic|log2|linear7|quadratic7|custom:S:P");
  sweep->add_option("--samples", sweep_samples, "Input pairs for the approximation error");
  sweep->add_option("--rotations", sweep_rotations, "Rotations for the equivariance error");
  sweep->add_option("--radius", sweep_radius, "Input norm bound C");
  sweep->add_option("--seed", sweep_seed, "RNG seed");
  sweep->add_option("--restarts", sweep_restarts, "ALS restarts per fit");
  sweep->add_option("--max-iters", sweep_max_iters, "ALS sweep cap per fit");
  sweep->add_option("--tol", sweep_tol, "ALS stop tolerance");
  int sweep_threads = 1;
  sweep->add_option("--threads", sweep_threads,
                    "Concurrent per-degree groups (1 = serial, the output is identical)");

  // bench
  auto* bench = app.add_subcommand("bench", "Runtime benchmark of the product kernels");
  std::string bench_L = "1..6";
  int bench_reps = 15, bench_warmup = 10;
  std::uint64_t bench_seed = 42;
  bool bench_fp32 = false;
  bench->add_option("--L", bench_L, "Degrees, e.g. 1..6");
  bench->add_option("--reps", bench_reps, "Timing repetitions (median reported)");
  bench->add_option("--warmup", bench_warmup, "Discarded warmup calls");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_flag("--fp32", bench_fp32, "Time 32-bit kernels instead of 64-bit");
  int bench_threads = 1;
  bench->add_option("--threads", bench_threads,
                    "Must be 1: timing kernels always run single-threaded");

  // export-cg
  auto* export_cg = app.add_subcommand("export-cg", "Write the sparse CG text format");
  int export_L = 1;
  bool export_restrict_sum = false;
  export_cg->add_option("--L", export_L, "Maximum degree")->required();
  export_cg->add_flag("--restrict-sum", export_restrict_sum,
                      "Keep only paths with l1+l2 <= L");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const fs::path out = prepare_out_dir(out_dir);

  if (fit->parsed()) {
    json options = {{"L", fit_L},         {"R", fit_R},
                    {"seed", fit_seed},   {"restarts", fit_restarts},
                    {"max_iters", fit_max_iters}, {"tol", fit_tol}};
    merge_config_file(options, config_path);
    return cmd_fit(options, out);
  }
  if (verify->parsed()) {
    json options = {{"L", verify_L},
                    {"rotations", verify_rotations},
                    {"seed", verify_seed},
                    {"corrupt_cg", corrupt_cg},
                    {"check", verify_check},
                    {"irreps", verify_irreps}};
    merge_config_file(options, config_path);
    return cmd_verify(options, out);
  }
  if (sweep->parsed()) {
    json options = {{"L", parse_degree_list(sweep_L)},
                    {"schedules", split_csv(sweep_schedules)},
                    {"samples", sweep_samples},
                    {"rotations", sweep_rotations},
                    {"radius", sweep_radius},
                    {"seed", sweep_seed},
                    {"threads", sweep_threads},
                    {"restarts", sweep_restarts},
                    {"max_iters", sweep_max_iters},
                    {"tol", sweep_tol}};
    merge_config_file(options, config_path);
    return cmd_sweep(options, out);
  }
  if (bench->parsed()) {
    if (bench_threads != 1)
      die(kExitUsage, "bench runs single-threaded; --threads must be 1");
    json options = {{"L", parse_degree_list(bench_L)},
                    {"reps", bench_reps},
                    {"warmup", bench_warmup},
                    {"seed", bench_seed},
                    {"fp32", bench_fp32}};
    merge_config_file(options, config_path);
    return cmd_bench(options, out);
  }
  if (export_cg->parsed()) {
    json options = {{"L", export_L}, {"restrict_sum", export_restrict_sum}};
    merge_config_file(options, config_path);
    return cmd_export_cg(options, out);
  }
  return kExitUsage;
}
