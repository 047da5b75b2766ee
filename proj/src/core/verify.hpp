#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace cgcp::analysis {

struct VerifyOptions {
  int max_degree = 3;
  int rotations = 50;
  int pairs = 10;            // input pairs per rotation for equivariance checks
  int bound_samples = 200;   // (rotation, x, y) samples for the proof-step bound
  int multiplicity = 2;      // universality feature multiplicity
  std::string irreps;        // overrides (multiplicity, max_degree) for universality
  int lambda_trials = 5;     // random coefficient vectors for universality
  int universality_pairs = 50;
  double radius = 1.0;
  std::uint64_t seed = 42;
  bool corrupt_cg = false;   // fault-injection hook: flips one CG entry sign
  std::string only_check;    // run a single named check when non-empty

  // Pinned tolerances.
  double tol_cg = 1e-12;
  double tol_wigner = 1e-10;
  double tol_equivariance = 1e-10;
  double tol_bound_slack = 1e-9;
  double tol_universality = 1e-10;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // measured worst-case value
  double tolerance = 0.0;
  std::string detail;
};

// Runs the invariant suites: CG orthogonality + selection rule, Wigner
// orthogonality + homomorphism, exact-product equivariance, the proof-step
// equivariance bound, and the universality factorization residual.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& checks);
nlohmann::json verification_to_json(const VerifyOptions& opts,
                                    const std::vector<CheckResult>& checks);

}  // namespace cgcp::analysis
