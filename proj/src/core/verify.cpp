#include "core/verify.hpp"

#include <cmath>
#include <functional>

#include "core/apply.hpp"
#include "core/cg.hpp"
#include "core/cg_tensor.hpp"
#include "core/common.hpp"
#include "core/metrics.hpp"
#include "core/irreps.hpp"
#include "core/universality.hpp"
#include "core/wigner.hpp"

namespace cgcp::analysis {

namespace {

Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

CheckResult check_cg_orthogonality(const VerifyOptions& opts) {
  CheckResult result{"cg_orthogonality", false, 0.0, opts.tol_cg, ""};
  for (const auto& path : cgtp::enumerate_paths(opts.max_degree)) {
    const auto entries = so3::cg_path_entries(path.l1, path.l2, path.l3);
    const int n3 = 2 * path.l3 + 1;
    Eigen::MatrixXd block =
        Eigen::MatrixXd::Zero(n3, (2 * path.l1 + 1) * (2 * path.l2 + 1));
    for (const auto& e : entries)
      block(e.m3 + path.l3, (e.m1 + path.l1) * (2 * path.l2 + 1) + e.m2 + path.l2) = e.value;
    const double gram_err =
        (block * block.transpose() - Eigen::MatrixXd::Identity(n3, n3)).cwiseAbs().maxCoeff();
    const double norm_err = std::abs(block.squaredNorm() - n3);
    result.worst = std::max({result.worst, gram_err, norm_err});
  }
  result.passed = result.worst < result.tolerance;
  result.detail = "per-path row orthonormality and squared norm 2*l3+1";
  return result;
}

CheckResult check_cg_selection_rule(const VerifyOptions& opts) {
  CheckResult result{"cg_selection_rule", false, 0.0, 0.0, ""};
  const int lmax = std::min(cgtp::CGTensor::kMaxDegree, opts.max_degree + 2);
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int l2 = 0; l2 <= lmax; ++l2)
      for (int l3 = 0; l3 <= lmax; ++l3) {
        if (so3::selection_rule(l1, l2, l3)) continue;
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2)
            for (int m3 = -l3; m3 <= l3; ++m3)
              result.worst =
                  std::max(result.worst,
                           std::abs(so3::cg_coefficient(l1, m1, l2, m2, l3, m3)));
      }
  result.passed = result.worst == 0.0;
  result.detail = "coefficients outside |l1-l2| <= l3 <= l1+l2 are exactly zero";
  return result;
}

CheckResult check_wigner_orthogonality(const VerifyOptions& opts) {
  CheckResult result{"wigner_orthogonality", false, 0.0, opts.tol_wigner, ""};
  auto rng = seeded_rng(opts.seed, {0x776f7274ull});
  for (int r = 0; r < opts.rotations; ++r) {
    const auto rot = so3::sample_rotation(rng);
    for (int l = 0; l <= opts.max_degree; ++l) {
      const Eigen::MatrixXd d = so3::wigner_d(l, rot);
      result.worst = std::max(
          result.worst,
          (d.transpose() * d - Eigen::MatrixXd::Identity(d.rows(), d.cols())).norm());
    }
  }
  result.passed = result.worst < result.tolerance;
  result.detail = "||D^T D - I||_F over random rotations";
  return result;
}

CheckResult check_wigner_homomorphism(const VerifyOptions& opts) {
  CheckResult result{"wigner_homomorphism", false, 0.0, opts.tol_wigner, ""};
  auto rng = seeded_rng(opts.seed, {0x78686f6dull});
  const auto spec = so3::IrrepsSpec::uniform(1, opts.max_degree);
  for (int r = 0; r < std::max(1, opts.rotations / 2); ++r) {
    const auto r1 = so3::sample_rotation(rng);
    const auto r2 = so3::sample_rotation(rng);
    const Eigen::MatrixXd lhs = so3::wigner_block(spec, r1 * r2);
    const Eigen::MatrixXd rhs = so3::wigner_block(spec, r1) * so3::wigner_block(spec, r2);
    result.worst = std::max(result.worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  result.passed = result.worst < result.tolerance;
  result.detail = "D(R1 R2) = D(R1) D(R2) on the concatenated field";
  return result;
}

CheckResult check_exact_equivariance(const VerifyOptions& opts, const cgtp::CGTensor& m) {
  CheckResult result{"exact_tp_equivariance", false, 0.0, opts.tol_equivariance, ""};
  auto rng = seeded_rng(opts.seed, {0x657174ull});
  const auto spec = so3::IrrepsSpec::uniform(1, m.max_degree());
  for (int r = 0; r < opts.rotations; ++r) {
    const auto rot = so3::sample_rotation(rng);
    const Eigen::MatrixXd d = so3::wigner_block(spec, rot);
    for (int p = 0; p < opts.pairs; ++p) {
      const Eigen::VectorXd x = gaussian_vector(rng, m.dim());
      const Eigen::VectorXd y = gaussian_vector(rng, m.dim());
      const Eigen::VectorXd ref = cgtp::exact_tp(m, x, y);
      const double err = (cgtp::exact_tp(m, d * x, d * y) - d * ref).norm() /
                         std::max(ref.norm(), 1e-300);
      result.worst = std::max(result.worst, err);
    }
  }
  result.passed = result.worst < result.tolerance;
  result.detail = "relative ||M(Dx,Dy) - D M(x,y)|| on the assembled tensor";
  return result;
}

CheckResult check_proof_step_bound(const VerifyOptions& opts, const cgtp::CGTensor& m) {
  CheckResult result{"proof_step_bound", false, 0.0, opts.tol_bound_slack, ""};
  const int rank = static_cast<int>(std::min<std::int64_t>(
      std::max(1, 7 * m.max_degree() * m.max_degree()),
      tensor3::generic_rank_bound(m.dim(), m.dim(), m.dim())));
  tensor3::CpOptions fit_opts;
  fit_opts.restarts = 2;
  fit_opts.max_iters = 100;
  fit_opts.seed = opts.seed;
  const auto factors = tensor3::cp_als(m.to_tensor(), rank, fit_opts);
  const cgtp::CpKernel kernel(factors);
  const double bound = proof_step_bound(m, factors, opts.radius);

  auto rng = seeded_rng(opts.seed, {0x626f756e64ull});
  const auto spec = so3::IrrepsSpec::uniform(1, m.max_degree());
  std::normal_distribution<double> normal;
  double worst_violation = 0.0;
  for (int s = 0; s < opts.bound_samples; ++s) {
    const auto rot = so3::sample_rotation(rng);
    const Eigen::MatrixXd d = so3::wigner_block(spec, rot);
    Eigen::VectorXd x = gaussian_vector(rng, m.dim());
    Eigen::VectorXd y = gaussian_vector(rng, m.dim());
    x *= opts.radius / std::max(x.norm(), 1e-300);
    y *= opts.radius / std::max(y.norm(), 1e-300);
    const double eps = (kernel.apply(d * x, d * y) - d * kernel.apply(x, y)).norm();
    worst_violation = std::max(worst_violation, eps - bound);
  }
  result.worst = worst_violation;
  result.passed = result.worst < result.tolerance;
  result.detail = "eps(R,x,y) <= 2 C^2 ||M - M_hat||_F at R=" + std::to_string(rank) +
                  ", fit=" + std::to_string(factors.fit);
  return result;
}

CheckResult check_universality(const VerifyOptions& opts) {
  CheckResult result{"universality", false, 0.0, opts.tol_universality, ""};
  const auto spec = opts.irreps.empty()
                        ? so3::IrrepsSpec::uniform(opts.multiplicity, opts.max_degree)
                        : so3::IrrepsSpec::parse(opts.irreps);
  const std::size_t mu = path_basis_dim(spec, spec, spec);
  auto rng = seeded_rng(opts.seed, {0x756e69ull});
  std::normal_distribution<double> normal;

  // Independent dense contraction of Phi = sum_k lambda_k T^(k).
  for (int trial = 0; trial < opts.lambda_trials; ++trial) {
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(mu));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = normal(rng);
    const auto factors = universality_factorize(spec, spec, spec, lambda);
    const cgtp::CpKernel kernel(factors.a, factors.b, factors.c);

    for (int p = 0; p < opts.universality_pairs; ++p) {
      const Eigen::VectorXd x = gaussian_vector(rng, spec.total_dim());
      const Eigen::VectorXd y = gaussian_vector(rng, spec.total_dim());
      // oracle: loop basis elements in the documented order
      Eigen::VectorXd phi = Eigen::VectorXd::Zero(spec.total_dim());
      std::size_t k = 0;
      for (std::size_t b1 = 0; b1 < spec.blocks().size(); ++b1)
        for (std::size_t b2 = 0; b2 < spec.blocks().size(); ++b2)
          for (std::size_t b3 = 0; b3 < spec.blocks().size(); ++b3) {
            const auto& blk1 = spec.blocks()[b1];
            const auto& blk2 = spec.blocks()[b2];
            const auto& blk3 = spec.blocks()[b3];
            if (!so3::selection_rule(blk1.degree, blk2.degree, blk3.degree)) continue;
            const auto entries =
                so3::cg_path_entries(blk1.degree, blk2.degree, blk3.degree);
            for (int v = 0; v < blk1.multiplicity; ++v)
              for (int w = 0; w < blk2.multiplicity; ++w)
                for (int u = 0; u < blk3.multiplicity; ++u) {
                  const double coeff = lambda(static_cast<Eigen::Index>(k++));
                  const int o1 = spec.block_offset(b1) + v * (2 * blk1.degree + 1);
                  const int o2 = spec.block_offset(b2) + w * (2 * blk2.degree + 1);
                  const int o3 = spec.block_offset(b3) + u * (2 * blk3.degree + 1);
                  for (const auto& e : entries)
                    phi(o3 + blk3.degree + e.m3) += coeff * e.value *
                                                    x(o1 + blk1.degree + e.m1) *
                                                    y(o2 + blk2.degree + e.m2);
                }
          }
      result.worst = std::max(result.worst, (kernel.apply(x, y) - phi).cwiseAbs().maxCoeff());
    }
  }
  result.passed = result.worst < result.tolerance;
  result.detail = "max residual of the Hadamard identity, mu=" + std::to_string(mu);
  return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  if (opts.max_degree < 0 || opts.max_degree > cgtp::CGTensor::kMaxDegree)
    throw ArgumentError("verify: max_degree must be in [0, 8]");

  cgtp::CGTensor m = cgtp::CGTensor::build(opts.max_degree);
  if (opts.corrupt_cg && !m.entries().empty()) m.corrupt_entry(m.entries().size() / 2);

  std::vector<std::pair<std::string, std::function<CheckResult()>>> table = {
      {"cg_orthogonality", [&] { return check_cg_orthogonality(opts); }},
      {"cg_selection_rule", [&] { return check_cg_selection_rule(opts); }},
      {"wigner_orthogonality", [&] { return check_wigner_orthogonality(opts); }},
      {"wigner_homomorphism", [&] { return check_wigner_homomorphism(opts); }},
      {"exact_tp_equivariance", [&] { return check_exact_equivariance(opts, m); }},
      {"proof_step_bound", [&] { return check_proof_step_bound(opts, m); }},
      {"universality", [&] { return check_universality(opts); }},
  };

  std::vector<CheckResult> results;
  bool matched = false;
  for (auto& [name, fn] : table) {
    if (!opts.only_check.empty() && opts.only_check != name) continue;
    matched = true;
    results.push_back(fn());
  }
  if (!matched) throw ArgumentError("verify: unknown check '" + opts.only_check + "'");
  return results;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

nlohmann::json verification_to_json(const VerifyOptions& opts,
                                    const std::vector<CheckResult>& checks) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : checks)
    rows.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"max_residual", c.worst},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
  return {{"format_version", 1},
          {"config",
           {{"L", opts.max_degree},
            {"rotations", opts.rotations},
            {"pairs", opts.pairs},
            {"bound_samples", opts.bound_samples},
            {"multiplicity", opts.multiplicity},
            {"irreps", opts.irreps},
            {"lambda_trials", opts.lambda_trials},
            {"universality_pairs", opts.universality_pairs},
            {"radius", opts.radius},
            {"seed", opts.seed},
            {"corrupt_cg", opts.corrupt_cg},
            {"check", opts.only_check}}},
          {"checks", rows},
          {"all_passed", all_passed(checks)}};
}

}  // namespace cgcp::analysis
