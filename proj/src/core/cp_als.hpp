#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "core/tensor3.hpp"

namespace cgcp::tensor3 {

struct CpOptions {
  int max_iters = 500;
  double tol = 1e-9;  // stop when the relative fit improves by less than this
  int restarts = 8;
  std::uint64_t seed = 42;
};

// Rank-R CP factors: M[k,i,j] ~= sum_r A[k,r] B[i,r] C[j,r].
struct CPFactors {
  Eigen::MatrixXd A;  // d3 x R
  Eigen::MatrixXd B;  // d1 x R
  Eigen::MatrixXd C;  // d2 x R
  int rank = 0;
  double fit = 0.0;  // ||M - M_hat||_F / ||M||_F for the fitted M
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> fit_history;  // per-sweep fit of the winning run
};

// Largest admissible CP rank for a d3 x d1 x d2 tensor.
std::int64_t generic_rank_bound(int d3, int d1, int d2);

// Alternating least squares with random Gaussian restarts and ridge-stabilized
// (eps = 1e-12) Khatri-Rao normal equations. Column norms of B and C are
// absorbed into A every sweep. Returns the best fit across restarts.
CPFactors cp_als(const Tensor3& t, int rank, const CpOptions& opts = {});

// Same, but additionally runs one pass initialized from `warm` (zero-padded to
// `rank` columns), so the result never fits worse than `warm` did.
CPFactors cp_als_warm(const Tensor3& t, int rank, const CpOptions& opts, const CPFactors& warm);

Tensor3 reconstruct(const CPFactors& f);

// Relative reconstruction error of `f` against `t`, recomputed from scratch.
double recompute_fit(const Tensor3& t, const CPFactors& f);

// .cpf container: one JSON header line, then A, B, C as little-endian 64-bit
// floats in column-major order.
void save_cpf(const CPFactors& f, std::ostream& out);
void save_cpf_file(const CPFactors& f, const std::string& path);
CPFactors load_cpf(std::istream& in);
CPFactors load_cpf_file(const std::string& path);

}  // namespace cgcp::tensor3
