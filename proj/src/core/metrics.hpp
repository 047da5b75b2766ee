#pragma once

#include <cstdint>

#include "core/apply.hpp"
#include "core/cg_tensor.hpp"

namespace cgcp::analysis {

struct ApproxError {
  double mean = 0.0;   // mean per-sample relative error
  int skipped = 0;     // samples with ||M(x (x) y)|| below the degeneracy floor
  int samples = 0;
};

// Mean over `samples` input pairs of
// ||M(x (x) y) - M_hat(x (x) y)|| / ||M(x (x) y)||, with x, y standard normal
// rescaled to norm `radius`. Throws NumericalError when every sample is
// degenerate.
ApproxError approximation_error(const cgtp::CGTensor& m, const cgtp::CpKernel& kernel,
                                int samples, double radius, std::uint64_t seed);

struct EquivError {
  double mean = 0.0;
  double max = 0.0;
  int rotations = 0;
  int samples_per_rotation = 0;
};

// Monte Carlo estimate of eps(R, x, y) = ||M_hat(Dx (x) Dy) - D M_hat(x (x) y)||
// over Haar-random rotations, with inputs as in approximation_error.
EquivError equivariance_error(const cgtp::CpKernel& kernel, int max_degree, int rotations,
                              int samples_per_rotation, double radius, std::uint64_t seed);

// Same statistic for the exact path-wise product (the CG baseline).
EquivError equivariance_error_exact(const cgtp::CGTensor& m, int rotations,
                                    int samples_per_rotation, double radius, std::uint64_t seed);

// Uniform equivariance bound 2 C^2 (sum_n sum_{k > R_T} sigma_k^(n)^2)^(1/2)
// with R_T = ceil(R^(1/3)).
double equivariance_tail_bound(const cgtp::CGTensor& m, int rank, double radius);
int tail_truncation_rank(int rank);

// Always-valid proof-step bound 2 C^2 ||M - M_hat||_F, with the factor
// residual recomputed from the given factors.
double proof_step_bound(const cgtp::CGTensor& m, const tensor3::CPFactors& f, double radius);

}  // namespace cgcp::analysis
