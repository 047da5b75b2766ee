#pragma once

#include <Eigen/Dense>

#include "core/irreps.hpp"

namespace cgcp::analysis {

// Dimension of the space of SO(3)-equivariant bilinear maps V1 x V2 -> V3:
// sum over admissible degree triples of the multiplicity products c1*c2*c3.
std::size_t path_basis_dim(const so3::IrrepsSpec& in1, const so3::IrrepsSpec& in2,
                           const so3::IrrepsSpec& out);

struct UniversalFactors {
  Eigen::MatrixXd a;  // dim(out) x width
  Eigen::MatrixXd b;  // dim(in1) x width
  Eigen::MatrixXd c;  // dim(in2) x width
  std::size_t basis_dim = 0;  // mu, the length of lambda
};

// Constructive Hadamard-form factorization of Phi = sum_k lambda_k T^(k),
// where T^(k) places the CG block of one admissible path at one multiplicity
// triple (zero elsewhere). The identity Phi(x, y) = A (B^T x . C^T y) holds
// exactly for all inputs. Basis elements are ordered by (in1 block, in2 block,
// out block) in spec order, then multiplicity indices (v, w, u) with u fastest.
// Each basis element contributes one column per non-empty (m1, m2) fiber of
// its CG block, so the returned width exceeds mu whenever a block is not
// rank-1.
UniversalFactors universality_factorize(const so3::IrrepsSpec& in1, const so3::IrrepsSpec& in2,
                                        const so3::IrrepsSpec& out,
                                        const Eigen::VectorXd& lambda);

}  // namespace cgcp::analysis
