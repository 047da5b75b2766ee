#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/cp_als.hpp"

namespace cgcp::cgtp {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixXd = RowMatrix<double>;

// Evaluation kernel for z = A (B^T x . C^T y). The factors are stored
// transposed with the rank dimension padded to a SIMD-friendly multiple of 8
// (padding rows are zero, so results are bit-identical to the unpadded form).
// apply() reuses internal scratch: copy the kernel per thread for concurrent use.
template <typename Scalar>
class CpKernelT {
 public:
  CpKernelT(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c);
  explicit CpKernelT(const tensor3::CPFactors& f) : CpKernelT(f.A, f.B, f.C) {}

  int d1() const { return static_cast<int>(bt_.cols()); }
  int d2() const { return static_cast<int>(ct_.cols()); }
  int d3() const { return static_cast<int>(at_.cols()); }
  int rank() const { return rank_; }

  void apply(const Eigen::Ref<const Eigen::VectorX<Scalar>>& x,
             const Eigen::Ref<const Eigen::VectorX<Scalar>>& y,
             Eigen::Ref<Eigen::VectorX<Scalar>> out) const;
  Eigen::VectorX<Scalar> apply(const Eigen::Ref<const Eigen::VectorX<Scalar>>& x,
                               const Eigen::Ref<const Eigen::VectorX<Scalar>>& y) const;

  // Row-wise apply over multiplicity channels (rows of X and Y); exactly three
  // matrix products plus one elementwise product.
  RowMatrix<Scalar> apply_batched(const Eigen::Ref<const RowMatrix<Scalar>>& x,
                                  const Eigen::Ref<const RowMatrix<Scalar>>& y) const;

 private:
  int rank_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> bt_, ct_, at_;  // padded, transposed
  mutable Eigen::VectorX<Scalar> bx_, cy_;
};

using CpKernel = CpKernelT<double>;

extern template class CpKernelT<double>;
extern template class CpKernelT<float>;

// One-shot helpers.
Eigen::VectorXd apply_cp(const tensor3::CPFactors& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);
RowMatrixXd apply_cp_batched(const tensor3::CPFactors& f, const RowMatrixXd& x,
                             const RowMatrixXd& y);

// Single multiplicity-space mixing matrix shared by every CG path.
struct SharedWeight {
  Eigen::MatrixXd w;  // c x c
  explicit SharedWeight(Eigen::MatrixXd mixing);
  int channels() const { return static_cast<int>(w.rows()); }
  // c^2, independent of the maximum degree.
  std::int64_t parameter_count() const { return std::int64_t(w.rows()) * w.cols(); }
};

// W applied to the channel axis of the batched CP tensor product.
RowMatrixXd shared_weight_tp(const CpKernel& kernel, const SharedWeight& weight,
                             const RowMatrixXd& x, const RowMatrixXd& y);

// N-ary Hadamard form out = A (B1^T x1 . B2^T x2 . ... . BN^T xN), N >= 2.
Eigen::VectorXd apply_cp_multiorder(const Eigen::MatrixXd& a,
                                    const std::vector<Eigen::MatrixXd>& bs,
                                    const std::vector<Eigen::VectorXd>& xs);

}  // namespace cgcp::cgtp
