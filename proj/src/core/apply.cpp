#include "core/apply.hpp"

#include "core/common.hpp"

namespace cgcp::cgtp {

namespace {

int padded_rank(int rank) { return (rank + 7) / 8 * 8; }

}  // namespace

template <typename Scalar>
CpKernelT<Scalar>::CpKernelT(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c) {
  if (a.cols() != b.cols() || a.cols() != c.cols())
    throw ArgumentError("cp kernel: factor matrices must share the rank dimension");
  rank_ = static_cast<int>(a.cols());
  const int rp = padded_rank(std::max(rank_, 1));
  at_.setZero(rp, a.rows());
  bt_.setZero(rp, b.rows());
  ct_.setZero(rp, c.rows());
  at_.topRows(rank_) = a.transpose().template cast<Scalar>();
  bt_.topRows(rank_) = b.transpose().template cast<Scalar>();
  ct_.topRows(rank_) = c.transpose().template cast<Scalar>();
  bx_.setZero(rp);
  cy_.setZero(rp);
}

template <typename Scalar>
void CpKernelT<Scalar>::apply(const Eigen::Ref<const Eigen::VectorX<Scalar>>& x,
                              const Eigen::Ref<const Eigen::VectorX<Scalar>>& y,
                              Eigen::Ref<Eigen::VectorX<Scalar>> out) const {
  if (x.size() != bt_.cols() || y.size() != ct_.cols() || out.size() != at_.cols())
    throw ArgumentError("cp kernel: dimension mismatch");
  bx_.noalias() = bt_ * x;
  cy_.noalias() = ct_ * y;
  bx_.array() *= cy_.array();
  out.noalias() = at_.transpose() * bx_;
}

template <typename Scalar>
Eigen::VectorX<Scalar> CpKernelT<Scalar>::apply(
    const Eigen::Ref<const Eigen::VectorX<Scalar>>& x,
    const Eigen::Ref<const Eigen::VectorX<Scalar>>& y) const {
  Eigen::VectorX<Scalar> out(at_.cols());
  apply(x, y, out);
  return out;
}

template <typename Scalar>
RowMatrix<Scalar> CpKernelT<Scalar>::apply_batched(const Eigen::Ref<const RowMatrix<Scalar>>& x,
                                                   const Eigen::Ref<const RowMatrix<Scalar>>& y) const {
  if (x.rows() != y.rows()) throw ArgumentError("apply_batched: channel counts differ");
  if (x.cols() != bt_.cols() || y.cols() != ct_.cols())
    throw ArgumentError("apply_batched: dimension mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> p = bt_ * x.transpose();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q = ct_ * y.transpose();
  p.array() *= q.array();
  RowMatrix<Scalar> out = (at_.transpose() * p).transpose();
  return out;
}

template class CpKernelT<double>;
template class CpKernelT<float>;

Eigen::VectorXd apply_cp(const tensor3::CPFactors& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  return CpKernel(f).apply(x, y);
}

RowMatrixXd apply_cp_batched(const tensor3::CPFactors& f, const RowMatrixXd& x,
                             const RowMatrixXd& y) {
  return CpKernel(f).apply_batched(x, y);
}

SharedWeight::SharedWeight(Eigen::MatrixXd mixing) : w(std::move(mixing)) {
  if (w.rows() != w.cols()) throw ArgumentError("shared weight: W must be square");
  if (!w.allFinite()) throw ArgumentError("shared weight: W must be finite");
}

RowMatrixXd shared_weight_tp(const CpKernel& kernel, const SharedWeight& weight,
                             const RowMatrixXd& x, const RowMatrixXd& y) {
  if (x.rows() != weight.channels())
    throw ArgumentError("shared_weight_tp: channel count does not match W");
  RowMatrixXd z = kernel.apply_batched(x, y);
  return weight.w * z;
}

Eigen::VectorXd apply_cp_multiorder(const Eigen::MatrixXd& a,
                                    const std::vector<Eigen::MatrixXd>& bs,
                                    const std::vector<Eigen::VectorXd>& xs) {
  if (bs.size() < 2) throw ArgumentError("apply_cp_multiorder: need at least two inputs");
  if (bs.size() != xs.size())
    throw ArgumentError("apply_cp_multiorder: factor/input count mismatch");
  const Eigen::Index rank = a.cols();
  Eigen::VectorXd h = Eigen::VectorXd::Ones(rank);
  for (std::size_t n = 0; n < bs.size(); ++n) {
    if (bs[n].cols() != rank) throw ArgumentError("apply_cp_multiorder: rank mismatch");
    if (bs[n].rows() != xs[n].size())
      throw ArgumentError("apply_cp_multiorder: input dimension mismatch");
    h.array() *= (bs[n].transpose() * xs[n]).array();
  }
  return a * h;
}

}  // namespace cgcp::cgtp
