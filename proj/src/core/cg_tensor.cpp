#include "core/cg_tensor.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "core/cg.hpp"
#include "core/common.hpp"

namespace cgcp::cgtp {

std::vector<Path> enumerate_paths(int max_degree, PathLimit limit) {
  if (max_degree < 0) throw ArgumentError("paths: max_degree must be non-negative");
  std::vector<Path> out;
  for (int l1 = 0; l1 <= max_degree; ++l1)
    for (int l2 = 0; l2 <= max_degree; ++l2) {
      if (limit == PathLimit::kRestrictSum && l1 + l2 > max_degree) continue;
      const int hi = std::min(l1 + l2, max_degree);
      for (int l3 = std::abs(l1 - l2); l3 <= hi; ++l3) out.push_back({l1, l2, l3});
    }
  return out;
}

CGTensor CGTensor::build(int max_degree, PathLimit limit) {
  if (max_degree < 0 || max_degree > kMaxDegree)
    throw ArgumentError("cg_tensor: max_degree must be in [0, 8]");
  CGTensor t;
  t.max_degree_ = max_degree;
  t.dim_ = (max_degree + 1) * (max_degree + 1);
  for (const Path& p : enumerate_paths(max_degree, limit)) {
    PathBlock block;
    block.path = p;
    block.offset1 = p.l1 * p.l1;
    block.offset2 = p.l2 * p.l2;
    block.offset3 = p.l3 * p.l3;
    block.entry_begin = t.entries_.size();
    for (const so3::CgEntry& e : so3::cg_path_entries(p.l1, p.l2, p.l3))
      t.entries_.push_back({block.offset3 + p.l3 + e.m3, block.offset1 + p.l1 + e.m1,
                            block.offset2 + p.l2 + e.m2, e.value});
    block.entry_count = t.entries_.size() - block.entry_begin;
    t.paths_.push_back(block);
  }
  return t;
}

double CGTensor::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return std::sqrt(s);
}

tensor3::Tensor3 CGTensor::to_tensor() const {
  return tensor3::Tensor3::from_sparse(dim_, dim_, dim_, entries_);
}

Eigen::MatrixXd CGTensor::dense_matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, std::int64_t(dim_) * dim_);
  for (const auto& e : entries_) m(e.k, e.i + std::int64_t(e.j) * dim_) = e.value;
  return m;
}

void CGTensor::export_text(std::ostream& out) const {
  out << max_degree_ << ' ' << dim_ << ' ' << entries_.size() << '\n';
  char buf[128];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g\n", e.k, e.i, e.j, e.value);
    out << buf;
  }
}

CGTensor CGTensor::import_text(std::istream& in) {
  int max_degree = 0, dim = 0;
  std::size_t nnz = 0;
  if (!(in >> max_degree >> dim >> nnz)) throw ArgumentError("cg_tensor: malformed header");
  CGTensor reference = build(max_degree);
  if (reference.dim() != dim) throw ArgumentError("cg_tensor: header dim mismatch");
  CGTensor t;
  t.max_degree_ = max_degree;
  t.dim_ = dim;
  t.paths_ = reference.paths_;
  t.entries_.reserve(nnz);
  for (std::size_t n = 0; n < nnz; ++n) {
    tensor3::Coord e{};
    if (!(in >> e.k >> e.i >> e.j >> e.value))
      throw ArgumentError("cg_tensor: truncated entry list");
    t.entries_.push_back(e);
  }
  return t;
}

void CGTensor::corrupt_entry(std::size_t index) {
  entries_.at(index).value = -entries_.at(index).value;
}

Eigen::VectorXd exact_tp(const CGTensor& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != m.dim() || y.size() != m.dim())
    throw ArgumentError("exact_tp: input length must equal (L+1)^2");
  Eigen::VectorXd z(m.dim());
  exact_tp_into(m, x.data(), y.data(), z.data());
  return z;
}

void exact_tp_into(const CGTensor& m, const double* x, const double* y, double* z) {
  std::fill(z, z + m.dim(), 0.0);
  for (const auto& e : m.entries()) z[e.k] += e.value * x[e.i] * y[e.j];
}

}  // namespace cgcp::cgtp
