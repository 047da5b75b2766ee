#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "core/tensor3.hpp"

namespace cgcp::cgtp {

struct Path {
  int l1, l2, l3;
  bool operator==(const Path&) const = default;
};

// How the output degree range is capped by the maximum degree L. The default
// clamps l3 to min(l1+l2, L); the alternative keeps only paths whose inputs
// satisfy l1+l2 <= L.
enum class PathLimit { kClampOutput, kRestrictSum };

std::vector<Path> enumerate_paths(int max_degree, PathLimit limit = PathLimit::kClampOutput);

struct PathBlock {
  Path path;
  int offset1, offset2, offset3;          // flattened block offsets (l^2)
  std::size_t entry_begin, entry_count;   // range into CGTensor::entries()
};

// Sparse CG coefficient tensor M for maximum degree L, dims (d, d, d) with
// d = (L+1)^2 and entries at (l3^2+l3+m3, l1^2+l1+m1, l2^2+l2+m2).
class CGTensor {
 public:
  static constexpr int kMaxDegree = 8;

  static CGTensor build(int max_degree, PathLimit limit = PathLimit::kClampOutput);

  int max_degree() const { return max_degree_; }
  int dim() const { return dim_; }
  const std::vector<PathBlock>& paths() const { return paths_; }
  const std::vector<tensor3::Coord>& entries() const { return entries_; }
  double frobenius_norm() const;

  tensor3::Tensor3 to_tensor() const;  // sparse Tensor3 of dims (d, d, d)

  // Mode-1-unfolding layout (d rows, d*d columns, column i + j*d), used by the
  // dense reference contraction in benchmarks.
  Eigen::MatrixXd dense_matrix() const;

  // Text export: header "L d nnz", then "k i j value" lines (17 significant
  // digits), entries in path order.
  void export_text(std::ostream& out) const;
  static CGTensor import_text(std::istream& in);

  // Test hook: flips the sign of one coefficient (used for fault injection).
  void corrupt_entry(std::size_t index);

 private:
  CGTensor() = default;
  int max_degree_ = 0;
  int dim_ = 0;
  std::vector<PathBlock> paths_;
  std::vector<tensor3::Coord> entries_;  // grouped by path
};

// z_k = sum_{i,j} M[k,i,j] x_i y_j over the sparse entries, path by path.
Eigen::VectorXd exact_tp(const CGTensor& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Non-allocating form; `z` must have length m.dim() and is overwritten.
void exact_tp_into(const CGTensor& m, const double* x, const double* y, double* z);

}  // namespace cgcp::cgtp
