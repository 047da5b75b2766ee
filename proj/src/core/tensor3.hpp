#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cgcp::tensor3 {

struct Coord {
  int k, i, j;  // indices into (d3, d1, d2)
  double value;
};

// Three-way tensor M in R^{d3 x d1 x d2} with entries M[k, i, j], stored dense
// (row-major in (k, i, j)) or as a coordinate list.
class Tensor3 {
 public:
  Tensor3(int d3, int d1, int d2);  // dense zeros
  static Tensor3 from_sparse(int d3, int d1, int d2, std::vector<Coord> entries);
  static Tensor3 from_dense(int d3, int d1, int d2, std::vector<double> values);

  int d3() const { return d3_; }
  int d1() const { return d1_; }
  int d2() const { return d2_; }
  std::int64_t size() const { return std::int64_t(d3_) * d1_ * d2_; }

  bool is_sparse() const { return !sparse_.empty() || dense_.empty(); }
  const std::vector<Coord>& sparse_entries() const { return sparse_; }

  double at(int k, int i, int j) const;
  double& dense_at(int k, int i, int j);

  // Materializes dense storage (throws NumericalError above `max_dense_size`).
  void ensure_dense(std::int64_t max_dense_size = kDenseCap);
  const std::vector<double>& dense_values() const { return dense_; }

  double frobenius_norm() const;

  static constexpr std::int64_t kDenseCap = std::int64_t(1) << 26;

 private:
  int d3_, d1_, d2_;
  std::vector<double> dense_;
  std::vector<Coord> sparse_;
};

// Mode-n unfolding, n in {1, 2, 3}, with mode 1 = k, mode 2 = i, mode 3 = j.
// Mode-n fibers become rows; the remaining indices order the columns with the
// lower-numbered mode varying fastest:
//   n=1: (d3) x (d1*d2), column i + j*d1
//   n=2: (d1) x (d3*d2), column k + j*d3
//   n=3: (d2) x (d3*d1), column k + i*d3
Eigen::MatrixXd matricize(const Tensor3& t, int mode);

// sqrt( sum_{n=1..3} sum_{k > R_T} sigma_k^(n)^2 ) over the three unfoldings.
double singular_tail(const Tensor3& t, int truncation_rank);

}  // namespace cgcp::tensor3
