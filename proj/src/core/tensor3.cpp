#include "core/tensor3.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <set>

#include "core/common.hpp"

namespace cgcp::tensor3 {

Tensor3::Tensor3(int d3, int d1, int d2) : d3_(d3), d1_(d1), d2_(d2) {
  if (d3 <= 0 || d1 <= 0 || d2 <= 0) throw ArgumentError("tensor3: dims must be positive");
  dense_.assign(static_cast<std::size_t>(size()), 0.0);
}

Tensor3 Tensor3::from_sparse(int d3, int d1, int d2, std::vector<Coord> entries) {
  if (d3 <= 0 || d1 <= 0 || d2 <= 0) throw ArgumentError("tensor3: dims must be positive");
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& e : entries) {
    if (e.k < 0 || e.k >= d3 || e.i < 0 || e.i >= d1 || e.j < 0 || e.j >= d2)
      throw ArgumentError("tensor3: sparse index out of range");
    if (e.value == 0.0) throw ArgumentError("tensor3: sparse entries must be non-zero");
    if (!seen.emplace(e.k, e.i, e.j).second)
      throw ArgumentError("tensor3: duplicate sparse index");
  }
  Tensor3 t(d3, d1, d2);
  t.dense_.clear();
  t.sparse_ = std::move(entries);
  return t;
}

Tensor3 Tensor3::from_dense(int d3, int d1, int d2, std::vector<double> values) {
  Tensor3 t(d3, d1, d2);
  if (static_cast<std::int64_t>(values.size()) != t.size())
    throw ArgumentError("tensor3: dense size mismatch");
  t.dense_ = std::move(values);
  return t;
}

double Tensor3::at(int k, int i, int j) const {
  if (!dense_.empty()) return dense_[(static_cast<std::size_t>(k) * d1_ + i) * d2_ + j];
  double v = 0.0;
  for (const auto& e : sparse_)
    if (e.k == k && e.i == i && e.j == j) v += e.value;
  return v;
}

double& Tensor3::dense_at(int k, int i, int j) {
  return dense_[(static_cast<std::size_t>(k) * d1_ + i) * d2_ + j];
}

void Tensor3::ensure_dense(std::int64_t max_dense_size) {
  if (!dense_.empty()) return;
  if (size() > max_dense_size)
    throw NumericalError("tensor3: dense materialization exceeds size cap");
  dense_.assign(static_cast<std::size_t>(size()), 0.0);
  for (const auto& e : sparse_) dense_at(e.k, e.i, e.j) = e.value;
  sparse_.clear();
}

double Tensor3::frobenius_norm() const {
  double s = 0.0;
  if (!dense_.empty())
    for (double v : dense_) s += v * v;
  else
    for (const auto& e : sparse_) s += e.value * e.value;
  return std::sqrt(s);
}

Eigen::MatrixXd matricize(const Tensor3& t, int mode) {
  const int d3 = t.d3(), d1 = t.d1(), d2 = t.d2();
  Eigen::MatrixXd m;
  switch (mode) {
    case 1: m = Eigen::MatrixXd::Zero(d3, std::int64_t(d1) * d2); break;
    case 2: m = Eigen::MatrixXd::Zero(d1, std::int64_t(d3) * d2); break;
    case 3: m = Eigen::MatrixXd::Zero(d2, std::int64_t(d3) * d1); break;
    default: throw ArgumentError("matricize: mode must be 1, 2 or 3");
  }
  auto place = [&](int k, int i, int j, double v) {
    switch (mode) {
      case 1: m(k, i + std::int64_t(j) * d1) = v; break;
      case 2: m(i, k + std::int64_t(j) * d3) = v; break;
      default: m(j, k + std::int64_t(i) * d3) = v; break;
    }
  };
  if (t.is_sparse()) {
    for (const auto& e : t.sparse_entries()) place(e.k, e.i, e.j, e.value);
  } else {
    for (int k = 0; k < d3; ++k)
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j) place(k, i, j, t.at(k, i, j));
  }
  return m;
}

double singular_tail(const Tensor3& t, int truncation_rank) {
  if (truncation_rank < 0) throw ArgumentError("singular_tail: rank must be non-negative");
  double tail = 0.0;
  for (int mode = 1; mode <= 3; ++mode) {
    Eigen::MatrixXd m = matricize(t, mode);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& sigma = svd.singularValues();
    for (int k = truncation_rank; k < sigma.size(); ++k) tail += sigma(k) * sigma(k);
  }
  return std::sqrt(tail);
}

}  // namespace cgcp::tensor3
