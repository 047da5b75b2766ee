#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "core/cg_tensor.hpp"
#include "core/common.hpp"
#include "core/cp_als.hpp"
#include "core/tensor3.hpp"
#include "oracles.hpp"

using namespace cgcp;
using tensor3::Tensor3;

namespace {

Tensor3 random_tensor(int d3, int d1, int d2, std::uint64_t seed) {
  auto rng = seeded_rng(seed);
  std::normal_distribution<double> normal;
  Tensor3 t(d3, d1, d2);
  for (int k = 0; k < d3; ++k)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) t.dense_at(k, i, j) = normal(rng);
  return t;
}

Tensor3 rank1(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  Tensor3 t(int(a.size()), int(b.size()), int(c.size()));
  for (int k = 0; k < a.size(); ++k)
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < c.size(); ++j) t.dense_at(k, i, j) = a(k) * b(i) * c(j);
  return t;
}

}  // namespace

TEST_CASE("tensor3: sparse/dense forms agree, invalid input rejected") {
  auto t = Tensor3::from_sparse(2, 3, 4, {{0, 1, 2, 5.0}, {1, 0, 3, -2.0}});
  CHECK(t.is_sparse());
  CHECK(t.at(0, 1, 2) == 5.0);
  CHECK(t.at(1, 1, 2) == 0.0);
  Tensor3 dense = t;
  dense.ensure_dense();
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) CHECK(dense.at(k, i, j) == t.at(k, i, j));
  CHECK(t.frobenius_norm() == doctest::Approx(dense.frobenius_norm()));

  CHECK_THROWS_AS(Tensor3::from_sparse(2, 2, 2, {{0, 0, 0, 0.0}}), ArgumentError);
  CHECK_THROWS_AS(Tensor3::from_sparse(2, 2, 2, {{0, 0, 0, 1.0}, {0, 0, 0, 2.0}}),
                  ArgumentError);
  CHECK_THROWS_AS(Tensor3::from_sparse(2, 2, 2, {{2, 0, 0, 1.0}}), ArgumentError);
}

TEST_CASE("matricize: 2x2x2 with entries 1..8 against the index-map oracle") {
  Tensor3 t(2, 2, 2);
  // entries numbered in (k, i, j) lexicographic order
  int v = 1;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t.dense_at(k, i, j) = v++;

  // oracle: independent reshaping by explicit column index maps
  Eigen::MatrixXd m1(2, 4), m2(2, 4), m3(2, 4);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double x = t.at(k, i, j);
        m1(k, i + 2 * j) = x;
        m2(i, k + 2 * j) = x;
        m3(j, k + 2 * i) = x;
      }
  CHECK(tensor3::matricize(t, 1) == m1);
  CHECK(tensor3::matricize(t, 2) == m2);
  CHECK(tensor3::matricize(t, 3) == m3);
  CHECK_THROWS_AS(tensor3::matricize(t, 0), ArgumentError);
  CHECK_THROWS_AS(tensor3::matricize(t, 4), ArgumentError);
}

TEST_CASE("matricize: rank-1 tensors unfold to rank-1 matrices") {
  auto rng = seeded_rng(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd a(4), b(5), c(6);
  for (int i = 0; i < 4; ++i) a(i) = normal(rng);
  for (int i = 0; i < 5; ++i) b(i) = normal(rng);
  for (int i = 0; i < 6; ++i) c(i) = normal(rng);
  const Tensor3 t = rank1(a, b, c);
  for (int mode = 1; mode <= 3; ++mode) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(tensor3::matricize(t, mode));
    const auto& sigma = svd.singularValues();
    CHECK(sigma(0) > 1e-8);
    for (int k = 1; k < sigma.size(); ++k) CHECK(sigma(k) < 1e-12 * sigma(0));
  }
}

TEST_CASE("matricize: unfolding norms equal the tensor norm") {
  const Tensor3 t = random_tensor(3, 4, 5, 11);
  for (int mode = 1; mode <= 3; ++mode)
    CHECK(tensor3::matricize(t, mode).norm() == doctest::Approx(t.frobenius_norm()));
}

TEST_CASE("singular_tail: trivial and oracle cases") {
  const Tensor3 t = random_tensor(3, 4, 5, 13);
  CHECK(tensor3::singular_tail(t, 100) == 0.0);
  CHECK(tensor3::singular_tail(t, 0) ==
        doctest::Approx(std::sqrt(3.0) * t.frobenius_norm()).epsilon(1e-12));

  // CG tensor at L = 1, R_T = 2, against a direct dense SVD of each unfolding
  const auto cg = cgtp::CGTensor::build(1);
  Tensor3 m = cg.to_tensor();
  m.ensure_dense();
  double tail2 = 0.0;
  for (int mode = 1; mode <= 3; ++mode) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(tensor3::matricize(m, mode));
    const auto& sigma = svd.singularValues();
    for (int k = 2; k < sigma.size(); ++k) tail2 += sigma(k) * sigma(k);
  }
  CHECK(tensor3::singular_tail(m, 2) == doctest::Approx(std::sqrt(tail2)).epsilon(1e-12));
  CHECK_THROWS_AS(tensor3::singular_tail(m, -1), ArgumentError);
}

TEST_CASE("singular_tail: truncated-SVD consistency per mode") {
  const Tensor3 t = random_tensor(4, 5, 6, 17);
  for (int trunc = 0; trunc <= 4; ++trunc) {
    double total2 = 0.0;
    for (int mode = 1; mode <= 3; ++mode) {
      const Eigen::MatrixXd m = tensor3::matricize(t, mode);
      Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sigma = svd.singularValues();
      Eigen::MatrixXd approx = Eigen::MatrixXd::Zero(m.rows(), m.cols());
      for (int k = 0; k < std::min<int>(trunc, sigma.size()); ++k)
        approx += sigma(k) * svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
      double tail2 = 0.0;
      for (int k = trunc; k < sigma.size(); ++k) tail2 += sigma(k) * sigma(k);
      CHECK((m - approx).norm() == doctest::Approx(std::sqrt(tail2)).epsilon(1e-10));
      total2 += tail2;
      CHECK(tensor3::singular_tail(t, trunc) >= std::sqrt(tail2) - 1e-12);
    }
    CHECK(tensor3::singular_tail(t, trunc) == doctest::Approx(std::sqrt(total2)).epsilon(1e-10));
  }
}

TEST_CASE("cp_als: single-entry tensor fits exactly at rank 1") {
  const auto cg = cgtp::CGTensor::build(0);
  const auto f = tensor3::cp_als(cg.to_tensor(), 1, {.restarts = 2, .seed = 3});
  CHECK(f.fit <= 1e-12);
  CHECK(f.rank == 1);
  Tensor3 hat = tensor3::reconstruct(f);
  CHECK(hat.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cp_als: recovers an exact rank-2 tensor") {
  auto rng = seeded_rng(23);
  std::normal_distribution<double> normal;
  auto unit = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return Eigen::VectorXd(v / v.norm());
  };
  Tensor3 t(5, 6, 7);
  for (int r = 0; r < 2; ++r) {
    const Tensor3 term = rank1(unit(5), unit(6), unit(7));
    for (int k = 0; k < 5; ++k)
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 7; ++j) t.dense_at(k, i, j) += term.at(k, i, j);
  }
  const auto f =
      tensor3::cp_als(t, 2, {.max_iters = 2000, .tol = 1e-13, .restarts = 8, .seed = 5});
  CHECK(f.fit < 1e-8);
  CHECK(tensor3::recompute_fit(t, f) < 1e-8);
}

TEST_CASE("cp_als: CG tensor at L = 1 reaches exact fit at the generic bound") {
  const auto cg = cgtp::CGTensor::build(1);
  CHECK(tensor3::generic_rank_bound(4, 4, 4) == 16);
  const auto f = tensor3::cp_als(cg.to_tensor(), 16, {.restarts = 8, .seed = 7});
  CHECK(f.fit < 1e-6);
}

TEST_CASE("cp_als: fit history is non-increasing within a run") {
  const auto cg = cgtp::CGTensor::build(2);
  const auto f = tensor3::cp_als(cg.to_tensor(), 20,
                                 {.max_iters = 300, .tol = 1e-12, .restarts = 2, .seed = 9});
  REQUIRE(!f.fit_history.empty());
  for (std::size_t s = 1; s < f.fit_history.size(); ++s)
    CHECK(f.fit_history[s] <= f.fit_history[s - 1] + 1e-13);
  CHECK(f.fit == f.fit_history.back());
  CHECK(f.iterations == int(f.fit_history.size()));
}

TEST_CASE("cp_als: argument and numerical error paths") {
  const Tensor3 t = random_tensor(2, 3, 4, 29);
  CHECK_THROWS_AS(tensor3::cp_als(t, 0, {}), ArgumentError);
  CHECK_THROWS_AS(tensor3::cp_als(t, 7, {}), ArgumentError);  // bound = min(12, 8, 6) = 6
  CHECK_THROWS_AS(tensor3::cp_als(t, 2, {.tol = 0.0}), ArgumentError);
}

TEST_CASE("cp_als: warm start never fits worse than the warm factors") {
  const auto cg = cgtp::CGTensor::build(2);
  const auto t = cg.to_tensor();
  const auto small = tensor3::cp_als(t, 10, {.max_iters = 150, .restarts = 2, .seed = 11});
  const auto big = tensor3::cp_als_warm(t, 20, {.max_iters = 150, .restarts = 2, .seed = 11},
                                        small);
  CHECK(big.fit <= small.fit + 1e-13);
}

TEST_CASE("reconstruct: zero-padded columns leave the reconstruction unchanged") {
  const Tensor3 t = random_tensor(3, 3, 3, 31);
  const auto f = tensor3::cp_als(t, 4, {.max_iters = 50, .restarts = 1, .seed = 13});
  tensor3::CPFactors padded = f;
  padded.rank = 6;
  padded.A.conservativeResize(Eigen::NoChange, 6);
  padded.B.conservativeResize(Eigen::NoChange, 6);
  padded.C.conservativeResize(Eigen::NoChange, 6);
  padded.A.rightCols(2).setZero();
  padded.B.rightCols(2).setZero();
  padded.C.rightCols(2).setZero();
  const Tensor3 a = tensor3::reconstruct(f);
  const Tensor3 b = tensor3::reconstruct(padded);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(a.at(k, i, j) == b.at(k, i, j));
}

TEST_CASE("reconstruct: scale and permutation indeterminacy") {
  const Tensor3 t = random_tensor(3, 4, 2, 37);
  const auto f = tensor3::cp_als(t, 3, {.max_iters = 50, .restarts = 1, .seed = 17});

  tensor3::CPFactors scaled = f;
  scaled.A.col(1) *= 4.0;
  scaled.B.col(1) /= 4.0;
  const Tensor3 a = tensor3::reconstruct(f);
  const Tensor3 b = tensor3::reconstruct(scaled);
  double max_diff = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j)
        max_diff = std::max(max_diff, std::abs(a.at(k, i, j) - b.at(k, i, j)));
  CHECK(max_diff < 1e-13);

  tensor3::CPFactors permuted = f;
  const Eigen::Vector3i perm(2, 0, 1);
  for (int c = 0; c < 3; ++c) {
    permuted.A.col(c) = f.A.col(perm(c));
    permuted.B.col(c) = f.B.col(perm(c));
    permuted.C.col(c) = f.C.col(perm(c));
  }
  const Tensor3 p = tensor3::reconstruct(permuted);
  max_diff = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j)
        max_diff = std::max(max_diff, std::abs(a.at(k, i, j) - p.at(k, i, j)));
  CHECK(max_diff < 1e-13);
}

TEST_CASE("cpf: save/load round trip is bit exact") {
  const auto cg = cgtp::CGTensor::build(1);
  const auto f = tensor3::cp_als(cg.to_tensor(), 9, {.max_iters = 60, .restarts = 2, .seed = 19});
  const std::string path = "roundtrip_test.cpf";
  tensor3::save_cpf_file(f, path);
  const auto g = tensor3::load_cpf_file(path);
  CHECK(g.rank == f.rank);
  CHECK(g.fit == f.fit);
  CHECK(g.A == f.A);
  CHECK(g.B == f.B);
  CHECK(g.C == f.C);
  std::remove(path.c_str());
  CHECK_THROWS_AS(tensor3::load_cpf_file("missing_file.cpf"), ArgumentError);
}
