#include "core/cp_als.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "core/common.hpp"

namespace cgcp::tensor3 {

namespace {

constexpr double kRidge = 1e-12;

// Khatri-Rao product with rows indexed (fast + slow * fast_rows):
// out[(f + s*fast_rows), r] = slow(s, r) * fast(f, r).
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& slow, const Eigen::MatrixXd& fast) {
  Eigen::MatrixXd out(slow.rows() * fast.rows(), slow.cols());
  for (Eigen::Index r = 0; r < slow.cols(); ++r)
    for (Eigen::Index s = 0; s < slow.rows(); ++s)
      out.col(r).segment(s * fast.rows(), fast.rows()) = slow(s, r) * fast.col(r);
  return out;
}

struct AlsRun {
  Eigen::MatrixXd A, B, C;
  double fit = std::numeric_limits<double>::infinity();
  int sweeps = 0;
  std::vector<double> history;
};

AlsRun run_als(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2, const Eigen::MatrixXd& x3,
               double norm_x, int rank, const CpOptions& opts, Eigen::MatrixXd a,
               Eigen::MatrixXd b, Eigen::MatrixXd c) {
  AlsRun run;
  const Eigen::MatrixXd ridge = kRidge * Eigen::MatrixXd::Identity(rank, rank);
  double prev_fit = std::numeric_limits<double>::infinity();

  auto solve_mode = [&](const Eigen::MatrixXd& unfolding, const Eigen::MatrixXd& slow,
                        const Eigen::MatrixXd& fast) -> Eigen::MatrixXd {
    Eigen::MatrixXd gram =
        ((slow.transpose() * slow).cwiseProduct(fast.transpose() * fast) + ridge).eval();
    Eigen::MatrixXd mttkrp = unfolding * khatri_rao(slow, fast);
    return gram.ldlt().solve(mttkrp.transpose()).transpose();
  };

  for (int sweep = 1; sweep <= opts.max_iters; ++sweep) {
    a = solve_mode(x1, c, b);  // X1 columns: i fast, j slow
    b = solve_mode(x2, c, a);  // X2 columns: k fast, j slow
    c = solve_mode(x3, b, a);  // X3 columns: k fast, i slow

    // fit via ||X - X_hat||^2 = ||X||^2 - 2<X, X_hat> + ||X_hat||^2, reusing
    // the mode-3 MTTKRP implicit in the last update.
    Eigen::MatrixXd gram3 = (a.transpose() * a).cwiseProduct(b.transpose() * b);
    double inner = (x3 * khatri_rao(b, a)).cwiseProduct(c).sum();
    double model2 = gram3.cwiseProduct(c.transpose() * c).sum();
    double resid2 = std::max(0.0, norm_x * norm_x - 2 * inner + model2);
    double fit = norm_x > 0 ? std::sqrt(resid2) / norm_x : 0.0;
    if (!std::isfinite(fit))
      throw NumericalError("cp_als: non-finite fit encountered", sweep);

    // absorb column scales into A
    for (int r = 0; r < rank; ++r) {
      double nb = b.col(r).norm(), nc = c.col(r).norm();
      if (nb > 0) { b.col(r) /= nb; a.col(r) *= nb; }
      if (nc > 0) { c.col(r) /= nc; a.col(r) *= nc; }
    }

    run.history.push_back(fit);
    run.sweeps = sweep;
    if (fit < 1e-14 || (sweep > 1 && prev_fit - fit < opts.tol)) {
      prev_fit = fit;
      break;
    }
    prev_fit = fit;
  }
  run.fit = run.history.empty() ? 0.0 : run.history.back();
  run.A = std::move(a);
  run.B = std::move(b);
  run.C = std::move(c);
  return run;
}

CPFactors fit_impl(const Tensor3& t, int rank, const CpOptions& opts, const CPFactors* warm) {
  const int d3 = t.d3(), d1 = t.d1(), d2 = t.d2();
  if (rank < 1) throw ArgumentError("cp_als: rank must be >= 1");
  if (rank > generic_rank_bound(d3, d1, d2))
    throw ArgumentError("cp_als: rank exceeds the generic bound min{d1*d2, d1*d3, d2*d3}");
  if (opts.tol <= 0) throw ArgumentError("cp_als: tol must be positive");
  if (opts.max_iters < 1) throw ArgumentError("cp_als: max_iters must be >= 1");
  if (opts.restarts < 1 && warm == nullptr)
    throw ArgumentError("cp_als: restarts must be >= 1");

  Tensor3 dense = t;
  dense.ensure_dense();
  const Eigen::MatrixXd x1 = matricize(dense, 1);
  const Eigen::MatrixXd x2 = matricize(dense, 2);
  const Eigen::MatrixXd x3 = matricize(dense, 3);
  const double norm_x = dense.frobenius_norm();

  AlsRun best;
  auto consider = [&](AlsRun&& run) {
    if (run.fit < best.fit) best = std::move(run);
  };

  if (warm != nullptr) {
    if (warm->A.rows() != d3 || warm->B.rows() != d1 || warm->C.rows() != d2)
      throw ArgumentError("cp_als: warm-start dimensions do not match tensor");
    if (warm->rank > rank) throw ArgumentError("cp_als: warm-start rank exceeds target rank");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d3, rank);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d1, rank);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d2, rank);
    a.leftCols(warm->rank) = warm->A;
    b.leftCols(warm->rank) = warm->B;
    c.leftCols(warm->rank) = warm->C;
    consider(run_als(x1, x2, x3, norm_x, rank, opts, std::move(a), std::move(b), std::move(c)));
  }

  for (int restart = 0; restart < opts.restarts; ++restart) {
    auto rng = seeded_rng(opts.seed, {static_cast<std::uint64_t>(restart)});
    std::normal_distribution<double> normal;
    auto gaussian = [&](int rows) {
      Eigen::MatrixXd m(rows, rank);
      for (int col = 0; col < rank; ++col)
        for (int row = 0; row < rows; ++row) m(row, col) = normal(rng);
      return m;
    };
    Eigen::MatrixXd a = gaussian(d3), b = gaussian(d1), c = gaussian(d2);
    consider(run_als(x1, x2, x3, norm_x, rank, opts, std::move(a), std::move(b), std::move(c)));
    if (best.fit <= 1e-12) break;  // exact fit reached, further restarts cannot improve
  }

  CPFactors out;
  out.A = std::move(best.A);
  out.B = std::move(best.B);
  out.C = std::move(best.C);
  out.rank = rank;
  out.fit = best.fit;
  out.iterations = best.sweeps;
  out.seed = opts.seed;
  out.fit_history = std::move(best.history);
  return out;
}

}  // namespace

std::int64_t generic_rank_bound(int d3, int d1, int d2) {
  return std::min({std::int64_t(d1) * d2, std::int64_t(d1) * d3, std::int64_t(d2) * d3});
}

CPFactors cp_als(const Tensor3& t, int rank, const CpOptions& opts) {
  return fit_impl(t, rank, opts, nullptr);
}

CPFactors cp_als_warm(const Tensor3& t, int rank, const CpOptions& opts, const CPFactors& warm) {
  return fit_impl(t, rank, opts, &warm);
}

Tensor3 reconstruct(const CPFactors& f) {
  const int d3 = static_cast<int>(f.A.rows());
  const int d1 = static_cast<int>(f.B.rows());
  const int d2 = static_cast<int>(f.C.rows());
  Tensor3 out(d3, d1, d2);
  for (Eigen::Index r = 0; r < f.A.cols(); ++r)
    for (int j = 0; j < d2; ++j)
      for (int i = 0; i < d1; ++i) {
        const double bc = f.B(i, r) * f.C(j, r);
        for (int k = 0; k < d3; ++k) out.dense_at(k, i, j) += f.A(k, r) * bc;
      }
  return out;
}

double recompute_fit(const Tensor3& t, const CPFactors& f) {
  Tensor3 dense = t;
  dense.ensure_dense();
  const Tensor3 hat = reconstruct(f);
  if (hat.d3() != dense.d3() || hat.d1() != dense.d1() || hat.d2() != dense.d2())
    throw ArgumentError("recompute_fit: factor dimensions do not match tensor");
  double num = 0.0;
  const auto& a = dense.dense_values();
  const auto& b = hat.dense_values();
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    const double d = a[idx] - b[idx];
    num += d * d;
  }
  const double den = dense.frobenius_norm();
  return den > 0 ? std::sqrt(num) / den : std::sqrt(num);
}

namespace {

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
}

}  // namespace

void save_cpf(const CPFactors& f, std::ostream& out) {
  nlohmann::json header = {
      {"format", "cgcp-cpf"},
      {"format_version", 1},
      {"dims", {f.A.rows(), f.B.rows(), f.C.rows()}},
      {"rank", f.rank},
      {"fit", f.fit},
      {"iterations", f.iterations},
      {"seed", f.seed},
      {"convention", "real-so3-v1"},
  };
  out << header.dump() << '\n';
  write_matrix(out, f.A);
  write_matrix(out, f.B);
  write_matrix(out, f.C);
  if (!out) throw NumericalError("cpf: write failed");
}

void save_cpf_file(const CPFactors& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cpf: cannot open '" + path + "' for writing");
  save_cpf(f, out);
}

CPFactors load_cpf(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("cpf: missing header");
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "cgcp-cpf")
    throw ArgumentError("cpf: not a cgcp-cpf file");
  if (header.value("format_version", 0) != 1)
    throw ArgumentError("cpf: unsupported format_version");
  const auto dims = header.at("dims");
  CPFactors f;
  f.rank = header.at("rank").get<int>();
  f.fit = header.at("fit").get<double>();
  f.iterations = header.value("iterations", 0);
  f.seed = header.value("seed", std::uint64_t(0));
  f.A.resize(dims.at(0).get<int>(), f.rank);
  f.B.resize(dims.at(1).get<int>(), f.rank);
  f.C.resize(dims.at(2).get<int>(), f.rank);
  read_matrix(in, f.A);
  read_matrix(in, f.B);
  read_matrix(in, f.C);
  if (!in) throw ArgumentError("cpf: truncated file");
  return f;
}

CPFactors load_cpf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cpf: cannot open '" + path + "'");
  return load_cpf(in);
}

}  // namespace cgcp::tensor3
