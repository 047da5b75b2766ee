#include "core/metrics.hpp"

#include <cmath>

#include "core/common.hpp"
#include "core/wigner.hpp"

namespace cgcp::analysis {

namespace {

constexpr double kDegenerateFloor = 1e-14;

Eigen::VectorXd sphere_sample(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    const double n = v.norm();
    if (n > 1e-12) return v * (radius / n);
  }
}

}  // namespace

ApproxError approximation_error(const cgtp::CGTensor& m, const cgtp::CpKernel& kernel,
                                int samples, double radius, std::uint64_t seed) {
  if (samples < 1) throw ArgumentError("approximation_error: samples must be >= 1");
  if (!(radius > 0)) throw ArgumentError("approximation_error: radius must be positive");
  if (kernel.d1() != m.dim() || kernel.d2() != m.dim() || kernel.d3() != m.dim())
    throw ArgumentError("approximation_error: kernel dims do not match tensor");
  auto rng = seeded_rng(seed, {0x617070726f78ull});
  ApproxError result;
  result.samples = samples;
  double sum = 0.0;
  int used = 0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = sphere_sample(rng, m.dim(), radius);
    const Eigen::VectorXd y = sphere_sample(rng, m.dim(), radius);
    const Eigen::VectorXd exact = cgtp::exact_tp(m, x, y);
    const double denom = exact.norm();
    if (denom < kDegenerateFloor) {
      ++result.skipped;
      continue;
    }
    sum += (exact - kernel.apply(x, y)).norm() / denom;
    ++used;
  }
  if (used == 0) throw NumericalError("approximation_error: all samples degenerate");
  result.mean = sum / used;
  return result;
}

namespace {

template <typename ApplyFn>
EquivError equivariance_impl(int dim, int max_degree, int rotations, int samples_per_rotation,
                             double radius, std::uint64_t seed, ApplyFn&& apply) {
  if (rotations < 1) throw ArgumentError("equivariance_error: rotations must be >= 1");
  if (samples_per_rotation < 1)
    throw ArgumentError("equivariance_error: samples_per_rotation must be >= 1");
  const auto spec = so3::IrrepsSpec::uniform(1, max_degree);
  auto rng = seeded_rng(seed, {0x6571756976ull});
  EquivError result;
  result.rotations = rotations;
  result.samples_per_rotation = samples_per_rotation;
  double sum = 0.0;
  for (int r = 0; r < rotations; ++r) {
    const so3::Rotation rot = so3::sample_rotation(rng);
    const Eigen::MatrixXd d = so3::wigner_block(spec, rot);
    for (int s = 0; s < samples_per_rotation; ++s) {
      const Eigen::VectorXd x = sphere_sample(rng, dim, radius);
      const Eigen::VectorXd y = sphere_sample(rng, dim, radius);
      const double eps = (apply(d * x, d * y) - d * apply(x, y)).norm();
      sum += eps;
      result.max = std::max(result.max, eps);
    }
  }
  result.mean = sum / (double(rotations) * samples_per_rotation);
  return result;
}

}  // namespace

EquivError equivariance_error(const cgtp::CpKernel& kernel, int max_degree, int rotations,
                              int samples_per_rotation, double radius, std::uint64_t seed) {
  const int dim = (max_degree + 1) * (max_degree + 1);
  if (kernel.d1() != dim || kernel.d2() != dim || kernel.d3() != dim)
    throw ArgumentError("equivariance_error: kernel dims do not match max_degree");
  return equivariance_impl(dim, max_degree, rotations, samples_per_rotation, radius, seed,
                           [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                             return kernel.apply(x, y);
                           });
}

EquivError equivariance_error_exact(const cgtp::CGTensor& m, int rotations,
                                    int samples_per_rotation, double radius, std::uint64_t seed) {
  return equivariance_impl(m.dim(), m.max_degree(), rotations, samples_per_rotation, radius,
                           seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                             return cgtp::exact_tp(m, x, y);
                           });
}

int tail_truncation_rank(int rank) {
  if (rank < 1) throw ArgumentError("tail bound: rank must be >= 1");
  return static_cast<int>(std::ceil(std::cbrt(static_cast<double>(rank)) - 1e-12));
}

double equivariance_tail_bound(const cgtp::CGTensor& m, int rank, double radius) {
  const tensor3::Tensor3 t = m.to_tensor();
  return 2.0 * radius * radius * tensor3::singular_tail(t, tail_truncation_rank(rank));
}

double proof_step_bound(const cgtp::CGTensor& m, const tensor3::CPFactors& f, double radius) {
  const double residual = tensor3::recompute_fit(m.to_tensor(), f) * m.frobenius_norm();
  return 2.0 * radius * radius * residual;
}

}  // namespace cgcp::analysis
