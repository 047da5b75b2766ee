#include "core/wigner.hpp"

#include <mutex>
#include <vector>

#include "core/cg.hpp"
#include "core/common.hpp"

namespace cgcp::so3 {

namespace {

// Memoized coupling entries for the recursion path (l-1, 1, l). Immutable
// after construction; the cache only avoids recomputing Racah sums.
const std::vector<CgEntry>& recursion_entries(int l) {
  static std::mutex mutex;
  static std::vector<std::vector<CgEntry>> cache;
  std::scoped_lock lock(mutex);
  if (static_cast<int>(cache.size()) < l + 1) cache.resize(l + 1);
  if (cache[l].empty()) cache[l] = cg_path_entries(l - 1, 1, l);
  return cache[l];
}

}  // namespace

Eigen::MatrixXd wigner_d(int l, const Rotation& r) {
  if (l < 0) throw ArgumentError("wigner_d: degree must be non-negative");
  if (l == 0) return Eigen::MatrixXd::Identity(1, 1);

  const Eigen::Matrix3d m = r.matrix();
  // (y, z, x) component ordering for m = -1, 0, +1.
  static constexpr int cart[3] = {1, 2, 0};
  Eigen::MatrixXd d1(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) d1(a, b) = m(cart[a], cart[b]);
  if (l == 1) return d1;

  Eigen::MatrixXd prev = d1;
  for (int deg = 2; deg <= l; ++deg) {
    const auto& cg = recursion_entries(deg);
    const int size = 2 * deg + 1;
    const int prev_size = 2 * deg - 1;
    // W[c, (a', b')] = sum over entries (c, a, b, v): v * prev[a, a'] * d1[b, b']
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(size, prev_size * 3);
    for (const auto& e : cg) {
      const int c = e.m3 + deg, a = e.m1 + deg - 1, b = e.m2 + 1;
      for (int ap = 0; ap < prev_size; ++ap) {
        const double va = e.value * prev(a, ap);
        for (int bp = 0; bp < 3; ++bp) w(c, ap * 3 + bp) += va * d1(b, bp);
      }
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(size, size);
    for (const auto& e : cg) {
      const int cp = e.m3 + deg, ap = e.m1 + deg - 1, bp = e.m2 + 1;
      next.col(cp) += e.value * w.col(ap * 3 + bp);
    }
    prev = std::move(next);
  }
  return prev;
}

Eigen::MatrixXd wigner_block(const IrrepsSpec& spec, const Rotation& r) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(spec.total_dim(), spec.total_dim());
  int offset = 0;
  for (const auto& block : spec.blocks()) {
    const Eigen::MatrixXd d = wigner_d(block.degree, r);
    const int size = 2 * block.degree + 1;
    for (int c = 0; c < block.multiplicity; ++c) {
      out.block(offset, offset, size, size) = d;
      offset += size;
    }
  }
  return out;
}

}  // namespace cgcp::so3
