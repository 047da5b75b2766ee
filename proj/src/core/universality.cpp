#include "core/universality.hpp"

#include <map>
#include <vector>

#include "core/cg.hpp"
#include "core/common.hpp"

namespace cgcp::analysis {

namespace {

// CG block entries of one path grouped into (m1, m2) fibers.
struct Fiber {
  int m1, m2;
  std::vector<std::pair<int, double>> out_components;  // (m3, value)
};

std::vector<Fiber> path_fibers(int l1, int l2, int l3) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> grouped;
  for (const so3::CgEntry& e : so3::cg_path_entries(l1, l2, l3))
    grouped[{e.m1, e.m2}].emplace_back(e.m3, e.value);
  std::vector<Fiber> fibers;
  fibers.reserve(grouped.size());
  for (auto& [key, comps] : grouped) fibers.push_back({key.first, key.second, std::move(comps)});
  return fibers;
}

template <typename Fn>
void for_each_path(const so3::IrrepsSpec& in1, const so3::IrrepsSpec& in2,
                   const so3::IrrepsSpec& out, Fn&& fn) {
  for (std::size_t b1 = 0; b1 < in1.blocks().size(); ++b1)
    for (std::size_t b2 = 0; b2 < in2.blocks().size(); ++b2)
      for (std::size_t b3 = 0; b3 < out.blocks().size(); ++b3) {
        const auto& blk1 = in1.blocks()[b1];
        const auto& blk2 = in2.blocks()[b2];
        const auto& blk3 = out.blocks()[b3];
        if (!so3::selection_rule(blk1.degree, blk2.degree, blk3.degree)) continue;
        fn(blk1, in1.block_offset(b1), blk2, in2.block_offset(b2), blk3, out.block_offset(b3));
      }
}

}  // namespace

std::size_t path_basis_dim(const so3::IrrepsSpec& in1, const so3::IrrepsSpec& in2,
                           const so3::IrrepsSpec& out) {
  std::size_t mu = 0;
  for_each_path(in1, in2, out,
                [&](const so3::IrrepBlock& blk1, int, const so3::IrrepBlock& blk2, int,
                    const so3::IrrepBlock& blk3, int) {
                  mu += std::size_t(blk1.multiplicity) * blk2.multiplicity * blk3.multiplicity;
                });
  return mu;
}

UniversalFactors universality_factorize(const so3::IrrepsSpec& in1, const so3::IrrepsSpec& in2,
                                        const so3::IrrepsSpec& out,
                                        const Eigen::VectorXd& lambda) {
  const std::size_t mu = path_basis_dim(in1, in2, out);
  if (static_cast<std::size_t>(lambda.size()) != mu)
    throw ArgumentError("universality: lambda length must equal the path-basis dimension " +
                        std::to_string(mu));

  // First pass: total column count.
  std::size_t width = 0;
  std::map<std::tuple<int, int, int>, std::vector<Fiber>> fiber_cache;
  for_each_path(in1, in2, out,
                [&](const so3::IrrepBlock& blk1, int, const so3::IrrepBlock& blk2, int,
                    const so3::IrrepBlock& blk3, int) {
                  auto key = std::make_tuple(blk1.degree, blk2.degree, blk3.degree);
                  auto it = fiber_cache.find(key);
                  if (it == fiber_cache.end())
                    it = fiber_cache.emplace(key, path_fibers(blk1.degree, blk2.degree,
                                                              blk3.degree)).first;
                  width += std::size_t(blk1.multiplicity) * blk2.multiplicity *
                           blk3.multiplicity * it->second.size();
                });

  UniversalFactors f;
  f.basis_dim = mu;
  f.a = Eigen::MatrixXd::Zero(out.total_dim(), width);
  f.b = Eigen::MatrixXd::Zero(in1.total_dim(), width);
  f.c = Eigen::MatrixXd::Zero(in2.total_dim(), width);

  std::size_t k = 0;    // basis-element index into lambda
  std::size_t col = 0;  // output column
  for_each_path(in1, in2, out,
                [&](const so3::IrrepBlock& blk1, int off1, const so3::IrrepBlock& blk2, int off2,
                    const so3::IrrepBlock& blk3, int off3) {
                  const auto& fibers =
                      fiber_cache.at({blk1.degree, blk2.degree, blk3.degree});
                  const int n1 = 2 * blk1.degree + 1;
                  const int n2 = 2 * blk2.degree + 1;
                  const int n3 = 2 * blk3.degree + 1;
                  for (int v = 0; v < blk1.multiplicity; ++v)
                    for (int w = 0; w < blk2.multiplicity; ++w)
                      for (int u = 0; u < blk3.multiplicity; ++u) {
                        const double coeff = lambda(static_cast<Eigen::Index>(k++));
                        for (const Fiber& fiber : fibers) {
                          f.b(off1 + v * n1 + blk1.degree + fiber.m1, col) = 1.0;
                          f.c(off2 + w * n2 + blk2.degree + fiber.m2, col) = 1.0;
                          for (const auto& [m3, value] : fiber.out_components)
                            f.a(off3 + u * n3 + blk3.degree + m3, col) = coeff * value;
                          ++col;
                        }
                      }
                });
  return f;
}

}  // namespace cgcp::analysis
