#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cgcp::so3 {

struct IrrepBlock {
  int multiplicity;
  int degree;
};

// Ordered list of (multiplicity, degree) blocks describing a concatenated
// feature field. Degrees are strictly increasing; flattened layout is
// degree-ascending, multiplicity channels outermost within each block and
// components ordered m = -l..l.
class IrrepsSpec {
 public:
  explicit IrrepsSpec(std::vector<IrrepBlock> blocks);

  // Common multiplicity c for every degree 0..max_degree; total_dim = c*(L+1)^2.
  static IrrepsSpec uniform(int multiplicity, int max_degree);

  // Text form "c0x0+c1x1+..." (e.g. "128x0+64x1").
  static IrrepsSpec parse(std::string_view text);
  std::string to_string() const;

  const std::vector<IrrepBlock>& blocks() const { return blocks_; }
  int total_dim() const { return total_dim_; }

  // Flattened offset of the first component of block `index`.
  int block_offset(std::size_t index) const { return offsets_[index]; }

  bool operator==(const IrrepsSpec&) const = default;

 private:
  std::vector<IrrepBlock> blocks_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

}  // namespace cgcp::so3
