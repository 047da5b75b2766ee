#include "core/irreps.hpp"

#include <charconv>

#include "core/common.hpp"

namespace cgcp::so3 {

IrrepsSpec::IrrepsSpec(std::vector<IrrepBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ArgumentError("irreps: at least one block required");
  int prev_degree = -1;
  for (const auto& b : blocks_) {
    if (b.multiplicity <= 0) throw ArgumentError("irreps: multiplicity must be positive");
    if (b.degree < 0) throw ArgumentError("irreps: degree must be non-negative");
    if (b.degree <= prev_degree)
      throw ArgumentError("irreps: degrees must be strictly increasing");
    prev_degree = b.degree;
    offsets_.push_back(total_dim_);
    total_dim_ += b.multiplicity * (2 * b.degree + 1);
  }
}

IrrepsSpec IrrepsSpec::uniform(int multiplicity, int max_degree) {
  if (max_degree < 0) throw ArgumentError("irreps: max_degree must be non-negative");
  std::vector<IrrepBlock> blocks;
  blocks.reserve(max_degree + 1);
  for (int l = 0; l <= max_degree; ++l) blocks.push_back({multiplicity, l});
  return IrrepsSpec(std::move(blocks));
}

namespace {

int parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ArgumentError("irreps: malformed integer '" + std::string(s) + "'");
  return value;
}

}  // namespace

IrrepsSpec IrrepsSpec::parse(std::string_view text) {
  std::vector<IrrepBlock> blocks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t plus = text.find('+', pos);
    std::string_view term =
        text.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos);
    std::size_t x = term.find('x');
    if (x == std::string_view::npos)
      throw ArgumentError("irreps: expected 'MULTxDEG' term in '" + std::string(text) + "'");
    blocks.push_back({parse_int(term.substr(0, x)), parse_int(term.substr(x + 1))});
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  return IrrepsSpec(std::move(blocks));
}

std::string IrrepsSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(blocks_[i].multiplicity);
    out += 'x';
    out += std::to_string(blocks_[i].degree);
  }
  return out;
}

}  // namespace cgcp::so3
