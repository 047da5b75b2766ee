#include "core/schedule.hpp"

#include <cmath>

#include "core/common.hpp"

namespace cgcp::analysis {

RankSchedule RankSchedule::custom(double scale, double power) {
  if (!(scale > 0)) throw ArgumentError("schedule: custom scale must be positive");
  return RankSchedule(Kind::kCustom, scale, power);
}

RankSchedule RankSchedule::parse(const std::string& name) {
  if (name == "quartic") return quartic();
  if (name == "log2") return log2();
  if (name == "linear7") return linear7();
  if (name == "quadratic7") return quadratic7();
  if (name.rfind("custom:", 0) == 0) {
    const auto rest = name.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw ArgumentError("schedule: custom needs 'custom:SCALE:POWER'");
    try {
      return custom(std::stod(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ArgumentError("schedule: malformed custom parameters in '" + name + "'");
    }
  }
  throw ArgumentError("schedule: unknown schedule '" + name + "'");
}

int RankSchedule::rank_for(int max_degree) const {
  if (max_degree < 0) throw ArgumentError("schedule: max_degree must be non-negative");
  const double l = max_degree;
  double r = 1.0;
  switch (kind_) {
    case Kind::kQuartic: r = std::pow(l + 1, 4); break;
    case Kind::kLog2: r = 16.0 * std::pow(std::log2(l + 1), 2); break;
    case Kind::kLinear7: r = 7.0 * l; break;
    case Kind::kQuadratic7: r = 7.0 * l * l; break;
    case Kind::kCustom: r = scale_ * std::pow(l, power_); break;
  }
  return std::max(1, static_cast<int>(std::lround(r)));
}

std::string RankSchedule::name() const {
  switch (kind_) {
    case Kind::kQuartic: return "quartic";
    case Kind::kLog2: return "log2";
    case Kind::kLinear7: return "linear7";
    case Kind::kQuadratic7: return "quadratic7";
    case Kind::kCustom:
      return "custom:" + std::to_string(scale_) + ":" + std::to_string(power_);
  }
  return "?";
}

}  // namespace cgcp::analysis
