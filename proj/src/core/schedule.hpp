#pragma once

#include <string>

namespace cgcp::analysis {

// Rank schedules R(L): quartic (L+1)^4, log2 16*log2(L+1)^2, linear7 7L,
// quadratic7 7L^2, or custom scale*L^power. Values are rounded to the nearest
// integer and floored at 1; callers clamp to the generic rank bound.
class RankSchedule {
 public:
  enum class Kind { kQuartic, kLog2, kLinear7, kQuadratic7, kCustom };

  static RankSchedule quartic() { return RankSchedule(Kind::kQuartic); }
  static RankSchedule log2() { return RankSchedule(Kind::kLog2); }
  static RankSchedule linear7() { return RankSchedule(Kind::kLinear7); }
  static RankSchedule quadratic7() { return RankSchedule(Kind::kQuadratic7); }
  static RankSchedule custom(double scale, double power);

  // Accepts "quartic", "log2", "linear7", "quadratic7", "custom:SCALE:POWER".
  static RankSchedule parse(const std::string& name);

  int rank_for(int max_degree) const;
  std::string name() const;
  Kind kind() const { return kind_; }

 private:
  explicit RankSchedule(Kind kind, double scale = 0, double power = 0)
      : kind_(kind), scale_(scale), power_(power) {}
  Kind kind_;
  double scale_, power_;
};

}  // namespace cgcp::analysis
