#include "core/rotation.hpp"

#include <cmath>

#include "core/common.hpp"

namespace cgcp::so3 {

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 1e-300)) throw ArgumentError("rotation: quaternion norm too small");
  return Rotation({w / n, x / n, y / n, z / n});
}

Rotation Rotation::axis_angle(const Eigen::Vector3d& axis, double angle) {
  double n = axis.norm();
  if (!(n > 0)) throw ArgumentError("rotation: zero axis");
  double s = std::sin(angle / 2) / n;
  return Rotation({std::cos(angle / 2), s * axis.x(), s * axis.y(), s * axis.z()});
}

Rotation Rotation::operator*(const Rotation& rhs) const {
  const auto& a = q_;
  const auto& b = rhs.q_;
  return Rotation({a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                   a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                   a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                   a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]});
}

Eigen::Matrix3d Rotation::matrix() const {
  const double w = q_[0], x = q_[1], y = q_[2], z = q_[3];
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return m;
}

Rotation sample_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  while (true) {
    double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
    double n2 = w * w + x * x + y * y + z * z;
    if (n2 > 1e-24) {
      double inv = 1.0 / std::sqrt(n2);
      return Rotation::from_quaternion(w * inv, x * inv, y * inv, z * inv);
    }
  }
}

}  // namespace cgcp::so3
