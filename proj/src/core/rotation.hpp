#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>

namespace cgcp::so3 {

// SO(3) element stored as a unit quaternion (w, x, y, z).
class Rotation {
 public:
  Rotation() : q_{1.0, 0.0, 0.0, 0.0} {}

  // Normalizes the given quaternion; throws ArgumentError on (near-)zero input.
  static Rotation from_quaternion(double w, double x, double y, double z);
  static Rotation axis_angle(const Eigen::Vector3d& axis, double angle);
  static Rotation about_z(double angle) { return axis_angle({0, 0, 1}, angle); }

  // Group composition: (a * b) acts as "apply b, then a".
  Rotation operator*(const Rotation& rhs) const;
  Rotation inverse() const { return Rotation({q_[0], -q_[1], -q_[2], -q_[3]}); }

  const std::array<double, 4>& quaternion() const { return q_; }
  Eigen::Matrix3d matrix() const;

 private:
  explicit Rotation(std::array<double, 4> q) : q_(q) {}
  std::array<double, 4> q_;
};

// Haar-uniform rotation: four independent standard normals, normalized.
// Redraws on the probability-zero all-zero sample.
Rotation sample_rotation(std::mt19937_64& rng);

}  // namespace cgcp::so3
