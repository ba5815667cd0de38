#pragma once

#include <random>

#include "foldylax/types.hpp"

namespace testing_support {

using foldylax::CVec3;
using foldylax::Vec3;

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

// Unit vector orthogonal to `t`.
inline Vec3 orthogonal_unit(const Vec3& t, std::mt19937_64& rng) {
  Vec3 v = random_unit(rng);
  v -= v.dot(t) * t;
  return v.normalized();
}

template <typename A, typename B>
double rel_err(const A& got, const B& want) {
  return (got - want).norm() / want.norm();
}

// Rotation about a unit axis.
inline foldylax::Mat3 rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace testing_support
