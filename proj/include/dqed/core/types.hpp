#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dqed {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Vec3c = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using MatXc = Eigen::MatrixXcd;
using MatX = Eigen::MatrixXd;
using VecXc = Eigen::VectorXcd;
using VecX = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cd I_unit{0.0, 1.0};

// Sign of the ± branch in curl-form square-root kernels. The upper sign is
// the default everywhere; the lower one exists for gauge experiments.
enum class Branch { upper, lower };

inline double branch_sign(Branch b) { return b == Branch::upper ? 1.0 : -1.0; }

// (k×)·v = k × v
inline Mat3 cross_matrix(const Vec3& k) {
  Mat3 m;
  m << 0.0, -k.z(), k.y(),
       k.z(), 0.0, -k.x(),
       -k.y(), k.x(), 0.0;
  return m;
}

}  // namespace dqed
