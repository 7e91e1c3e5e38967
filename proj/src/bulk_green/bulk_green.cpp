#include <cmath>

#include "dqed/bulk_green.hpp"
#include "dqed/core/errors.hpp"

namespace dqed {
namespace {

void require_nonzero(cd d, double scale, const char* which) {
  if (std::abs(d) <= 1e-13 * scale)
    throw PoleError(std::string("bulk Green tensor: ") + which + " vanishes (on-shell)", d);
}

// Orthonormal pair spanning the plane transverse to k.
Eigen::Matrix<double, 3, 2> transverse_basis(const Vec3& khat) {
  const Vec3 helper = std::abs(khat.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 t1 = khat.cross(helper).normalized();
  const Vec3 t2 = khat.cross(t1);
  Eigen::Matrix<double, 3, 2> t;
  t << t1, t2;
  return t;
}

}  // namespace

DispersionPair dispersion_k2(const HomogeneousKSpace& m, cd k2, cd w) {
  auto [qp, qt] = m.q(k2, w);
  return {k2 - w * w - I_unit * w * qt, w * w + I_unit * w * qp};
}

DispersionPair dispersion(const HomogeneousKSpace& m, double k, cd w) {
  return dispersion_k2(m, cd(k * k), w);
}

Mat3c bulk_green_k(const HomogeneousKSpace& m, const Vec3& k, cd w) {
  const double k2 = k.squaredNorm();
  const DispersionPair d = dispersion(m, k.norm(), w);
  const double scale = std::max({k2, std::norm(w), 1e-300});
  require_nonzero(d.perp, scale, "D_perp");
  if (k2 == 0.0) return Mat3c::Identity() / d.perp;
  require_nonzero(d.par, scale, "D_par");
  const Mat3 kk = k * k.transpose() / k2;
  return (Mat3::Identity() - kk).cast<cd>() / d.perp - kk.cast<cd>() / d.par;
}

Mat3c bulk_green_k(cd q_par, const Mat3c& q_perp, const Vec3& k, cd w) {
  const double k2 = k.squaredNorm();
  const double scale = std::max({k2, std::norm(w), 1e-300});
  if (k2 == 0.0) {
    const Mat3c h = -w * w * Mat3c::Identity() - I_unit * w * q_perp;
    Eigen::FullPivLU<Mat3c> lu(h);
    if (!lu.isInvertible()) throw PoleError("bulk Green tensor: singular at k = 0", h.determinant());
    return lu.inverse();
  }
  const Vec3 khat = k / std::sqrt(k2);
  const auto t = transverse_basis(khat);
  const Eigen::Matrix<cd, 3, 2> tc = t.cast<cd>();
  const Mat3c dperp = (k2 - w * w) * Mat3c::Identity() - I_unit * w * q_perp;
  const Eigen::Matrix2cd m2 = tc.transpose() * dperp * tc;
  const cd det = m2.determinant();
  require_nonzero(det, scale * scale, "det D_perp");
  const cd dpar = w * w + I_unit * w * q_par;
  require_nonzero(dpar, scale, "D_par");
  const Mat3 kk = khat * khat.transpose();
  return tc * m2.inverse() * tc.transpose() - kk.cast<cd>() / dpar;
}

Mat3c bulk_gamma_k(const HomogeneousKSpace& m, const Vec3& k, cd w) {
  return cross_matrix(k).cast<cd>() * bulk_green_k(m, k, w) / w;
}

double bulk_green_residual(const Mat3c& g, const Mat3c& q, const Vec3& k, cd w) {
  const Mat3 kk = k * k.transpose();
  const Mat3c h = (k.squaredNorm() * Mat3::Identity() - kk).cast<cd>() - w * w * Mat3c::Identity() -
                  I_unit * w * q;
  return (h * g - Mat3c::Identity()).norm() / std::sqrt(3.0);
}

}  // namespace dqed
