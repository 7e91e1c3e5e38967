#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed {
namespace {

using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

enum class Pol { s, p };

cd decay(double q, cd eps, cd w) {
  cd k = std::sqrt(q * q - eps * w * w);
  return k.real() < 0.0 ? -k : k;
}

// Columns are the growing and decaying modes e^{±κz}. State vectors:
// s: (E_y, ∂zE_y); p: (E_x, ∂zE_x − iqE_z).
Mat2c modes(Pol pol, cd eps, double q, cd w) {
  const cd k = decay(q, eps, w);
  const cd h = pol == Pol::s ? k : -(w * w * eps / k);
  Mat2c m;
  m << 1.0, 1.0, h, -h;
  return m;
}

Mat2c propagate(Pol pol, cd eps, double q, cd w, double len) {
  const Mat2c m = modes(pol, eps, q, w);
  const cd k = decay(q, eps, w);
  return m * Vec2c(std::exp(k * len), std::exp(-k * len)).asDiagonal() * m.inverse();
}

// Frame-component field at z for a dipole with frame components pf.
Vec3c layered_field(const std::array<cd, 3>& eps, double d, double q, cd w, double zp, const Vec3c& pf,
                    double z) {
  const double f2 = 4.0 * pi * pi;
  Vec3c out = Vec3c::Zero();
  for (Pol pol : {Pol::s, Pol::p}) {
    Vec2c jump;
    if (pol == Pol::s) jump << 0.0, -pf(1) / f2;
    else jump << -I_unit * q * pf(2) / (w * w * eps[1] * f2), -pf(0) / f2;

    const Mat2c m0 = modes(pol, eps[0], q, w), m2 = modes(pol, eps[2], q, w);
    const Mat2c p1 = propagate(pol, eps[1], q, w, zp), p2 = propagate(pol, eps[1], q, w, d - zp);
    // Region 0 keeps only e^{+κz}, region 2 only e^{−κ(z−d)}.
    Mat2c lhs;
    lhs.col(0) = p2 * p1 * m0.col(0);
    lhs.col(1) = -m2.col(1);
    const Vec2c coef = lhs.fullPivLu().solve(-p2 * jump);
    const Vec2c psi0 = m0.col(0) * coef(0);

    Vec2c psi = propagate(pol, eps[1], q, w, z) * psi0;
    if (z > zp) psi += propagate(pol, eps[1], q, w, z - zp) * jump;
    if (pol == Pol::s) {
      out(1) += psi(0);
    } else {
      const Mat2c m1 = modes(pol, eps[1], q, w);
      const Vec2c ab = m1.fullPivLu().solve(psi);
      out(0) += psi(0);
      out(2) += -(I_unit * q / decay(q, eps[1], w)) * (ab(0) - ab(1));
    }
  }
  return out;
}

}  // namespace

Mat3c transfer_matrix_green(const std::array<cd, 3>& eps, double d, const Vec2& q_green, cd w, double zp,
                            double z) {
  if (!(d > 0.0)) throw ParameterError("transfer_matrix_green: d must be > 0");
  if (!(zp > 0.0 && zp < d) || !(z > 0.0 && z < d) || z == zp)
    throw DomainError("transfer_matrix_green: heights must be distinct and inside (0, d)");
  const Vec2 qv = -q_green;
  const Mat3 r = lateral_frame(qv);
  const Mat3c rc = r.cast<cd>();
  Mat3c g;
  for (int i = 0; i < 3; ++i) {
    const Vec3c pf = rc.transpose() * Vec3c::Unit(i);
    g.row(i) = (rc * layered_field(eps, d, qv.norm(), w, zp, pf, z)).transpose();
  }
  return g;
}

}  // namespace dqed
