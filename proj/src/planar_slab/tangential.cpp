#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed {
namespace {

// Blocks this close to singular are solved by the dense fallback instead.
constexpr double kWellConditioned = 1e-8;

double det_ratio(const TangentialBlock& a) {
  const double n2 = a.squaredNorm();
  return n2 == 0.0 ? 0.0 : std::abs(a.determinant()) / n2;
}

Eigen::Matrix4cd assemble(const TangentialBlock& a, const TangentialBlock& b, const TangentialBlock& c,
                          const TangentialBlock& d) {
  Eigen::Matrix4cd m;
  m << a, b, c, d;
  return m;
}

}  // namespace

TangentialBasis tangential_basis(const Vec2& q) {
  const double qn = q.norm();
  const Vec3 qh = qn > 0.0 ? Vec3(q.x() / qn, q.y() / qn, 0.0) : Vec3::UnitX();
  TangentialBasis b;
  b.col(0) = qh.cross(Vec3::UnitZ());
  b.col(1) = qh;
  return b;
}

TangentialBlock to_tangential(const Mat3c& x, const TangentialBasis& b) {
  return b.transpose().cast<cd>() * x * b.cast<cd>();
}

Mat3c from_tangential(const TangentialBlock& a, const TangentialBasis& b) {
  return b.cast<cd>() * a * b.transpose().cast<cd>();
}

TangentialBlock sharp_inverse(const TangentialBlock& a, double q, cd w) {
  const cd det = a.determinant();
  if (!(std::abs(det) > 1e-14 * a.squaredNorm()))
    throw GuidedWaveError("tangential block is singular (guided-wave resonance)", q, w);
  TangentialBlock inv;
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return inv / det;
}

Eigen::Matrix4cd block_inverse_e3(const TangentialBlock& a, const TangentialBlock& b,
                                  const TangentialBlock& c, const TangentialBlock& d) {
  const TangentialBlock as = sharp_inverse(a), bs = sharp_inverse(b);
  const TangentialBlock cs = sharp_inverse(c), ds = sharp_inverse(d);
  const TangentialBlock s1 = sharp_inverse(a * cs - b * ds);
  const TangentialBlock s2 = sharp_inverse(c * as - d * bs);
  Eigen::Matrix4cd inv;
  inv << cs * s1, as * s2,
         -ds * s1, -bs * s2;
  return inv;
}

double block_identity_residual(const TangentialBlock& a, const TangentialBlock& b, const TangentialBlock& c,
                               const TangentialBlock& d) {
  const Eigen::Matrix4cd p = assemble(a, b, c, d) * block_inverse_e3(a, b, c, d);
  return (p - Eigen::Matrix4cd::Identity()).norm() / 2.0;
}

std::pair<TangentialRows, TangentialRows> block_solve_2x2(const TangentialBlock& a, const TangentialBlock& b,
                                                          const TangentialBlock& c, const TangentialBlock& d,
                                                          const TangentialRows& r1, const TangentialRows& r2) {
  if (r1.rows() != r2.rows()) throw DimensionError("block_solve_2x2: right-hand sides differ in rows");
  const Eigen::Index n = r1.rows();
  Eigen::Matrix<cd, Eigen::Dynamic, 4> rhs4(n, 4);
  rhs4 << r1, r2;

  const bool all_good = det_ratio(a) > kWellConditioned && det_ratio(b) > kWellConditioned &&
                        det_ratio(c) > kWellConditioned && det_ratio(d) > kWellConditioned;
  Eigen::Matrix<cd, Eigen::Dynamic, 4> x(n, 4);
  if (all_good) {
    const Eigen::Matrix4cd inv = block_inverse_e3(a, b, c, d);
    const double res = (assemble(a, b, c, d) * inv - Eigen::Matrix4cd::Identity()).norm() / 2.0;
    if (res > 1e-12) throw ContractError("block_solve_2x2: block inverse identity violated, residual " +
                                         std::to_string(res));
    x = rhs4 * inv;
  } else {
    // [x₁ x₂]·M = r  ⇔  Mᵀ·[x₁ x₂]ᵀ = rᵀ
    const Eigen::Matrix4cd m = assemble(a, b, c, d);
    Eigen::FullPivLU<Eigen::Matrix4cd> lu(m.transpose());
    if (!lu.isInvertible() || lu.rcond() < 1e-14)
      throw GuidedWaveError("block system is singular (guided-wave resonance)",
                            std::numeric_limits<double>::quiet_NaN(),
                            cd(std::numeric_limits<double>::quiet_NaN()));
    x = lu.solve(rhs4.transpose()).transpose();
  }
  return {x.leftCols<2>(), x.rightCols<2>()};
}

}  // namespace dqed
