#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed {
namespace {

constexpr double kTwoPi2 = 4.0 * pi * pi;

void require_layerable(const SlabMedia& m) {
  if (!(m.d > 0.0)) throw ParameterError("slab thickness d must be > 0");
  for (const HomogeneousKSpace* r : {&m.lower, &m.slab, &m.upper})
    if (r->magnetic_like)
      throw UnsupportedError("layered media exclude magnetic-like singular conductivity terms (" + r->name + ")");
}

PartialFourierSample sample(const HomogeneousKSpace& m, double dz, Side side, const Vec2& q, cd w,
                            const QuadratureSpec& spec) {
  // The fields carry q; the layered tensors are evaluated at −q.
  return partial_fourier(m, dz, side, Vec2(-q), w, spec);
}

TangentialBlock sharp(const TangentialBlock& a, const Vec2& q, cd w) { return sharp_inverse(a, q.norm(), w); }

}  // namespace

SlabAdmittance slab_admittance(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec) {
  require_layerable(m);
  const TangentialBasis b = tangential_basis(q);
  const PartialFourierSample up = sample(m.upper, 0.0, Side::plus, q, w, spec);
  const PartialFourierSample lo = sample(m.lower, 0.0, Side::minus, q, w, spec);
  SlabAdmittance y;
  y.q = q;
  y.w = w;
  y.ydd = -to_tangential(up.gamma, b) * sharp(to_tangential(up.g, b), q, w) / kTwoPi2;
  y.y00 = to_tangential(lo.gamma, b) * sharp(to_tangential(lo.g, b), q, w) / kTwoPi2;
  y.error = up.error + lo.error;
  return y;
}

SlabAdmittance coupled_admittance(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec) {
  require_layerable(m);
  const double d = m.d;
  const TangentialBasis b = tangential_basis(q);
  auto p2 = [&](const Mat3c& x) { return to_tangential(x, b); };

  const PartialFourierSample g1_0d = sample(m.slab, -d, Side::none, q, w, spec);      // (0, d−)
  const PartialFourierSample g1_00 = sample(m.slab, 0.0, Side::minus, q, w, spec);    // (0, 0+)
  const PartialFourierSample g0_00 = sample(m.lower, 0.0, Side::plus, q, w, spec);    // (0, 0−)
  const PartialFourierSample g1_dd = sample(m.slab, 0.0, Side::plus, q, w, spec);     // (d, d−)
  const PartialFourierSample g2_00 = sample(m.upper, 0.0, Side::minus, q, w, spec);   // (0, 0+)
  const PartialFourierSample g1_d0 = sample(m.slab, d, Side::none, q, w, spec);       // (d, 0+)

  const TangentialBlock M = -p2(g1_0d.g), N = -p2(g1_00.g + g0_00.g);
  const TangentialBlock P = p2(g1_dd.g + g2_00.g), S = p2(g1_d0.g);
  const TangentialBlock T = p2(g1_0d.gamma), U = p2(g1_00.gamma + g0_00.gamma);
  const TangentialBlock V = -p2(g1_dd.gamma + g2_00.gamma), W = -p2(g1_d0.gamma);

  Eigen::Matrix4cd inv;
  try {
    inv = block_inverse_e3(M, N, P, S);
  } catch (const GuidedWaveError&) {
    throw GuidedWaveError("coupled admittance: singular M/N/P/S combination", q.norm(), w);
  }
  Eigen::Matrix4cd tuvw, mnps;
  tuvw << T, U, V, W;
  mnps << M, N, P, S;
  const Eigen::Matrix4cd blocks = tuvw * inv / kTwoPi2;

  // [[−Y00, −Y0d], [Yd0, Ydd]]·[[M, N], [P, S]] must give (2π)⁻²[[T, U], [V, W]].
  const double res = (blocks * mnps - tuvw / kTwoPi2).norm() / std::max(tuvw.norm() / kTwoPi2, 1e-300);
  if (res > 1e-10)
    throw ContractError("coupled admittance: continuity system residual " + std::to_string(res));

  SlabAdmittance y;
  y.q = q;
  y.w = w;
  y.y00 = -blocks.topLeftCorner<2, 2>();
  y.y0d = -blocks.topRightCorner<2, 2>();
  y.yd0 = blocks.bottomLeftCorner<2, 2>();
  y.ydd = blocks.bottomRightCorner<2, 2>();
  y.error = g1_0d.error + g1_00.error + g0_00.error + g1_dd.error + g2_00.error + g1_d0.error;
  return y;
}

SlabBulkSamples slab_bulk_samples(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec) {
  require_layerable(m);
  SlabBulkSamples s;
  s.d = m.d;
  // dz = ζ − z′ with one-sided limits at the faces.
  s.at[0][0] = sample(m.slab, 0.0, Side::minus, q, w, spec);
  s.at[0][1] = sample(m.slab, -m.d, Side::none, q, w, spec);
  s.at[1][0] = sample(m.slab, m.d, Side::none, q, w, spec);
  s.at[1][1] = sample(m.slab, 0.0, Side::plus, q, w, spec);
  return s;
}

Mat3c reflection_block(const SlabAdmittance& y, bool zeta_is_d, const Mat3c& gamma_zeta, const Mat3c& g_0,
                       const Mat3c& g_d) {
  const TangentialBasis b = tangential_basis(y.q);
  const Mat3c y_to_d = from_tangential(zeta_is_d ? y.ydd : y.y0d, b);
  const Mat3c y_to_0 = from_tangential(zeta_is_d ? y.yd0 : y.y00, b);
  const Mat3c iz = tangential_projector();
  const Mat3c x = gamma_zeta + kTwoPi2 * (y_to_d * iz * g_d - y_to_0 * iz * g_0);
  return I_unit * y.w * kTwoPi2 * cross_matrix(Vec3::UnitZ()).cast<cd>() * x;
}

ReflectionBlocks assemble_R(const SlabAdmittance& y, const SlabBulkSamples& s) {
  for (const auto& row : s.at)
    for (const auto& e : row)
      if (!e) throw DependencyError("assemble_R: slab-medium bulk sample missing");
  auto r = [&](int zeta, int zp) {
    return reflection_block(y, zeta == 1, s.at[zeta][zp]->gamma, s.at[0][zp]->g, s.at[1][zp]->g);
  };
  return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
}

BoundaryFields tangential_fields(const ReflectionBlocks& r, const Vec2& q,
                                 const Eigen::Matrix<cd, Eigen::Dynamic, 3>& ein0,
                                 const Eigen::Matrix<cd, Eigen::Dynamic, 3>& eind) {
  const TangentialBasis b = tangential_basis(q);
  const Mat3c id = Mat3c::Identity();
  const TangentialBlock A = to_tangential(id + r.r00, b), B = to_tangential(r.r0d, b);
  const TangentialBlock C = -to_tangential(r.rd0, b), D = to_tangential(id - r.rdd, b);
  const TangentialRows r1 = ein0 * b.cast<cd>(), r2 = eind * b.cast<cd>();
  auto [x, y] = block_solve_2x2(A, B, C, D, r1, r2);

  Eigen::Matrix4cd big;
  big << A, B, C, D;
  Eigen::Matrix<cd, Eigen::Dynamic, 4> xy(x.rows(), 4), rhs(x.rows(), 4);
  xy << x, y;
  rhs << r1, r2;
  BoundaryFields out;
  out.e0 = x * b.transpose().cast<cd>();
  out.ed = y * b.transpose().cast<cd>();
  const double scale = rhs.norm();
  out.residual = scale > 0.0 ? (xy * big - rhs).norm() / scale : (xy * big).norm();
  if (out.residual > 1e-11)
    throw ContractError("tangential_fields: boundary system residual " + std::to_string(out.residual));
  return out;
}

}  // namespace dqed
