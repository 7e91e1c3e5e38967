#pragma once

#include <array>
#include <limits>
#include <optional>
#include <utility>

#include "dqed/bulk_green.hpp"
#include "dqed/core/types.hpp"

namespace dqed {

// Layered geometry: region 0 is z < 0, region 1 the slab 0 < z < d,
// region 2 is z > d. Every region is a homogeneous, non-magnetic medium.
struct SlabMedia {
  HomogeneousKSpace lower;
  HomogeneousKSpace slab;
  HomogeneousKSpace upper;
  double d = 1.0;
};

// Tangential blocks are 2×2 matrices in the basis {ŝ = q×ẑ/q, q̂}.
using TangentialBlock = Eigen::Matrix2cd;
using TangentialBasis = Eigen::Matrix<double, 3, 2>;
using TangentialRows = Eigen::Matrix<cd, Eigen::Dynamic, 2>;

// Columns ŝ, q̂. At q = 0 the in-plane direction defaults to x̂.
TangentialBasis tangential_basis(const Vec2& q);
TangentialBlock to_tangential(const Mat3c& x, const TangentialBasis& b);
Mat3c from_tangential(const TangentialBlock& a, const TangentialBasis& b);
inline Mat3c tangential_projector() { return Vec3(1.0, 1.0, 0.0).cast<cd>().asDiagonal(); }

// Inverse on the tangential subspace. Throws GuidedWaveError (carrying q, ω
// when given) if |det A| ≤ 1e-14‖A‖².
TangentialBlock sharp_inverse(const TangentialBlock& a,
                              double q = std::numeric_limits<double>::quiet_NaN(),
                              cd w = cd(std::numeric_limits<double>::quiet_NaN()));

// The explicit inverse of [[A, B], [C, D]] built from ♯-inverses of all four
// blocks and of the two Schur-like combinations A·C♯ − B·D♯ and C·A♯ − D·B♯.
Eigen::Matrix4cd block_inverse_e3(const TangentialBlock& a, const TangentialBlock& b,
                                  const TangentialBlock& c, const TangentialBlock& d);
// ‖[[A,B],[C,D]]·inverse − 1‖ / ‖1‖.
double block_identity_residual(const TangentialBlock& a, const TangentialBlock& b,
                               const TangentialBlock& c, const TangentialBlock& d);

// Solves the row system [x₁ x₂]·[[A, B], [C, D]] = [r₁ r₂] for every row of
// r₁, r₂. Uses the four-inverse formula when B and C are invertible (and
// checks its identity to 1e-12); otherwise falls back to a Schur complement.
std::pair<TangentialRows, TangentialRows> block_solve_2x2(const TangentialBlock& a,
                                                          const TangentialBlock& b,
                                                          const TangentialBlock& c,
                                                          const TangentialBlock& d,
                                                          const TangentialRows& r1,
                                                          const TangentialRows& r2);

// Y(ζ, ζ′) for ζ, ζ′ ∈ {0, d}: relates (B×ẑ)·I_z on the faces to (E×ẑ)·I_z.
// `q` is the lateral wavevector of the fields; bulk tensors are taken at −q.
struct SlabAdmittance {
  TangentialBlock y00 = TangentialBlock::Zero();
  TangentialBlock y0d = TangentialBlock::Zero();
  TangentialBlock yd0 = TangentialBlock::Zero();
  TangentialBlock ydd = TangentialBlock::Zero();
  Vec2 q = Vec2::Zero();
  cd w = 0.0;
  double error = 0.0;
};

// Exterior admittance: each face sees its own half-space, so Y(0,0) comes
// from region 0, Y(d,d) from region 2 and the coupling blocks vanish.
SlabAdmittance slab_admittance(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec = {});

// Four-block admittance from the continuity relations through the slab
// medium. Checks the underlying linear system to 1e-10 (ContractError).
SlabAdmittance coupled_admittance(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec = {});

// Slab-medium bulk samples G₁, Γ₁(ζ, z′) at ζ ∈ {0, d}, z′ ∈ {0+, d−},
// indexed [ζ][z′], all at −q.
struct SlabBulkSamples {
  std::array<std::array<std::optional<PartialFourierSample>, 2>, 2> at;
  double d = 0.0;
};
SlabBulkSamples slab_bulk_samples(const SlabMedia& m, const Vec2& q, cd w, const QuadratureSpec& spec = {});

// R(ζ, z′) = iω(2π)² ẑ × {Γ₁(ζ,z′) + (2π)²[Y(ζ,d)·I_z·G₁(d,z′) − Y(ζ,0)·I_z·G₁(0,z′)]}.
struct ReflectionBlocks {
  Mat3c r00, r0d, rd0, rdd;  // r[ζ][z′], z′ = 0+ or d−
};
// R for arbitrary interior height: the caller supplies Γ₁(ζ, z′), G₁(0, z′), G₁(d, z′).
Mat3c reflection_block(const SlabAdmittance& y, bool zeta_is_d, const Mat3c& gamma_zeta,
                       const Mat3c& g_0, const Mat3c& g_d);
ReflectionBlocks assemble_R(const SlabAdmittance& y, const SlabBulkSamples& s);

// Tangential boundary fields from E_in at 0+ and d− (one row per source).
struct BoundaryFields {
  Eigen::Matrix<cd, Eigen::Dynamic, 3> e0;  // E(0+)·I_z
  Eigen::Matrix<cd, Eigen::Dynamic, 3> ed;  // E(d−)·I_z
  double residual = 0.0;
};
BoundaryFields tangential_fields(const ReflectionBlocks& r, const Vec2& q,
                                 const Eigen::Matrix<cd, Eigen::Dynamic, 3>& ein0,
                                 const Eigen::Matrix<cd, Eigen::Dynamic, 3>& eind);

// Field of a point dipole inside the slab. `green(zp, z)` returns G(z_p, z, Q)
// with E(z) = p·G for a source (iω)⁻¹p δ(r − r_p); both heights strictly
// inside (0, d) and distinct. Setup work is shared across heights.
class SlabGreen {
 public:
  SlabGreen(SlabMedia media, const Vec2& q_green, cd w, const QuadratureSpec& spec = {});
  Mat3c green(double zp, double z) const;
  const SlabAdmittance& admittance() const { return y_; }
  const ReflectionBlocks& reflection() const { return r_; }

 private:
  PartialFourierSample bulk(double dz, Side side) const;

  SlabMedia m_;
  Vec2 q_;  // field wavevector, −Q
  cd w_;
  QuadratureSpec spec_;
  SlabAdmittance y_;
  ReflectionBlocks r_;
  Eigen::Matrix4cd inverse_;
};

Mat3c slab_green(const SlabMedia& m, const Vec2& q_green, cd w, double zp, double z,
                 const QuadratureSpec& spec = {});

// Independent boundary-value solution for local layers with scalar ε:
// s and p polarizations propagated by 2×2 transfer matrices.
Mat3c transfer_matrix_green(const std::array<cd, 3>& eps, double d, const Vec2& q_green, cd w, double zp,
                            double z);

}  // namespace dqed
