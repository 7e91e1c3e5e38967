#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed {

SlabGreen::SlabGreen(SlabMedia media, const Vec2& q_green, cd w, const QuadratureSpec& spec)
    : m_(std::move(media)), q_(-q_green), w_(w), spec_(spec) {
  y_ = slab_admittance(m_, q_, w_, spec_);
  r_ = assemble_R(y_, slab_bulk_samples(m_, q_, w_, spec_));
}

PartialFourierSample SlabGreen::bulk(double dz, Side side) const {
  return partial_fourier(m_.slab, dz, side, Vec2(-q_), w_, spec_);
}

Mat3c SlabGreen::green(double zp, double z) const {
  const double d = m_.d;
  if (!(zp > 0.0 && zp < d)) throw DomainError("slab_green: source height must lie strictly inside (0, d)");
  if (!(z > 0.0 && z < d)) throw DomainError("slab_green: field height must lie strictly inside (0, d)");
  if (z == zp) throw DomainError("slab_green: source and field heights must differ");

  // Rows are indexed by the dipole direction: E(z) = p·G(z_p, z).
  const PartialFourierSample in_0 = bulk(zp, Side::none);
  const PartialFourierSample in_d = bulk(zp - d, Side::none);
  const PartialFourierSample in_z = bulk(zp - z, Side::none);
  const PartialFourierSample at_0 = bulk(-z, Side::none);     // ζ = 0
  const PartialFourierSample at_d = bulk(d - z, Side::none);  // ζ = d

  const BoundaryFields bf = tangential_fields(r_, q_, in_0.g, in_d.g);
  const Mat3c r0z = reflection_block(y_, false, at_0.gamma, at_0.g, at_d.g);
  const Mat3c rdz = reflection_block(y_, true, at_d.gamma, at_0.g, at_d.g);
  return in_z.g + bf.ed * rdz - bf.e0 * r0z;
}

Mat3c slab_green(const SlabMedia& m, const Vec2& q_green, cd w, double zp, double z, const QuadratureSpec& spec) {
  return SlabGreen(m, q_green, w, spec).green(zp, z);
}

}  // namespace dqed
