#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dqed/core/types.hpp"

namespace dqed {

// Sample points with quadrature weights. Structured boxes carry their shape
// so spectral (periodic) or stencil (open) derivatives can be formed.
struct Grid {
  enum class Topology { periodic, open, scattered };

  std::vector<Vec3> points;
  std::vector<double> weights;
  Topology topology = Topology::scattered;
  std::array<int, 3> n{0, 0, 0};
  std::array<double, 3> length{0.0, 0.0, 0.0};

  static std::shared_ptr<const Grid> periodic_box(std::array<int, 3> n, std::array<double, 3> length);
  static std::shared_ptr<const Grid> open_box(std::array<int, 3> n, std::array<double, 3> length);
  static std::shared_ptr<const Grid> scattered(std::vector<Vec3> points, std::vector<double> weights);

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return 3 * points.size(); }
  bool periodic() const { return topology == Topology::periodic; }
  bool structured() const { return topology != Topology::scattered; }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  // Row-major with x slowest: idx = (ix*ny + iy)*nz + iz.
  int index(int ix, int iy, int iz) const { return (ix * n[1] + iy) * n[2] + iz; }
  std::array<int, 3> coords(int idx) const;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const Grid& a, const Grid& b);

// Dyadic kernel A(r, r') stored as Ã = W^{1/2} A W^{1/2}; row/column index
// 3·point + component. With this weighting, operator products are matrix
// products and continuum Hermiticity is matrix Hermiticity.
struct DiscreteKernel {
  GridPtr grid;
  MatXc m;

  DiscreteKernel() = default;
  DiscreteKernel(GridPtr g, MatXc mat);

  std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }

  static DiscreteKernel identity(GridPtr g);
  static DiscreteKernel zero(GridPtr g);
  // From raw samples A(r_i, r_j) (no weights applied yet).
  static DiscreteKernel from_samples(GridPtr g, const MatXc& samples);
  // Kernel c(r) δ(r − r') with a 3×3 tensor per point.
  static DiscreteKernel local(GridPtr g, const std::vector<Mat3c>& tensors);
  static DiscreteKernel local_scalar(GridPtr g, const std::vector<cd>& values);

  // Value A(r_i, r_j) with weights divided back out.
  Mat3c sample(std::size_t i, std::size_t j) const;

  DiscreteKernel adjoint() const;
  DiscreteKernel operator*(const DiscreteKernel& o) const;
  DiscreteKernel operator+(const DiscreteKernel& o) const;
  DiscreteKernel operator-(const DiscreteKernel& o) const;
  DiscreteKernel operator*(cd s) const;
};

// Throws DimensionError if the two kernels live on different grids.
void require_same_grid(const DiscreteKernel& a, const DiscreteKernel& b);

double frobenius(const MatXc& m);
double relative_frobenius(const MatXc& a, const MatXc& b);

// ‖A_ij(r,r') − A_ji(r',r)‖ / ‖A‖, i.e. the transpose asymmetry.
double reciprocity_residual(const DiscreteKernel& k);
double hermiticity_residual(const DiscreteKernel& k);

// Swap of the (point, component) blocks that maps A(r,r') to Aᵀ(r',r). For
// the weighted matrix this is plain transposition.
DiscreteKernel reciprocal_partner(const DiscreteKernel& k);

}  // namespace dqed
