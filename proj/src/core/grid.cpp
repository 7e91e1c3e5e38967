#include "dqed/core/grid.hpp"

#include <cmath>

#include "dqed/core/errors.hpp"

namespace dqed {
namespace {

std::shared_ptr<Grid> make_box(std::array<int, 3> n, std::array<double, 3> length, double offset,
                               Grid::Topology topo) {
  for (int a = 0; a < 3; ++a) {
    if (n[a] < 1 || !(length[a] > 0.0)) throw ParameterError("grid: box shape must be positive");
  }
  auto g = std::make_shared<Grid>();
  g->topology = topo;
  g->n = n;
  g->length = length;
  const double h[3] = {length[0] / n[0], length[1] / n[1], length[2] / n[2]};
  const double w = h[0] * h[1] * h[2];
  const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  g->points.reserve(total);
  g->weights.assign(total, w);
  for (int ix = 0; ix < n[0]; ++ix)
    for (int iy = 0; iy < n[1]; ++iy)
      for (int iz = 0; iz < n[2]; ++iz)
        g->points.emplace_back((ix + offset) * h[0], (iy + offset) * h[1], (iz + offset) * h[2]);
  return g;
}

}  // namespace

std::shared_ptr<const Grid> Grid::periodic_box(std::array<int, 3> n, std::array<double, 3> length) {
  return make_box(n, length, 0.0, Topology::periodic);
}

std::shared_ptr<const Grid> Grid::open_box(std::array<int, 3> n, std::array<double, 3> length) {
  return make_box(n, length, 0.5, Topology::open);
}

std::shared_ptr<const Grid> Grid::scattered(std::vector<Vec3> points, std::vector<double> weights) {
  if (points.size() != weights.size()) throw DimensionError("grid: points/weights length mismatch");
  for (double w : weights)
    if (!(w > 0.0)) throw ParameterError("grid: quadrature weights must be strictly positive");
  auto g = std::make_shared<Grid>();
  g->points = std::move(points);
  g->weights = std::move(weights);
  return g;
}

std::array<int, 3> Grid::coords(int idx) const {
  const int iz = idx % n[2];
  const int iy = (idx / n[2]) % n[1];
  const int ix = idx / (n[1] * n[2]);
  return {ix, iy, iz};
}

bool same_grid(const Grid& a, const Grid& b) {
  if (&a == &b) return true;
  if (a.topology != b.topology || a.n != b.n || a.length != b.length || a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.points[i] != b.points[i] || a.weights[i] != b.weights[i]) return false;
  return true;
}

DiscreteKernel::DiscreteKernel(GridPtr g, MatXc mat) : grid(std::move(g)), m(std::move(mat)) {
  if (!grid) throw DimensionError("kernel: null grid");
  const auto d = static_cast<Eigen::Index>(grid->dim());
  if (m.rows() != d || m.cols() != d) throw DimensionError("kernel: matrix must be 3N x 3N");
}

DiscreteKernel DiscreteKernel::identity(GridPtr g) {
  const auto d = static_cast<Eigen::Index>(g->dim());
  return DiscreteKernel(g, MatXc::Identity(d, d));
}

DiscreteKernel DiscreteKernel::zero(GridPtr g) {
  const auto d = static_cast<Eigen::Index>(g->dim());
  return DiscreteKernel(g, MatXc::Zero(d, d));
}

DiscreteKernel DiscreteKernel::from_samples(GridPtr g, const MatXc& samples) {
  const auto d = static_cast<Eigen::Index>(g->dim());
  if (samples.rows() != d || samples.cols() != d) throw DimensionError("kernel: sample shape");
  VecX s(d);
  for (std::size_t i = 0; i < g->size(); ++i) s.segment<3>(3 * i).setConstant(std::sqrt(g->weights[i]));
  MatXc m = s.asDiagonal() * samples * s.asDiagonal();
  return DiscreteKernel(g, std::move(m));
}

// A δ-kernel has continuum value c(r)δ(r−r′); its weighted matrix is
// w^{1/2}·(c/w)·w^{1/2} = c, so the tensors go straight onto the diagonal.
DiscreteKernel DiscreteKernel::local(GridPtr g, const std::vector<Mat3c>& tensors) {
  if (tensors.size() != g->size()) throw DimensionError("kernel: one tensor per point required");
  DiscreteKernel k = zero(g);
  for (std::size_t i = 0; i < tensors.size(); ++i) k.m.block<3, 3>(3 * i, 3 * i) = tensors[i];
  return k;
}

DiscreteKernel DiscreteKernel::local_scalar(GridPtr g, const std::vector<cd>& values) {
  std::vector<Mat3c> t(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) t[i] = values[i] * Mat3c::Identity();
  return local(std::move(g), t);
}

Mat3c DiscreteKernel::sample(std::size_t i, std::size_t j) const {
  return m.block<3, 3>(3 * i, 3 * j) / std::sqrt(grid->weights[i] * grid->weights[j]);
}

DiscreteKernel DiscreteKernel::adjoint() const { return DiscreteKernel(grid, m.adjoint()); }

DiscreteKernel DiscreteKernel::operator*(const DiscreteKernel& o) const {
  require_same_grid(*this, o);
  return DiscreteKernel(grid, m * o.m);
}

DiscreteKernel DiscreteKernel::operator+(const DiscreteKernel& o) const {
  require_same_grid(*this, o);
  return DiscreteKernel(grid, m + o.m);
}

DiscreteKernel DiscreteKernel::operator-(const DiscreteKernel& o) const {
  require_same_grid(*this, o);
  return DiscreteKernel(grid, m - o.m);
}

DiscreteKernel DiscreteKernel::operator*(cd s) const { return DiscreteKernel(grid, m * s); }

void require_same_grid(const DiscreteKernel& a, const DiscreteKernel& b) {
  if (!a.grid || !b.grid || !same_grid(*a.grid, *b.grid))
    throw DimensionError("kernels live on different grids");
}

double frobenius(const MatXc& m) { return m.norm(); }

double relative_frobenius(const MatXc& a, const MatXc& b) {
  const double nb = b.norm();
  const double diff = (a - b).norm();
  return nb > 0.0 ? diff / nb : diff;
}

double reciprocity_residual(const DiscreteKernel& k) {
  return relative_frobenius(k.m.transpose(), k.m);
}

double hermiticity_residual(const DiscreteKernel& k) {
  return relative_frobenius(k.m.adjoint(), k.m);
}

DiscreteKernel reciprocal_partner(const DiscreteKernel& k) {
  return DiscreteKernel(k.grid, k.m.transpose());
}

}  // namespace dqed
