#include <cmath>
#include <set>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/response_models.hpp"

namespace dqed {
namespace {

bool real_positive_frequency(cd w) { return w.imag() == 0.0 && w.real() > 0.0; }

// diag(a) on every Cartesian component of every point.
VecXc expand_components(const std::vector<cd>& a) {
  VecXc v(3 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v.segment<3>(3 * i).setConstant(a[i]);
  return v;
}

}  // namespace

DiscreteKernel magnetodielectric_kernel(const std::vector<cd>& eps, const std::vector<cd>& kappa,
                                        cd w, GridPtr grid) {
  if (eps.size() != grid->size() || kappa.size() != grid->size())
    throw DimensionError("magnetodielectric_kernel: one eps/kappa sample per grid point");
  if (std::abs(w) == 0.0) throw SingularityError("magnetodielectric_kernel: w = 0");
  if (real_positive_frequency(w)) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (kappa[i].imag() > 0.0)
        throw ModelValidityError("magnetodielectric_kernel: Im kappa > 0 at point " +
                                 std::to_string(i) + " gives a negative magnetic loss");
      if (eps[i].imag() < 0.0)
        throw ModelValidityError("magnetodielectric_kernel: Im eps < 0 at point " +
                                 std::to_string(i));
    }
  }
  std::vector<cd> q1(eps.size()), q2(eps.size());
  bool magnetic = false;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    q1[i] = conductivity_from_epsilon(eps[i], w);
    q2[i] = -I_unit * (1.0 - kappa[i]) / w;
    magnetic = magnetic || q2[i] != 0.0;
  }
  MatXc m = expand_components(q1).asDiagonal();
  if (magnetic) {
    const MatXc c = curl_matrix(*grid).cast<cd>();
    m += c * expand_components(q2).asDiagonal() * c;
  }
  return DiscreteKernel(grid, std::move(m));
}

DiscreteKernel magnetodielectric_sigma(const std::vector<double>& sigma_par,
                                       const std::vector<double>& gamma, GridPtr grid) {
  if (sigma_par.size() != grid->size() || gamma.size() != grid->size())
    throw DimensionError("magnetodielectric_sigma: one sample per grid point");
  VecX s(3 * grid->size()), g(3 * grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    s.segment<3>(3 * i).setConstant(sigma_par[i]);
    g.segment<3>(3 * i).setConstant(gamma[i]);
  }
  const MatX c = curl_matrix(*grid);
  MatX m = c * g.asDiagonal() * c;
  m.diagonal() += s;
  return DiscreteKernel(grid, m.cast<cd>());
}

DiscreteKernel local_anisotropic_kernel(const LocalAnisotropic& model, cd w, GridPtr grid) {
  std::vector<Mat3c> t(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3& r = grid->points[i];
    const auto q = model.values(r, w);
    const Mat3 e = model.axes(r);
    Mat3c acc = Mat3c::Zero();
    for (int a = 0; a < 3; ++a) acc += q[a] * (e.col(a) * e.col(a).transpose()).cast<cd>();
    t[i] = acc;
  }
  return DiscreteKernel::local(grid, t);
}

DiscreteKernel homogeneous_kernel(const HomogeneousKSpace& model, cd w, GridPtr grid) {
  return DiscreteKernel(grid,
                        translation_invariant_kernel(*grid, [&](const Vec3& k) { return model.tensor(k, w); }));
}

std::vector<std::array<int, 3>> cell_assignment(const CellLattice& m, const Grid& grid) {
  if (!grid.structured()) throw LayoutError("cell lattice: structured box required");
  int per_cell[3];
  for (int a = 0; a < 3; ++a) {
    const double p = m.cell[a] / grid.spacing(a);
    const long pr = std::lround(p);
    if (std::abs(p - pr) > 1e-9 * p || pr < 2 || grid.n[a] % pr != 0)
      throw LayoutError("cell lattice: cells must hold an integer number (>= 2) of grid points "
                        "per axis and tile the box");
    per_cell[a] = static_cast<int>(pr);
  }
  std::vector<std::array<int, 3>> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto c = grid.coords(static_cast<int>(i));
    for (int a = 0; a < 3; ++a) out[i][a] = c[a] / per_cell[a];
  }
  return out;
}

DiscreteKernel cell_lattice_kernel(const CellLattice& model, cd w, GridPtr grid) {
  const auto cells = cell_assignment(model, *grid);
  std::map<std::array<int, 3>, MatXc> bulk;
  for (const auto& L : cells)
    if (!bulk.count(L)) bulk.emplace(L, homogeneous_kernel(model.model_for(L), w, grid).m);
  const auto n = grid->size();
  MatXc m = MatXc::Zero(3 * n, 3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const MatXc& b = bulk.at(cells[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (cells[i] == cells[j]) m.block<3, 3>(3 * i, 3 * j) = b.block<3, 3>(3 * i, 3 * j);
  }
  return DiscreteKernel(grid, std::move(m));
}

DiscreteKernel cell_lattice_sigma(const CellLattice& model, cd w, GridPtr grid) {
  return hermitian_split(cell_lattice_kernel(model, w, grid)).sigma;
}

DiscreteKernel conductivity_kernel(const MediumModel& model, cd w, GridPtr grid) {
  struct Visitor {
    cd w;
    GridPtr grid;
    DiscreteKernel operator()(const LocalAnisotropic& m) const {
      return local_anisotropic_kernel(m, w, grid);
    }
    DiscreteKernel operator()(const MagnetoDielectric& m) const {
      std::vector<cd> eps(grid->size()), kap(grid->size());
      for (std::size_t i = 0; i < grid->size(); ++i) {
        eps[i] = m.epsilon(grid->points[i], w);
        kap[i] = m.kappa(grid->points[i], w);
      }
      return magnetodielectric_kernel(eps, kap, w, grid);
    }
    DiscreteKernel operator()(const HomogeneousKSpace& m) const {
      return homogeneous_kernel(m, w, grid);
    }
    DiscreteKernel operator()(const CellLattice& m) const { return cell_lattice_kernel(m, w, grid); }
  };
  return std::visit(Visitor{w, grid}, model);
}

HermitianSplit hermitian_split(const DiscreteKernel& q) {
  if (!q.grid) throw DimensionError("hermitian_split: kernel without grid");
  if (q.m.rows() != q.m.cols()) throw DimensionError("hermitian_split: square kernel required");
  const MatXc qa = q.m.adjoint();
  return {DiscreteKernel(q.grid, 0.5 * (q.m + qa)),
          DiscreteKernel(q.grid, (q.m - qa) / (2.0 * I_unit))};
}

double check_positive(const DiscreteKernel& sigma, double tol) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(sigma.m, Eigen::EigenvaluesOnly);
  const VecX& ev = es.eigenvalues();
  const double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  if (norm == 0.0) return 0.0;
  const double rel = ev.minCoeff() / norm;
  if (rel < -tol)
    throw PositivityError("sigma has eigenvalue " + std::to_string(ev.minCoeff()) +
                          " below the discretization floor");
  return rel;
}

}  // namespace dqed
