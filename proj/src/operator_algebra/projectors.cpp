#include <algorithm>
#include <cmath>
#include <numeric>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/operator_algebra.hpp"

namespace dqed {
namespace {

constexpr double kMergeGap = 1e-8;

double scaled(const MatXc& m) { return m.norm() / std::sqrt(static_cast<double>(m.rows())); }

}  // namespace

double ProjectorFamily::idempotency_residual() const {
  double r = 0.0;
  for (const auto& p : projectors) r = std::max(r, scaled(p.m * p.m - p.m));
  return r;
}

double ProjectorFamily::orthogonality_residual() const {
  double r = 0.0;
  for (std::size_t a = 0; a < projectors.size(); ++a)
    for (std::size_t b = 0; b < projectors.size(); ++b)
      if (a != b) r = std::max(r, scaled(projectors[a].m * projectors[b].m));
  return r;
}

double ProjectorFamily::completeness_residual() const {
  if (projectors.empty()) return 1.0;
  MatXc sum = MatXc::Zero(projectors[0].m.rows(), projectors[0].m.cols());
  for (const auto& p : projectors) sum += p.m;
  return scaled(sum - MatXc::Identity(sum.rows(), sum.cols()));
}

ProjectorFamily helmholtz_projectors(GridPtr grid) {
  if (!grid->periodic()) throw UnsupportedError("helmholtz_projectors: periodic box required");
  auto longitudinal = [](const Vec3& k) -> Mat3c {
    const double k2 = k.squaredNorm();
    if (k2 == 0.0) return Mat3c::Zero();
    return (k * k.transpose() / k2).cast<cd>();
  };
  ProjectorFamily fam;
  DiscreteKernel par(grid, translation_invariant_kernel(*grid, longitudinal));
  DiscreteKernel perp = DiscreteKernel::identity(grid) - par;
  fam.projectors = {std::move(par), std::move(perp)};
  return fam;
}

ProjectorFamily principal_axis_projectors(const LocalAnisotropic& model, cd w, GridPtr grid) {
  const std::size_t n = grid->size();
  ProjectorFamily fam;
  std::vector<std::vector<std::vector<int>>> groups(n);
  std::vector<Mat3> axes(n);
  bool near_tie = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& r = grid->points[i];
    const auto q = model.values(r, w);
    axes[i] = model.axes(r);
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return q[a].real() < q[b].real(); });
    std::vector<std::vector<int>> g{{order[0]}};
    for (int s = 1; s < 3; ++s) {
      const double x = q[order[s - 1]].real(), y = q[order[s]].real();
      const double scale = std::max(std::abs(x), std::abs(y));
      if (std::abs(x - y) <= kMergeGap * scale) {
        if (x != y) near_tie = true;
        g.back().push_back(order[s]);
      } else {
        g.push_back({order[s]});
      }
    }
    for (auto& grp : g) std::sort(grp.begin(), grp.end());
    // Label order: smaller groups first, then by lowest axis index.
    std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a[0] < b[0];
    });
    groups[i] = std::move(g);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (groups[i].size() != groups[0].size())
      throw UnsupportedError("principal_axis_projectors: degeneracy pattern varies across the grid");
    for (std::size_t l = 0; l < groups[i].size(); ++l)
      if (groups[i][l].size() != groups[0][l].size())
        throw UnsupportedError("principal_axis_projectors: degeneracy pattern varies across the grid");
  }
  if (near_tie)
    fam.warnings.push_back("principal axes merged at a relative gap below 1e-8 without an exact tie");

  for (std::size_t l = 0; l < groups[0].size(); ++l) {
    std::vector<Mat3c> t(n);
    for (std::size_t i = 0; i < n; ++i) {
      Mat3 p = Mat3::Zero();
      for (int ax : groups[i][l]) p += axes[i].col(ax) * axes[i].col(ax).transpose();
      t[i] = p.cast<cd>();
    }
    fam.projectors.push_back(DiscreteKernel::local(grid, t));
  }
  return fam;
}

}  // namespace dqed
