#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/operator_algebra.hpp"

namespace dqed {

DiscreteKernel SpectralDecomposition::reassemble() const {
  return apply([](double x) { return x; });
}

DiscreteKernel SpectralDecomposition::apply(const std::function<double(double)>& phi) const {
  VecX d(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) d(i) = phi(values(i));
  return DiscreteKernel(grid, vectors * d.asDiagonal() * vectors.adjoint());
}

SpectralDecomposition eigendecompose(const DiscreteKernel& sigma) {
  const double norm = sigma.m.norm();
  if ((sigma.m - sigma.m.adjoint()).norm() > 1e-10 * norm)
    throw ContractError("eigendecompose: kernel is not Hermitian");
  // Symmetrize before solving so rounding asymmetry cannot leak in.
  const MatXc h = 0.5 * (sigma.m + sigma.m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatXc> es(h);
  if (es.info() != Eigen::Success) throw ContractError("eigendecompose: solver failed");
  const Eigen::Index n = h.rows();
  SpectralDecomposition out;
  out.grid = sigma.grid;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  (void)n;
  return out;
}

DiscreteKernel sqrt_kernel(const DiscreteKernel& sigma) {
  const auto sd = eigendecompose(sigma);
  const double scale = std::max(std::abs(sd.values(0)), std::abs(sd.values(sd.values.size() - 1)));
  const double lo = sd.values(sd.values.size() - 1);
  if (lo < -1e-10 * scale)
    throw PositivityError("sqrt_kernel: eigenvalue " + std::to_string(lo) +
                          " below -1e-10 |sigma|");
  return sd.apply([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

DiscreteKernel inverse_kernel(const DiscreteKernel& sigma) {
  const auto sd = eigendecompose(sigma);
  const double hi = sd.values(0), lo = sd.values(sd.values.size() - 1);
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw IllConditionedError("inverse_kernel: condition number " +
                              (lo > 0.0 ? std::to_string(hi / lo) : std::string("infinite")) +
                              " exceeds 1e12");
  return sd.apply([](double x) { return 1.0 / x; });
}

double sqrt_residual(const DiscreteKernel& k, const DiscreteKernel& sigma) {
  require_same_grid(k, sigma);
  return relative_frobenius(k.m * k.m.adjoint(), sigma.m);
}

GaugeKernel::GaugeKernel(DiscreteKernel v, double tol) : v_(std::move(v)) {
  const Eigen::Index n = v_.m.rows();
  const MatXc id = MatXc::Identity(n, n);
  const double scale = std::sqrt(static_cast<double>(n));
  residual_ = std::max((v_.m.adjoint() * v_.m - id).norm(), (v_.m * v_.m.adjoint() - id).norm()) / scale;
  if (residual_ > tol)
    throw ContractError("gauge kernel is not unitary (residual " + std::to_string(residual_) + ")");
}

DiscreteKernel gauge_transform(const DiscreteKernel& k, const GaugeKernel& v) { return k * v.kernel(); }

}  // namespace dqed
