#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/operator_algebra.hpp"

namespace dqed {
namespace {

VecX per_component(const std::vector<double>& a) {
  VecX v(3 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v.segment<3>(3 * i).setConstant(a[i]);
  return v;
}

void check_fields(const std::vector<double>& s, const std::vector<double>& g, const Grid& grid) {
  if (s.size() != grid.size() || g.size() != grid.size())
    throw DimensionError("one sigma_par/gamma sample per grid point required");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] < 0.0 || g[i] < 0.0) throw ParameterError("sigma_par and gamma must be non-negative");
}

}  // namespace

DiscreteKernel naive_inhomogeneous_K(const std::vector<double>& sigma_par,
                                     const std::vector<double>& gamma, GridPtr grid, Branch b) {
  check_fields(sigma_par, gamma, *grid);
  const VecX s = per_component(sigma_par).cwiseSqrt();
  const VecX g = per_component(gamma).cwiseSqrt();
  const MatX c = curl_matrix(*grid);
  MatXc k = (-branch_sign(b) * I_unit) * (c * g.asDiagonal()).cast<cd>();
  k.diagonal() += s.cast<cd>();
  return DiscreteKernel(grid, std::move(k));
}

double yukawa_m0(double r, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("yukawa_m0: alpha must be > 0");
  if (!(r > 0.0)) throw DomainError("yukawa_m0: r must be > 0");
  return -std::exp(-r / alpha) / (4.0 * pi * r);
}

double yukawa_m0_k(double k, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("yukawa_m0_k: alpha must be > 0");
  return -alpha * alpha / (1.0 + alpha * alpha * k * k);
}

DiscreteKernel yukawa_M0(double sigma_par0, double gamma0, GridPtr grid, Branch b) {
  if (!(sigma_par0 > 0.0) || !(gamma0 > 0.0))
    throw ParameterError("yukawa_M0: background sigma_par and gamma must be > 0");
  const double a = std::sqrt(sigma_par0), g = std::sqrt(gamma0);
  const double alpha = g / a;
  const double sgn = branch_sign(b);
  // ∇ → ik on the grid: ∇×m₀ → i m₀ k×, and ∇×m₀×∇′ → m₀ (k×)².
  return DiscreteKernel(grid, translation_invariant_kernel(*grid, [&](const Vec3& k) -> Mat3c {
                          const double m0 = yukawa_m0_k(k.norm(), alpha);
                          const Mat3 kx = cross_matrix(k);
                          const Mat3 re = (Mat3::Identity() - m0 * kx * kx) / a;
                          const Mat3 im_curl = -sgn * m0 / g * kx;
                          return re.cast<cd>() + im_curl.cast<cd>();
                        }));
}

DiscreteKernel perturbative_K(const std::vector<double>& sigma_par, const std::vector<double>& gamma,
                              double sigma_par0, double gamma0, GridPtr grid, Branch b) {
  check_fields(sigma_par, gamma, *grid);
  if (!grid->periodic()) throw UnsupportedError("perturbative_K: periodic box required");
  if (!(sigma_par0 > 0.0) || !(gamma0 > 0.0))
    throw ParameterError("perturbative_K: alpha = (gamma0/sigma_par0)^(1/2) must be > 0");
  const std::size_t n = grid->size();
  const DiscreteKernel k0 = naive_inhomogeneous_K(std::vector<double>(n, sigma_par0),
                                                  std::vector<double>(n, gamma0), grid, b);
  std::vector<double> ds(n), dg(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds[i] = sigma_par[i] - sigma_par0;
    dg[i] = gamma[i] - gamma0;
  }
  const MatX c = curl_matrix(*grid);
  MatX dsig = c * per_component(dg).asDiagonal() * c;
  dsig.diagonal() += per_component(ds);
  const DiscreteKernel m0 = yukawa_M0(sigma_par0, gamma0, grid, b);
  return DiscreteKernel(grid, k0.m + 0.5 * dsig.cast<cd>() * m0.m);
}

}  // namespace dqed
