#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/operator_algebra.hpp"

namespace dqed {
namespace {

struct Split {
  Mat3 par;   // k̂k̂, zero at k = 0
  Mat3 perp;  // 1 − k̂k̂
};

Split split(const Vec3& k) {
  const double k2 = k.squaredNorm();
  if (k2 == 0.0) return {Mat3::Zero(), Mat3::Identity()};
  const Mat3 kk = k * k.transpose() / k2;
  return {kk, Mat3::Identity() - kk};
}

// γ(k) = (σ⊥ − σ∥)/k², which the curl form needs non-negative.
double gamma_of(const IsotropicSigma& s, double k) {
  if (k == 0.0) return 0.0;
  const double sp = s.par(k), st = s.perp(k);
  const double g = (st - sp) / (k * k);
  if (g < -1e-14 * std::max(std::abs(sp), std::abs(st)) / (k * k))
    throw ParameterError("curl form needs sigma_perp >= sigma_par at every k");
  return std::max(g, 0.0);
}

}  // namespace

IsotropicSigma IsotropicSigma::from_model(const HomogeneousKSpace& m, double w) {
  return {[m, w](double k) { return m.eval(k, cd(w)).first.real(); },
          [m, w](double k) { return m.eval(k, cd(w)).second.real(); }};
}

IsotropicSigma IsotropicSigma::magnetodielectric(double sigma_par, double gamma) {
  return {[sigma_par](double) { return sigma_par; },
          [sigma_par, gamma](double k) { return sigma_par + gamma * k * k; }};
}

DiscreteKernel isotropic_sigma_kernel(const IsotropicSigma& s, GridPtr grid) {
  return DiscreteKernel(grid, translation_invariant_kernel(*grid, [&](const Vec3& k) -> Mat3c {
                          const double kn = k.norm();
                          const Split p = split(k);
                          return (s.par(kn) * p.par + s.perp(kn) * p.perp).cast<cd>();
                        }));
}

DiscreteKernel isotropic_sqrt_kernel(const IsotropicSigma& s, GridPtr grid) {
  return DiscreteKernel(grid, translation_invariant_kernel(*grid, [&](const Vec3& k) -> Mat3c {
                          const double kn = k.norm();
                          const Split p = split(k);
                          const double sp = s.par(kn), st = s.perp(kn);
                          if (sp < 0.0 || st < 0.0)
                            throw PositivityError("isotropic sigma is negative at some k");
                          return (std::sqrt(sp) * p.par + std::sqrt(st) * p.perp).cast<cd>();
                        }));
}

DiscreteKernel curl_form_kernel(const IsotropicSigma& s, GridPtr grid, Branch b) {
  const double sgn = branch_sign(b);
  return DiscreteKernel(grid, translation_invariant_kernel(*grid, [&](const Vec3& k) -> Mat3c {
                          const double kn = k.norm();
                          const double sp = s.par(kn);
                          if (sp < 0.0) throw PositivityError("sigma_par is negative at some k");
                          const double g = gamma_of(s, kn);
                          return (std::sqrt(sp) * Mat3::Identity() + sgn * std::sqrt(g) * cross_matrix(k))
                              .cast<cd>();
                        }));
}

GaugeKernel curl_gauge(const IsotropicSigma& s, GridPtr grid, Branch b) {
  const double sgn = branch_sign(b);
  MatXc v = translation_invariant_kernel(*grid, [&](const Vec3& k) -> Mat3c {
    const double kn = k.norm();
    const Split p = split(k);
    const double sp = s.par(kn), st = s.perp(kn);
    if (!(st > 0.0)) throw PositivityError("curl gauge needs sigma_perp > 0");
    const double g = gamma_of(s, kn);
    return (p.par + std::sqrt(sp / st) * p.perp + sgn * std::sqrt(g / st) * cross_matrix(k)).cast<cd>();
  });
  return GaugeKernel(DiscreteKernel(grid, std::move(v)));
}

GaugeKernel sign_flip_gauge(const std::vector<std::array<int, 2>>& signs, GridPtr grid) {
  if (signs.size() != grid->size()) throw DimensionError("sign_flip_gauge: one sign pair per mode");
  for (const auto& s : signs)
    if (std::abs(s[0]) != 1 || std::abs(s[1]) != 1) throw ParameterError("sign_flip_gauge: signs must be +-1");
  const auto ks = wavevectors(*grid);
  std::vector<Mat3c> sym(ks.size());
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const Split p = split(ks[m]);
    sym[m] = (signs[m][0] * p.par + signs[m][1] * p.perp).cast<cd>();
  }
  MatXc v = translation_invariant_kernel(*grid, sym);
  return GaugeKernel(DiscreteKernel(grid, std::move(v)));
}

}  // namespace dqed
