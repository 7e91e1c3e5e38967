#include <algorithm>
#include <cmath>
#include <string>

#include "dqed/core/errors.hpp"
#include "dqed/response_models.hpp"

namespace dqed {
namespace {

void validate(const DrudeLorentzParams& p, cd w) {
  if (p.plasma_frequency < 0.0 || p.damping < 0.0 || p.resonance < 0.0)
    throw ParameterError("Drude-Lorentz parameters must be non-negative");
  if (p.plasma_frequency > 0.0 && p.damping == 0.0 && w.imag() <= 0.0)
    throw ParameterError("lossless Drude-Lorentz response needs Im w > 0");
}

cd resonance_denominator(const DrudeLorentzParams& p, cd w) {
  const cd den = p.resonance * p.resonance - w * w - I_unit * p.damping * w;
  const double scale = std::max({1.0, std::norm(w), p.resonance * p.resonance});
  if (std::abs(den) <= 1e-14 * scale)
    throw SingularityError("Drude-Lorentz pole hit at w = " + std::to_string(w.real()) + "+" +
                           std::to_string(w.imag()) + "i");
  return den;
}

}  // namespace

cd eval_epsilon(const DrudeLorentzParams& p, cd w) {
  if (p.plasma_frequency == 0.0) return 1.0;
  validate(p, w);
  return 1.0 + p.plasma_frequency * p.plasma_frequency / resonance_denominator(p, w);
}

cd eval_kappa(const DrudeLorentzParams& magnetic, cd w) { return 1.0 / eval_epsilon(magnetic, w); }

std::pair<cd, cd> hydrodynamic_kspace_k2(double wp, double gd, double beta, cd k2, cd w) {
  if (wp < 0.0 || beta < 0.0) throw ParameterError("hydrodynamic: w_p and beta must be >= 0");
  if (!(gd > 0.0)) throw ParameterError("hydrodynamic: damping must be > 0");
  if (wp == 0.0) return {0.0, 0.0};
  const cd base = w * (w + I_unit * gd);
  const cd den_par = base - beta * beta * k2;
  const double scale = std::max(1.0, std::abs(base));
  if (std::abs(den_par) <= 1e-14 * scale)
    throw SingularityError("hydrodynamic: longitudinal pole hit");
  if (std::abs(base) <= 1e-300) throw SingularityError("hydrodynamic: w = 0");
  const cd eps_par = 1.0 - wp * wp / den_par;
  const cd eps_perp = 1.0 - wp * wp / base;
  return {conductivity_from_epsilon(eps_par, w), conductivity_from_epsilon(eps_perp, w)};
}

std::pair<cd, cd> hydrodynamic_kspace(double wp, double gd, double beta, double k, cd w) {
  return hydrodynamic_kspace_k2(wp, gd, beta, cd(k * k), w);
}

}  // namespace dqed
