#pragma once

#include "dqed/core/types.hpp"
#include "dqed/response_models.hpp"

namespace dqed {

// D⊥ = k² − ω² − iωQ⊥, D∥ = ω² + iωQ∥.
struct DispersionPair {
  cd perp;
  cd par;
};

DispersionPair dispersion(const HomogeneousKSpace& m, double k, cd w);
DispersionPair dispersion_k2(const HomogeneousKSpace& m, cd k2, cd w);

// G(k) = (1 − k̂k̂)/D⊥ − k̂k̂/D∥, the solution of (k² − kk − ω² − iωQ)G = 1.
// Throws PoleError when a denominator vanishes.
Mat3c bulk_green_k(const HomogeneousKSpace& m, const Vec3& k, cd w);
// Tensor transverse response: Q = Q∥k̂k̂ + I_k Q⊥ I_k with I_k = 1 − k̂k̂.
Mat3c bulk_green_k(cd q_par, const Mat3c& q_perp, const Vec3& k, cd w);
// Γ(k) = k×G(k)/ω, the magnetic companion (B = Γ-type response).
Mat3c bulk_gamma_k(const HomogeneousKSpace& m, const Vec3& k, cd w);

// ‖(k² − kk − ω² − iωQ)G − 1‖ / ‖1‖
double bulk_green_residual(const Mat3c& g, const Mat3c& q, const Vec3& k, cd w);

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  double cutoff = 2048.0;  // upper β limit in units of the model scale
  int max_intervals = 200000;
};

// One-sided limit used when z − z′ = 0: `plus` means 0+.
enum class Side { minus = -1, none = 0, plus = 1 };

// The β-integrals ∫dβ e^{iβΔz}(…) in the frame e1 = q̂, e2 = ẑ×q̂, e3 = ẑ:
//   a = ∫1/D⊥, b = ∫β²/(k²D⊥), c = ∫q²/(k²D∥), e = ∫(1/D∥ − 1/D∥(∞)),
//   f = ∫qβ/k²·(1/D⊥ + 1/D∥), g = ∫β/D⊥.
struct BetaIntegrals {
  cd a, b, c, e, f, g;
  cd d_par_inf;  // asymptote of D∥, sets the contact term
  double error = 0.0;
  int evaluations = 0;
};

BetaIntegrals beta_integrals(const HomogeneousKSpace& m, double dz, Side side, double q, cd w,
                             const QuadratureSpec& spec = {});

// G(z, z′, q, ω) = ∫dβ/(2π)³ e^{iβ(z−z′)} G(k). The δ(z − z′) part of the
// longitudinal term is kept apart in `contact`; Γ is the matching curl.
struct PartialFourierSample {
  Mat3c g;
  Mat3c contact;
  Mat3c gamma;
  double error = 0.0;
};

PartialFourierSample partial_fourier(const HomogeneousKSpace& m, double dz, Side side, const Vec2& q,
                                     cd w, const QuadratureSpec& spec = {});

// Rotation whose columns are q̂, ẑ×q̂, ẑ (x̂, ŷ, ẑ at q = 0).
Mat3 lateral_frame(const Vec2& q);

struct ImpedancePair {
  cd zs;
  cd zp;
  double error = 0.0;
};

// Z_s = iω∫dβ/(2π)³ 1/D⊥, Z_p = iω∫dβ/(2π)³ [β²/D⊥ − q²/D∥]/k².
ImpedancePair kliever_fuchs(const HomogeneousKSpace& m, double q, cd w, const QuadratureSpec& spec = {});

}  // namespace dqed
