#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dqed/core/grid.hpp"
#include "dqed/response_models.hpp"

namespace dqed {

struct SpectralDecomposition {
  GridPtr grid;
  VecX values;    // descending
  MatXc vectors;  // orthonormal columns, weighted representation

  DiscreteKernel reassemble() const;
  // Σ_α φ(σ_α) F_α F_α†
  DiscreteKernel apply(const std::function<double(double)>& phi) const;
};

SpectralDecomposition eigendecompose(const DiscreteKernel& sigma);

// Hermitian positive square root, K K† = σ.
DiscreteKernel sqrt_kernel(const DiscreteKernel& sigma);
// ρ with ρσ = 1; throws IllConditionedError above condition number 1e12.
DiscreteKernel inverse_kernel(const DiscreteKernel& sigma);

// ‖K K† − σ‖_F / ‖σ‖_F
double sqrt_residual(const DiscreteKernel& k, const DiscreteKernel& sigma);

// Unitary kernel; construction verifies V†V = VV† = 1 to 1e-11.
class GaugeKernel {
 public:
  explicit GaugeKernel(DiscreteKernel v, double tol = 1e-11);
  const DiscreteKernel& kernel() const { return v_; }
  double unitarity_residual() const { return residual_; }

 private:
  DiscreteKernel v_;
  double residual_;
};

DiscreteKernel gauge_transform(const DiscreteKernel& k, const GaugeKernel& v);

struct ProjectorFamily {
  std::vector<DiscreteKernel> projectors;
  std::vector<std::string> warnings;

  std::size_t size() const { return projectors.size(); }
  // Worst of ‖P² − P‖, ‖P_λ P_λ′‖, ‖Σ P − 1‖ (Frobenius over √dim).
  double idempotency_residual() const;
  double orthogonality_residual() const;
  double completeness_residual() const;
};

// {Δ∥, Δ⊥} from k̂k̂ on a periodic box; the k = 0 mode is transverse.
ProjectorFamily helmholtz_projectors(GridPtr grid);

// Projectors on the principal axes of a local anisotropic medium. Axes whose
// σ eigenvalues agree to a relative gap of 1e-8 are merged; a merge that is
// not an exact tie leaves a warning.
ProjectorFamily principal_axis_projectors(const LocalAnisotropic& model, cd w, GridPtr grid);

// ---- isotropic homogeneous media in k-space ------------------------------

// Dissipative part of an isotropic medium at fixed real ω as functions of |k|.
struct IsotropicSigma {
  std::function<double(double k)> par;
  std::function<double(double k)> perp;

  static IsotropicSigma from_model(const HomogeneousKSpace& m, double w);
  // σ⊥ = σ∥ + γk², the homogeneous magnetodielectric form.
  static IsotropicSigma magnetodielectric(double sigma_par, double gamma);
};

// K(k) = σ∥^{1/2} k̂k̂ + σ⊥^{1/2}(1 − k̂k̂), the Hermitian root.
DiscreteKernel isotropic_sqrt_kernel(const IsotropicSigma& s, GridPtr grid);
// σ(k) itself on the grid.
DiscreteKernel isotropic_sigma_kernel(const IsotropicSigma& s, GridPtr grid);
// K′(k) = σ∥^{1/2} ± γ^{1/2} k×, the curl-form root (needs γ ≥ 0).
DiscreteKernel curl_form_kernel(const IsotropicSigma& s, GridPtr grid, Branch b = Branch::upper);
// V(k) = k̂k̂ + (σ∥/σ⊥)^{1/2}(1 − k̂k̂) ± γ^{1/2}σ⊥^{−1/2} k×, so that K·V = K′.
GaugeKernel curl_gauge(const IsotropicSigma& s, GridPtr grid, Branch b = Branch::upper);
// V(k) = s∥(k) k̂k̂ + s⊥(k)(1 − k̂k̂) with signs ±1 per mode; signs[m] holds
// (s∥, s⊥) for wavevectors()[m].
GaugeKernel sign_flip_gauge(const std::vector<std::array<int, 2>>& signs, GridPtr grid);

// ---- weakly inhomogeneous magnetodielectric media -------------------------

// Curl-form kernel with the position-dependent coefficients inserted
// pointwise: diag(σ∥^{1/2}) ∓ i C diag(γ^{1/2}). Only correct when the
// coefficients are constant.
DiscreteKernel naive_inhomogeneous_K(const std::vector<double>& sigma_par,
                                     const std::vector<double>& gamma, GridPtr grid,
                                     Branch b = Branch::upper);

// First-order kernel K₀′ + ½Δσ M₀ around the background (σ∥₀, γ₀), with
// M₀ = (K₀′†)⁻¹ built from the Yukawa function of range α = (γ₀/σ∥₀)^{1/2}.
DiscreteKernel perturbative_K(const std::vector<double>& sigma_par, const std::vector<double>& gamma,
                              double sigma_par0, double gamma0, GridPtr grid,
                              Branch b = Branch::upper);

// m₀(r) = −e^{−r/α}/(4πr)
double yukawa_m0(double r, double alpha);
// k-space transform of m₀: −α²/(1 + α²k²)
double yukawa_m0_k(double k, double alpha);

// M₀ = σ∥₀^{-1/2} ± iγ₀^{-1/2} ∇×m₀ + σ∥₀^{-1/2} ∇×m₀×∇′, built from the
// Yukawa symbol on a periodic box.
DiscreteKernel yukawa_M0(double sigma_par0, double gamma0, GridPtr grid, Branch b = Branch::upper);

}  // namespace dqed
