#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dqed/core/grid.hpp"
#include "dqed/core/types.hpp"

namespace dqed {

// ε(ω) = 1 + ω_p²/(ω_0² − ω² − iγω). The same triple parameterizes the
// permeability μ(ω) of magnetodielectric media, with κ = 1/μ.
struct DrudeLorentzParams {
  double plasma_frequency = 0.0;
  double damping = 0.0;
  double resonance = 0.0;
};

cd eval_epsilon(const DrudeLorentzParams& p, cd w);
cd eval_kappa(const DrudeLorentzParams& magnetic, cd w);

// Conductivity from a dielectric function: Q = −iω(ε − 1).
inline cd conductivity_from_epsilon(cd eps, cd w) { return -I_unit * w * (eps - 1.0); }

// Hydrodynamic Drude closure, returns (Q∥, Q⊥). The k² overload accepts a
// complex argument for contour work.
std::pair<cd, cd> hydrodynamic_kspace(double wp, double gd, double beta, double k, cd w);
std::pair<cd, cd> hydrodynamic_kspace_k2(double wp, double gd, double beta, cd k2, cd w);

// ---- medium models ------------------------------------------------------

using ScalarField = std::function<cd(const Vec3& r, cd w)>;

// Q(r) = Σ_i q_i(r,ω) e_i e_iᵀ with real orthonormal axes (columns).
struct LocalAnisotropic {
  std::function<std::array<cd, 3>(const Vec3& r, cd w)> values;
  std::function<Mat3(const Vec3& r)> axes;

  static LocalAnisotropic drude(const std::array<DrudeLorentzParams, 3>& axis_params,
                                const Mat3& axes = Mat3::Identity());
};

struct MagnetoDielectric {
  ScalarField epsilon;
  ScalarField kappa;

  static MagnetoDielectric homogeneous(const DrudeLorentzParams& electric,
                                       const DrudeLorentzParams& magnetic);
};

// Translation-invariant isotropic medium, Q(k) = Q∥ k̂k̂ + Q⊥(I − k̂k̂).
struct HomogeneousKSpace {
  std::string name = "custom";
  std::function<std::pair<cd, cd>(cd k2, cd w)> q;  // (Q∥, Q⊥)
  // Wavenumber where the response varies, used to place quadrature panels.
  std::function<double(cd w)> k_scale;
  // Curl-type (magnetic-like) terms make Q⊥ grow like k²; such media are
  // excluded from the layered pipeline.
  bool magnetic_like = false;

  std::pair<cd, cd> eval(double k, cd w) const { return q(cd(k * k), w); }
  Mat3c tensor(const Vec3& k, cd w) const;

  static HomogeneousKSpace vacuum();
  static HomogeneousKSpace dielectric(cd eps);  // frequency-independent ε
  static HomogeneousKSpace local_drude(const DrudeLorentzParams& p);
  static HomogeneousKSpace hydrodynamic(double wp, double gd, double beta);
  static HomogeneousKSpace magnetodielectric(const DrudeLorentzParams& electric,
                                             const DrudeLorentzParams& magnetic);
};

// Unit cells of shape `cell` tiling the box. Cells without an entry in
// `models` use `fallback`.
struct CellLattice {
  Vec3 cell{1.0, 1.0, 1.0};
  std::map<std::array<int, 3>, HomogeneousKSpace> models;
  HomogeneousKSpace fallback = HomogeneousKSpace::vacuum();

  double volume() const { return cell.prod(); }
  const HomogeneousKSpace& model_for(const std::array<int, 3>& L) const;
};

using MediumModel = std::variant<LocalAnisotropic, MagnetoDielectric, HomogeneousKSpace, CellLattice>;

// ---- kernels ------------------------------------------------------------

// Q = diag(Q1) + C diag(Q2) C with Q1 = −iω(ε−1), Q2 = −iκ₀(1−κ)/ω and C the
// grid curl. Rejects fields whose dissipative part is negative at real ω.
DiscreteKernel magnetodielectric_kernel(const std::vector<cd>& eps, const std::vector<cd>& kappa,
                                        cd w, GridPtr grid);

// σ = diag(σ∥) + C diag(γ) C, assembled from the dissipative coefficients.
DiscreteKernel magnetodielectric_sigma(const std::vector<double>& sigma_par,
                                       const std::vector<double>& gamma, GridPtr grid);

DiscreteKernel local_anisotropic_kernel(const LocalAnisotropic& m, cd w, GridPtr grid);
DiscreteKernel homogeneous_kernel(const HomogeneousKSpace& m, cd w, GridPtr grid);

// Bulk kernel of each cell's model, kept only where r and r′ share a cell.
DiscreteKernel cell_lattice_kernel(const CellLattice& m, cd w, GridPtr grid);
// Hermitian part of cell_lattice_kernel.
DiscreteKernel cell_lattice_sigma(const CellLattice& m, cd w, GridPtr grid);
// Cell coordinate of every grid point; throws LayoutError when the grid does
// not resolve each cell with at least two points per axis.
std::vector<std::array<int, 3>> cell_assignment(const CellLattice& m, const Grid& grid);

DiscreteKernel conductivity_kernel(const MediumModel& m, cd w, GridPtr grid);

struct HermitianSplit {
  DiscreteKernel sigma;  // (Q + Q†)/2
  DiscreteKernel tau;    // (Q − Q†)/2i
};
HermitianSplit hermitian_split(const DiscreteKernel& q);

// Smallest eigenvalue of σ relative to ‖σ‖₂; throws PositivityError below
// −tol.
double check_positive(const DiscreteKernel& sigma, double tol = 1e-10);

// ---- analytic-response checks ---------------------------------------------

using ScalarResponse = std::function<cd(cd w)>;

struct KramersKronigReport {
  double residual = 0.0;
  double tail_fraction = 0.0;  // share of the tail model in ‖H Re Q‖
  double tail_exponent = 0.0;  // fitted decay power of Re Q
  bool flagged = false;        // non-integrable tail (non-causal model)
};

// Symmetric grid with `n` points: n/2 log-spaced magnitudes in [lo, hi]
// mirrored to negative frequencies. The standard grid is n = 2048 on
// [1e-4, 1e4] in units of the model's frequency scale.
std::vector<double> kk_standard_grid(int n = 2048, double lo = 1e-4, double hi = 1e4);

// Relative L² mismatch between Im Q and the Hilbert transform of Re Q.
KramersKronigReport kramers_kronig_residual(const ScalarResponse& q, const std::vector<double>& grid);

// Q*(ω) == Q(−ω*) to `tol` relative, componentwise.
bool schwarz_check(const ScalarResponse& q, cd w, double tol = 1e-12);
bool schwarz_check(const std::function<Mat3c(cd)>& q, cd w, double tol = 1e-12);

}  // namespace dqed
