#pragma once

// Internally everything runs in natural units c = ε₀ = μ₀ = 1 with a free
// length scale ℓ. These helpers translate SI inputs at the API boundary.

namespace dqed::units {

inline constexpr double c_si = 299792458.0;
inline constexpr double eps0_si = 8.8541878128e-12;
inline constexpr double mu0_si = 1.25663706212e-6;

struct Scale {
  double length_m = 1e-6;  // ℓ

  double omega_to_natural(double w_si) const { return w_si * length_m / c_si; }
  double omega_to_si(double w) const { return w * c_si / length_m; }
  double wavenumber_to_natural(double k_si) const { return k_si * length_m; }
  double wavenumber_to_si(double k) const { return k / length_m; }
  double length_to_natural(double x_m) const { return x_m / length_m; }
  double length_to_si(double x) const { return x * length_m; }
  // Conductivity carries ε₀ω: Q_nat = Q_si · ℓ / (ε₀ c).
  double conductivity_to_natural(double q_si) const { return q_si * length_m / (eps0_si * c_si); }
  double conductivity_to_si(double q) const { return q * eps0_si * c_si / length_m; }
};

}  // namespace dqed::units
