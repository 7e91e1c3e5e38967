#pragma once

#include <string>

#include "dqed/core/grid.hpp"

namespace dqed {

// H = ∇×∇× − ω² − iωQ on a periodic box (curl-curl taken spectrally).
struct HelmholtzOperator {
  DiscreteKernel h;
  DiscreteKernel q;  // the conductivity it was built from
  cd w;
};

// Throws UnsupportedError off periodic boxes, ContractError if Q is not
// reciprocal to 1e-12.
HelmholtzOperator build_H(const DiscreteKernel& q, cd w);

struct GreenSolution {
  DiscreteKernel g;
  DiscreteKernel q;
  cd w;
  double residual = 0.0;     // ‖H·G − 1‖ / ‖1‖
  double reciprocity = 0.0;  // ‖G − Gᵀ-swap‖ / ‖G‖
};

// Dense LU solve. Throws LossDeficiencyError when H is singular or the
// residual exceeds 1e-10.
GreenSolution solve_green(const HelmholtzOperator& h);

// ‖ω G σ G† − Im G‖ / ‖Im G‖ at real ω. σ must be the Hermitian part of the
// Q behind the solve (ContractError otherwise).
double verify_integral_relation(const GreenSolution& g, const DiscreteKernel& sigma);

// Advisory check that losses damp fields within the periodic box, so images
// from neighbouring cells do not dominate. Uses the mean local response.
struct PreflightReport {
  double decay_length = 0.0;  // 1/Im k of the slowest transverse wave
  double box_length = 0.0;    // shortest box edge
  double lengths_across = 0.0;
  bool ok = false;
  std::string message;
};
PreflightReport preflight(const DiscreteKernel& q, cd w, double min_lengths = 3.0);

}  // namespace dqed
