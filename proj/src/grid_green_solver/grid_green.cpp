#include <cmath>
#include <limits>
#include <sstream>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/grid_green_solver.hpp"

namespace dqed {

HelmholtzOperator build_H(const DiscreteKernel& q, cd w) {
  if (!q.grid || !q.grid->periodic()) throw UnsupportedError("build_H: periodic box required");
  const double rec = reciprocity_residual(q);
  if (rec > 1e-12) throw ContractError("build_H: conductivity is not reciprocal, residual " + std::to_string(rec));
  const MatX c = curl_matrix(*q.grid);
  MatXc h = (c * c).cast<cd>() - I_unit * w * q.m;
  h.diagonal().array() -= w * w;
  return {DiscreteKernel(q.grid, std::move(h)), q, w};
}

GreenSolution solve_green(const HelmholtzOperator& op) {
  const MatXc& h = op.h.m;
  Eigen::PartialPivLU<MatXc> lu(h);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "solve_green: H is singular (rcond " << rcond << "); add loss or move w off the real axis";
    throw LossDeficiencyError(os.str());
  }
  const Eigen::Index n = h.rows();
  MatXc g = lu.solve(MatXc::Identity(n, n));
  GreenSolution s{DiscreteKernel(op.h.grid, std::move(g)), op.q, op.w};
  s.residual = (h * s.g.m - MatXc::Identity(n, n)).norm() / std::sqrt(static_cast<double>(n));
  s.reciprocity = reciprocity_residual(s.g);
  if (s.residual > 1e-10)
    throw LossDeficiencyError("solve_green: residual " + std::to_string(s.residual) + " above 1e-10");
  return s;
}

double verify_integral_relation(const GreenSolution& s, const DiscreteKernel& sigma) {
  if (s.w.imag() != 0.0) throw DomainError("verify_integral_relation: real frequency required");
  require_same_grid(s.g, sigma);
  const MatXc herm = 0.5 * (s.q.m + s.q.m.adjoint());
  const double mismatch = (herm - sigma.m).norm() / std::max(herm.norm(), 1e-300);
  if (mismatch > 1e-12)
    throw ContractError("verify_integral_relation: sigma is not the Hermitian part of the solved Q");
  const MatXc& g = s.g.m;
  const MatXc im_g = (g - g.conjugate()) / (2.0 * I_unit);
  const MatXc lhs = s.w.real() * g * sigma.m * g.adjoint();
  const double den = im_g.norm();
  if (den == 0.0) return (lhs - im_g).norm();
  return (lhs - im_g).norm() / den;
}

PreflightReport preflight(const DiscreteKernel& q, cd w, double min_lengths) {
  PreflightReport r;
  const Grid& g = *q.grid;
  r.box_length = std::min({g.length[0], g.length[1], g.length[2]});
  // Long-wavelength response: the k = 0 symbol averaged over the box, i.e.
  // Σ_j Q̃(r_i, r_j) per component, averaged over i.
  cd mean = 0.0;
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) mean += q.m.block<3, 3>(3 * i, 3 * j).trace() / 3.0;
  mean /= static_cast<double>(n);
  // Transverse wave: k² = ω² + iωQ; decay rate Im k.
  cd k = std::sqrt(w * w + I_unit * w * mean);
  if (k.imag() < 0.0) k = -k;
  r.decay_length = k.imag() > 0.0 ? 1.0 / k.imag() : std::numeric_limits<double>::infinity();
  r.lengths_across = r.box_length / r.decay_length;
  r.ok = r.lengths_across >= min_lengths;
  std::ostringstream os;
  os << "box spans " << r.lengths_across << " decay lengths (advisory minimum " << min_lengths << ")";
  r.message = os.str();
  return r;
}

}  // namespace dqed
