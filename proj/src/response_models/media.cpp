#include <cmath>

#include "dqed/core/errors.hpp"
#include "dqed/response_models.hpp"

namespace dqed {

LocalAnisotropic LocalAnisotropic::drude(const std::array<DrudeLorentzParams, 3>& axis_params,
                                         const Mat3& axes) {
  if ((axes.transpose() * axes - Mat3::Identity()).norm() > 1e-12)
    throw ParameterError("local anisotropic: principal axes must be orthonormal");
  LocalAnisotropic m;
  m.values = [axis_params](const Vec3&, cd w) {
    std::array<cd, 3> q;
    for (int i = 0; i < 3; ++i) q[i] = conductivity_from_epsilon(eval_epsilon(axis_params[i], w), w);
    return q;
  };
  m.axes = [axes](const Vec3&) { return axes; };
  return m;
}

MagnetoDielectric MagnetoDielectric::homogeneous(const DrudeLorentzParams& electric,
                                                 const DrudeLorentzParams& magnetic) {
  MagnetoDielectric m;
  m.epsilon = [electric](const Vec3&, cd w) { return eval_epsilon(electric, w); };
  m.kappa = [magnetic](const Vec3&, cd w) { return eval_kappa(magnetic, w); };
  return m;
}

Mat3c HomogeneousKSpace::tensor(const Vec3& k, cd w) const {
  const double k2 = k.squaredNorm();
  auto [qp, qt] = q(cd(k2), w);
  if (k2 == 0.0) return qt * Mat3c::Identity();  // k = 0 counts as transverse
  const Mat3 kk = k * k.transpose() / k2;
  return qp * kk.cast<cd>() + qt * (Mat3::Identity() - kk).cast<cd>();
}

HomogeneousKSpace HomogeneousKSpace::vacuum() {
  HomogeneousKSpace m;
  m.name = "vacuum";
  m.q = [](cd, cd) { return std::pair<cd, cd>{0.0, 0.0}; };
  m.k_scale = [](cd w) { return std::abs(w); };
  return m;
}

HomogeneousKSpace HomogeneousKSpace::dielectric(cd eps) {
  HomogeneousKSpace m;
  m.name = "dielectric";
  m.q = [eps](cd, cd w) {
    const cd q = conductivity_from_epsilon(eps, w);
    return std::pair<cd, cd>{q, q};
  };
  m.k_scale = [eps](cd w) { return std::abs(w) * std::sqrt(std::abs(eps)); };
  return m;
}

HomogeneousKSpace HomogeneousKSpace::local_drude(const DrudeLorentzParams& p) {
  HomogeneousKSpace m;
  m.name = "local_drude";
  m.q = [p](cd, cd w) {
    const cd q = conductivity_from_epsilon(eval_epsilon(p, w), w);
    return std::pair<cd, cd>{q, q};
  };
  m.k_scale = [p](cd w) { return std::max(std::abs(w), p.plasma_frequency); };
  return m;
}

HomogeneousKSpace HomogeneousKSpace::hydrodynamic(double wp, double gd, double beta) {
  HomogeneousKSpace m;
  m.name = "hydrodynamic";
  m.q = [wp, gd, beta](cd k2, cd w) { return hydrodynamic_kspace_k2(wp, gd, beta, k2, w); };
  m.k_scale = [wp, beta](cd w) {
    const double light = std::max(std::abs(w), wp);
    return beta > 0.0 ? std::max(light, light / beta) : light;
  };
  return m;
}

HomogeneousKSpace HomogeneousKSpace::magnetodielectric(const DrudeLorentzParams& electric,
                                                       const DrudeLorentzParams& magnetic) {
  HomogeneousKSpace m;
  m.name = "magnetodielectric";
  m.q = [electric, magnetic](cd k2, cd w) {
    const cd q1 = conductivity_from_epsilon(eval_epsilon(electric, w), w);
    const cd q2 = -I_unit * (1.0 - eval_kappa(magnetic, w)) / w;
    return std::pair<cd, cd>{q1, q1 + q2 * k2};
  };
  m.k_scale = [electric](cd w) { return std::max(std::abs(w), electric.plasma_frequency); };
  m.magnetic_like = magnetic.plasma_frequency > 0.0;
  return m;
}

const HomogeneousKSpace& CellLattice::model_for(const std::array<int, 3>& L) const {
  auto it = models.find(L);
  return it == models.end() ? fallback : it->second;
}

}  // namespace dqed
