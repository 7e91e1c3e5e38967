#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "dqed/bulk_green.hpp"
#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/grid_green_solver.hpp"
#include "dqed/operator_algebra.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed::cli {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }

CheckResult verdict(bool ok, double measured, double threshold, std::string detail) {
  CheckResult c;
  c.status = ok ? Status::pass : Status::fail;
  c.measured = measured;
  c.threshold = threshold;
  c.detail = std::move(detail);
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

DrudeLorentzParams random_oscillator(Rng& r) {
  return {uniform(r, 0.5, 2.0), uniform(r, 0.05, 0.5), uniform(r, 0.0, 1.0)};
}

Mat3 random_rotation(Rng& r) {
  Mat3 a;
  for (int i = 0; i < 9; ++i) a(i) = uniform(r, -1.0, 1.0);
  return Eigen::HouseholderQR<Mat3>(a).householderQ();
}

// ---- individual checks --------------------------------------------------

CheckResult kernel_sqrt(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const cd w(uniform(r, 0.5, 1.5), 0.0);
  std::vector<DiscreteKernel> sig;

  sig.push_back(hermitian_split(local_anisotropic_kernel(
                                    LocalAnisotropic::drude({random_oscillator(r), random_oscillator(r),
                                                             random_oscillator(r)},
                                                            random_rotation(r)),
                                    w, g))
                    .sigma);
  std::vector<cd> eps(g->size()), kap(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    eps[i] = cd(uniform(r, 1.0, 4.0), uniform(r, 0.05, 1.0));
    kap[i] = 1.0 / cd(uniform(r, 1.0, 2.0), uniform(r, 0.05, 0.5));
  }
  sig.push_back(hermitian_split(magnetodielectric_kernel(eps, kap, w, g)).sigma);
  sig.push_back(hermitian_split(homogeneous_kernel(
                                    HomogeneousKSpace::hydrodynamic(uniform(r, 0.5, 2.0), uniform(r, 0.05, 0.5),
                                                                    uniform(r, 0.05, 0.3)),
                                    w, g))
                    .sigma);
  CellLattice lat;
  lat.cell = Vec3(1.0, 1.0, 1.0);
  lat.models[{0, 0, 0}] = HomogeneousKSpace::local_drude(random_oscillator(r));
  lat.models[{1, 1, 0}] = HomogeneousKSpace::hydrodynamic(1.0, uniform(r, 0.05, 0.5), 0.1);
  lat.fallback = HomogeneousKSpace::dielectric(cd(2.0, uniform(r, 0.05, 0.5)));
  sig.push_back(cell_lattice_sigma(lat, w, g));

  double worst = 0.0;
  for (const auto& s : sig) worst = std::max(worst, sqrt_residual(sqrt_kernel(s), s));
  return verdict(worst <= 1e-10, worst, 1e-10,
                 "local anisotropic, magnetodielectric, hydrodynamic and cell-lattice media on 4^3");
}

CheckResult gauge(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const IsotropicSigma s = IsotropicSigma::magnetodielectric(uniform(r, 0.3, 1.5), uniform(r, 0.1, 0.5));
  const DiscreteKernel sigma = isotropic_sigma_kernel(s, g);
  const DiscreteKernel k = isotropic_sqrt_kernel(s, g);
  const DiscreteKernel kc = curl_form_kernel(s, g);
  const DiscreteKernel kv = gauge_transform(k, curl_gauge(s, g));
  const double asym = hermiticity_residual(kc);
  const double res = std::max(sqrt_residual(kc, sigma), relative_frobenius(kv.m, kc.m));

  std::vector<std::array<int, 2>> signs(g->size());
  for (auto& p : signs) p = {r() % 2 ? 1 : -1, r() % 2 ? 1 : -1};
  const DiscreteKernel kf = gauge_transform(k, sign_flip_gauge(signs, g));
  const double flip = std::max(hermiticity_residual(kf), sqrt_residual(kf, sigma));
  const double measured = std::max(res, flip);
  const bool ok = asym > 1e-3 && measured <= 1e-10;
  return verdict(ok, measured, 1e-10,
                 "curl-form root asymmetry " + fmt(asym) + " (needs > 1e-3); sign flips keep Hermiticity");
}

CheckResult projectors(std::uint64_t) {
  const GridPtr g = Grid::periodic_box({4, 6, 5}, {2.0, 3.0, 2.5});
  const ProjectorFamily f = helmholtz_projectors(g);
  const double worst =
      std::max({f.idempotency_residual(), f.orthogonality_residual(), f.completeness_residual()});
  return verdict(worst <= 1e-12, worst, 1e-12, "longitudinal/transverse pair on a 4x6x5 box");
}

CheckResult kk(std::uint64_t seed) {
  Rng r(seed);
  const std::vector<double> grid = kk_standard_grid();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    DrudeLorentzParams p = random_oscillator(r);
    if (i == 0) p.resonance = 0.0;
    const auto rep = kramers_kronig_residual(
        [&](cd w) { return conductivity_from_epsilon(eval_epsilon(p, w), w); }, grid);
    if (rep.flagged) return verdict(false, rep.residual, 1e-3, "tail flagged as non-integrable");
    worst = std::max(worst, rep.residual);
  }
  return verdict(worst < 1e-3, worst, 1e-3, "Drude and Lorentz conductivities on the 2048-point grid");
}

CheckResult schwarz(std::uint64_t seed) {
  Rng r(seed);
  int failures = 0, total = 0;
  for (int i = 0; i < 20; ++i) {
    const DrudeLorentzParams p = random_oscillator(r);
    const cd w(uniform(r, -3.0, 3.0), uniform(r, 0.0, 1.0));
    const auto hyd = HomogeneousKSpace::hydrodynamic(p.plasma_frequency, p.damping, uniform(r, 0.01, 0.3));
    const Vec3 k(uniform(r, -2, 2), uniform(r, -2, 2), uniform(r, -2, 2));
    total += 3;
    failures += !schwarz_check([&](cd x) { return conductivity_from_epsilon(eval_epsilon(p, x), x); }, w);
    failures += !schwarz_check([&](cd x) { return -I_unit * x * (eval_kappa(p, x) - 1.0); }, w);
    failures += !schwarz_check(std::function<Mat3c(cd)>([&](cd x) { return hyd.tensor(k, x); }), w);
  }
  return verdict(failures == 0, failures, 0.0,
                 std::to_string(total) + " Drude, magnetic and hydrodynamic responses at random w");
}

CheckResult integral_relation(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {3.0, 3.0, 3.0});
  const cd w(uniform(r, 0.5, 1.5), 0.0);
  double worst = 0.0;
  for (const HomogeneousKSpace& m :
       {HomogeneousKSpace::local_drude(random_oscillator(r)),
        HomogeneousKSpace::hydrodynamic(uniform(r, 0.5, 1.5), uniform(r, 0.1, 0.5), 0.1)}) {
    const DiscreteKernel q = homogeneous_kernel(m, w, g);
    const GreenSolution s = solve_green(build_H(q, w));
    worst = std::max(worst, verify_integral_relation(s, hermitian_split(q).sigma));
  }
  return verdict(worst <= 1e-9, worst, 1e-9, "local Drude and hydrodynamic media on 4^3");
}

CheckResult reciprocity(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {3.0, 3.0, 3.0});
  const cd w(uniform(r, 0.5, 1.5), 0.0);
  CellLattice lat;
  lat.cell = Vec3(1.5, 1.5, 1.5);
  lat.models[{0, 0, 0}] = HomogeneousKSpace::hydrodynamic(1.0, 0.2, 0.1);
  lat.fallback = HomogeneousKSpace::local_drude(random_oscillator(r));
  const GreenSolution gs = solve_green(build_H(cell_lattice_kernel(lat, w, g), w));
  const double grid_res = gs.reciprocity;

  SlabMedia m{HomogeneousKSpace::dielectric(cd(uniform(r, 1, 3), uniform(r, 0.01, 0.3))),
              HomogeneousKSpace::local_drude(random_oscillator(r)),
              HomogeneousKSpace::hydrodynamic(1.0, 0.2, 0.05), uniform(r, 0.5, 1.5)};
  const Vec2 q(uniform(r, -1, 1), uniform(r, -1, 1));
  const cd ws(uniform(r, 0.5, 1.5), 0.05);
  const SlabGreen plus(m, q, ws), minus(m, -q, ws);
  const double zp = 0.3 * m.d, z = 0.8 * m.d;
  const Mat3c a = plus.green(zp, z), b = minus.green(z, zp).transpose();
  const double slab_res = (a - b).norm() / a.norm();
  const bool ok = grid_res <= 1e-10 && slab_res <= 1e-9;
  return verdict(ok, std::max(grid_res / 1e-10, slab_res / 1e-9), 1.0,
                 "grid solve " + fmt(grid_res) + " (<= 1e-10), slab sample " + fmt(slab_res) +
                     " (<= 1e-9); measured is the worst ratio to its bound");
}

CheckResult e3_identity(std::uint64_t seed) {
  Rng r(seed);
  auto block = [&] {
    TangentialBlock x;
    for (int i = 0; i < 4; ++i) x(i) = cd(uniform(r, -1, 1), uniform(r, -1, 1));
    return x;
  };
  double worst = 0.0;
  int used = 0;
  while (used < 1000) {
    const TangentialBlock a = block(), b = block(), c = block(), d = block();
    bool good = true;
    for (const TangentialBlock* x : {&a, &b, &c, &d}) good = good && std::abs(x->determinant()) > 0.1;
    Eigen::Matrix4cd big;
    big << a, b, c, d;
    if (!good || 1.0 / big.fullPivLu().rcond() > 1e3) continue;
    worst = std::max(worst, block_identity_residual(a, b, c, d));
    ++used;
  }
  return verdict(worst <= 1e-12, worst, 1e-12, "1000 random well-conditioned 2x2 block quadruples");
}

CheckResult slab_local_oracle(std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const std::array<cd, 3> eps{cd(uniform(r, 1, 4), uniform(r, 0.01, 0.5)), cd(uniform(r, 1, 4), uniform(r, 0.01, 0.5)),
                                cd(uniform(r, 1, 4), uniform(r, 0.01, 0.5))};
    const double d = uniform(r, 0.5, 2.0);
    const SlabMedia m{HomogeneousKSpace::dielectric(eps[0]), HomogeneousKSpace::dielectric(eps[1]),
                      HomogeneousKSpace::dielectric(eps[2]), d};
    const Vec2 q(uniform(r, -2, 2), uniform(r, -2, 2));
    const cd w(uniform(r, 0.3, 2.0), uniform(r, 0.0, 0.1));
    const SlabGreen sg(m, q, w);
    for (auto [zp, z] : {std::pair{0.25 * d, 0.6 * d}, std::pair{0.7 * d, 0.2 * d}}) {
      const Mat3c a = sg.green(zp, z), b = transfer_matrix_green(eps, d, q, w, zp, z);
      worst = std::max(worst, (a - b).norm() / b.norm());
    }
  }
  return verdict(worst <= 1e-8, worst, 1e-8, "dielectric three-layer stacks against a transfer-matrix solution");
}

CheckResult kf_vacuum(std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double q = uniform(r, 0.05, 3.0);
    const cd w(uniform(r, 0.1, 2.0), uniform(r, 0.0, 0.2));
    cd kappa = std::sqrt(q * q - w * w);
    if (kappa.real() < 0.0) kappa = -kappa;
    const cd exact = I_unit * w / (8.0 * pi * pi * kappa);
    const ImpedancePair z = kliever_fuchs(HomogeneousKSpace::vacuum(), q, w);
    worst = std::max(worst, std::abs(z.zs - exact) / std::abs(exact));
  }
  return verdict(worst <= 1e-8, worst, 1e-8, "Z_s against i w / (8 pi^2 kappa) at 10 random (q, w)");
}

CheckResult kf_local(std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double q = uniform(r, 0.05, 3.0);
    const cd w(uniform(r, 0.1, 2.0), uniform(r, 0.0, 0.2));
    const cd eps(uniform(r, 1.0, 5.0), uniform(r, 0.01, 1.0));
    cd kappa = std::sqrt(q * q - eps * w * w);
    if (kappa.real() < 0.0) kappa = -kappa;
    const cd zs = I_unit * w / (8.0 * pi * pi * kappa);
    const cd zp = -I_unit * kappa / (8.0 * pi * pi * eps * w);
    const ImpedancePair z = kliever_fuchs(HomogeneousKSpace::dielectric(eps), q, w);
    worst = std::max({worst, std::abs(z.zs - zs) / std::abs(zs), std::abs(z.zp - zp) / std::abs(zp)});
  }
  return verdict(worst <= 1e-8, worst, 1e-8, "Z_s and Z_p of a dielectric against the Fresnel forms");
}

// Smooth periodic profiles on [0, 2)^3.
double profile(int kind, const Vec3& p) {
  switch (kind) {
    case 0: return std::sin(pi * p.x());
    case 1: return std::cos(pi * p.y()) * std::sin(pi * p.z());
    default: return std::sin(pi * (p.x() + p.y()));
  }
}

CheckResult perturbative_scaling(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const double s0 = uniform(r, 0.4, 1.0), g0 = uniform(r, 0.1, 0.5);
  const double eps = 0.1;
  double lo = 1.0, hi = 0.0;
  for (int kind = 0; kind < 3; ++kind) {
    double res[2];
    for (int j = 0; j < 2; ++j) {
      const double e = j == 0 ? eps : eps / 2;
      std::vector<double> s(g->size()), gm(g->size());
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double f = profile(kind, g->points[i]);
        s[i] = s0 * (1.0 + e * f);
        gm[i] = g0 * (1.0 + 0.5 * e * f);
      }
      res[j] = sqrt_residual(perturbative_K(s, gm, s0, g0, g), magnetodielectric_sigma(s, gm, g));
    }
    lo = std::min(lo, res[1] / res[0]);
    hi = std::max(hi, res[1] / res[0]);
  }
  const bool ok = lo >= 0.2 && hi <= 0.35;
  return verdict(ok, hi, 0.35, "residual(eps/2)/residual(eps) in [" + fmt(lo) + ", " + fmt(hi) +
                                   "] over three profiles (bounds 0.2, 0.35)");
}

// Triangle wave in x: linear ramps that stay continuous on the periodic box.
std::pair<std::vector<double>, std::vector<double>> linear_gamma(const Grid& g, double s0, double g0) {
  std::vector<double> s(g.size(), s0), gm(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.points[i].x() / g.length[0];
    gm[i] = g0 * (1.0 + 0.05 * (x < 0.5 ? 4.0 * x - 1.0 : 3.0 - 4.0 * x));
  }
  return {s, gm};
}

CheckResult naive_negative(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const double s0 = uniform(r, 0.4, 1.0), g0 = uniform(r, 0.1, 0.5);
  const auto [s, gm] = linear_gamma(*g, s0, g0);
  const DiscreteKernel sigma = magnetodielectric_sigma(s, gm, g);
  const double naive = sqrt_residual(naive_inhomogeneous_K(s, gm, g), sigma);
  const double pert = sqrt_residual(perturbative_K(s, gm, s0, g0, g), sigma);
  return verdict(naive <= 1e-3, naive, 1e-3,
                 "pointwise curl-form kernel as a square root; perturbative kernel on the same field gives " +
                     fmt(pert));
}

CheckResult bulk_modes(std::uint64_t seed) {
  Rng r(seed);
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {3.0, 3.0, 3.0});
  const cd w(uniform(r, 0.5, 1.5), 0.0);
  const auto m = HomogeneousKSpace::hydrodynamic(1.0, uniform(r, 0.1, 0.5), 0.1);
  const GreenSolution s = solve_green(build_H(homogeneous_kernel(m, w, g), w));
  const MatXc gk = to_kspace(*g, s.g.m);
  const std::vector<Vec3> ks = wavevectors(*g);
  double worst = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Mat3c b = bulk_green_k(m, ks[i], w);
    const Mat3c a = gk.block<3, 3>(3 * i, 3 * i);
    worst = std::max(worst, (a - b).norm() / b.norm());
  }
  return verdict(worst <= 1e-10, worst, 1e-10, "grid Green function per Fourier mode against the bulk tensor");
}

CheckResult slab_vacuum(std::uint64_t seed) {
  Rng r(seed);
  const SlabMedia m{HomogeneousKSpace::vacuum(), HomogeneousKSpace::vacuum(), HomogeneousKSpace::vacuum(), 1.0};
  const Vec2 q(uniform(r, -1, 1), uniform(r, -1, 1));
  const cd w(uniform(r, 0.3, 1.5), 0.05);
  const double zp = 0.3, z = 0.65;
  const Mat3c a = slab_green(m, q, w, zp, z);
  const Mat3c b = partial_fourier(HomogeneousKSpace::vacuum(), z - zp, Side::none, -q, w).g;
  const double res = (a - b).norm() / b.norm();
  return verdict(res <= 1e-9, res, 1e-9, "all-vacuum stack against the bulk tensor");
}

std::vector<CheckInfo> build_registry() {
  return {
      {"kernel-sqrt", "operator_algebra", "K K^dagger = sigma for random lossy media",
       "square-root factorization of the dissipative kernel", true, kernel_sqrt},
      {"gauge", "operator_algebra", "curl-form root is non-Hermitian yet a valid root; sign flips keep Hermiticity",
       "gauge freedom K -> K V with unitary V", true, gauge},
      {"projectors", "operator_algebra", "Helmholtz projectors are idempotent, orthogonal and complete",
       "longitudinal/transverse decomposition on a periodic box", true, projectors},
      {"kk", "response_models", "Kramers-Kronig residual of Drude-family conductivities below 1e-3",
       "causality of the response function", true, kk},
      {"schwarz", "response_models", "Q*(w) = Q(-w*) for Drude, magnetic and hydrodynamic responses",
       "reality of the time-domain response", true, schwarz},
      {"integral-relation", "grid_green_solver", "w G sigma G^dagger = Im G on a periodic grid",
       "generalized integral relation behind fluctuation-dissipation", true, integral_relation},
      {"reciprocity", "grid_green_solver", "G equals its transpose-swap on grids and slabs",
       "Onsager reciprocity of the Green tensor", true, reciprocity},
      {"e3-identity", "planar_slab", "four-inverse block formula inverts random 2x2 block quadruples",
       "block inverse from sharp-inverses of the four blocks", true, e3_identity},
      {"slab-local-oracle", "planar_slab", "slab Green tensor of local layers matches a transfer-matrix solution",
       "surface-admittance construction of the slab field", true, slab_local_oracle},
      {"kf-vacuum", "bulk_green", "vacuum Z_s matches the residue closed form",
       "Kliever-Fuchs surface impedance", true, kf_vacuum},
      {"kf-local", "bulk_green", "dielectric Z_s and Z_p match the Fresnel impedances",
       "Kliever-Fuchs surface impedance, local limit", true, kf_local},
      {"perturbative-scaling", "operator_algebra", "first-order kernel residual shrinks as eps^2",
       "first-order square root for weakly inhomogeneous media", true, perturbative_scaling},
      {"naive-negative", "operator_algebra",
       "pointwise curl-form kernel is NOT a square root for varying gamma (expected to fail)",
       "counterexample: position-dependent coefficients inserted into the homogeneous root", false,
       naive_negative},
      {"bulk-modes", "grid_green_solver", "grid solve reproduces the bulk Green tensor mode by mode",
       "translation-invariant Green tensor in k-space", true, bulk_modes},
      {"slab-vacuum", "planar_slab", "an all-vacuum slab reproduces the bulk tensor",
       "surface-admittance construction, trivial stack", true, slab_vacuum},
  };
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "error";
  }
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> r = build_registry();
  return r;
}

const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_registry())
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<const CheckInfo*> list_checks(const std::string& filter) {
  std::vector<const CheckInfo*> out;
  for (const auto& c : check_registry())
    if (filter.empty() || c.name.find(filter) != std::string::npos || c.module.find(filter) != std::string::npos)
      out.push_back(&c);
  return out;
}

CheckResult run_check(const CheckInfo& c, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = c.run(seed);
  } catch (const std::exception& e) {
    r.status = Status::error;
    r.detail = e.what();
  }
  r.name = c.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace dqed::cli
