// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dqed/bulk_green.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/grid_green_solver.hpp"
#include "dqed/operator_algebra.hpp"
#include "dqed/planar_slab.hpp"
#include "dqed/response_models.hpp"
#include "support.hpp"

using namespace dqed;
using namespace dqed::test;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Shared between the fluctuation-dissipation and reciprocity criteria.
double grid_reciprocity_worst = -1.0;
int grid_solves = 0;

DrudeLorentzParams random_oscillator(Rng& r) {
  return {uniform(r, 0.5, 2.0), uniform(r, 0.05, 0.5), uniform(r, 0.0, 1.0)};
}

// ---- 1 -----------------------------------------------------------------

Outcome square_root_kernel() {
  const auto t0 = Clock::now();
  Rng r(1001);
  double worst = 0.0;
  int big = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = i == 19 ? 8 : i >= 15 ? 6 : 4;
    big += n == 8;
    const double len = n / 2.0;  // unit cells resolved by two points per axis
    const GridPtr g = Grid::periodic_box({n, n, n}, {len, len, len});
    const cd w(uniform(r, 0.3, 2.0), 0.0);
    DiscreteKernel sigma;
    switch (i % 4) {
      case 0: {
        Mat3 a;
        for (int j = 0; j < 9; ++j) a(j) = uniform(r, -1, 1);
        const Mat3 axes = Eigen::HouseholderQR<Mat3>(a).householderQ();
        sigma = hermitian_split(local_anisotropic_kernel(
                                    LocalAnisotropic::drude({random_oscillator(r), random_oscillator(r),
                                                             random_oscillator(r)},
                                                            axes),
                                    w, g))
                    .sigma;
        break;
      }
      case 1: {
        std::vector<cd> eps(g->size()), kap(g->size());
        for (std::size_t j = 0; j < g->size(); ++j) {
          eps[j] = cd(uniform(r, 1, 4), uniform(r, 0.05, 1.0));
          kap[j] = 1.0 / cd(uniform(r, 1, 2), uniform(r, 0.05, 0.5));
        }
        sigma = hermitian_split(magnetodielectric_kernel(eps, kap, w, g)).sigma;
        break;
      }
      case 2:
        sigma = hermitian_split(homogeneous_kernel(HomogeneousKSpace::hydrodynamic(uniform(r, 0.5, 2),
                                                                                   uniform(r, 0.05, 0.5),
                                                                                   uniform(r, 0.02, 0.3)),
                                                   w, g))
                    .sigma;
        break;
      default: {
        CellLattice lat;
        lat.cell = Vec3(1.0, 1.0, 1.0);
        for (int c = 0; c < 3; ++c) {
          const std::array<int, 3> at{static_cast<int>(r() % (n / 2)), static_cast<int>(r() % (n / 2)),
                                      static_cast<int>(r() % (n / 2))};
          lat.models[at] = c == 0 ? HomogeneousKSpace::hydrodynamic(1.0, uniform(r, 0.05, 0.5), 0.1)
                                  : HomogeneousKSpace::local_drude(random_oscillator(r));
        }
        lat.fallback = HomogeneousKSpace::dielectric(cd(uniform(r, 1, 3), uniform(r, 0.05, 0.5)));
        sigma = cell_lattice_sigma(lat, w, g);
      }
    }
    worst = std::max(worst, sqrt_residual(sqrt_kernel(sigma), sigma));
  }
  const double t = since(t0);
  return {worst <= 1e-10 && t <= 60.0,
          fmt("worst |KK^dagger - sigma|/|sigma| = %.2e (<= 1e-10) over 20 media, %g on 8^3; %.1f s (<= 60 s)",
              worst, big, t)};
}

// ---- 2 -----------------------------------------------------------------

Outcome fluctuation_dissipation() {
  const auto t0 = Clock::now();
  const double freqs[5] = {0.35, 0.7, 1.05, 1.4, 1.75};
  double worst = 0.0;
  grid_reciprocity_worst = 0.0;
  struct Case {
    const char* name;
    HomogeneousKSpace model;
    int n;
  };
  const Case cases[] = {{"local Drude", HomogeneousKSpace::local_drude({1.0, 0.3, 0.0}), 6},
                        {"hydrodynamic", HomogeneousKSpace::hydrodynamic(1.0, 0.3, 0.2), 8}};
  std::string per_case;
  for (const Case& c : cases) {
    const GridPtr g = Grid::periodic_box({c.n, c.n, c.n}, {4.0, 4.0, 4.0});
    double case_worst = 0.0;
    for (double w : freqs) {
      const DiscreteKernel q = homogeneous_kernel(c.model, w, g);
      const GreenSolution s = solve_green(build_H(q, w));
      case_worst = std::max(case_worst, verify_integral_relation(s, hermitian_split(q).sigma));
      grid_reciprocity_worst = std::max(grid_reciprocity_worst, s.reciprocity);
      ++grid_solves;
    }
    worst = std::max(worst, case_worst);
    per_case += std::string("; ") + c.name + fmt(" on %g^3: %.2e", c.n, case_worst);
  }
  const double t = since(t0);
  return {worst <= 1e-9 && t <= 300.0,
          fmt("worst integral-relation residual %.2e (<= 1e-9) at 5 real frequencies", worst) + per_case +
              fmt("; %.1f s (<= 300 s)", t)};
}

// ---- 3 -----------------------------------------------------------------

Outcome reciprocity() {
  Rng r(1003);
  double slab_worst = 0.0;
  int samples = 0;
  for (int i = 0; i < 10; ++i) {
    auto local = [&]() {
      return r() % 2 ? HomogeneousKSpace::dielectric(cd(uniform(r, 1, 4), uniform(r, 0.01, 0.5)))
                     : HomogeneousKSpace::local_drude(random_oscillator(r));
    };
    // Local slab media; half-spaces may be nonlocal.
    const HomogeneousKSpace lower =
        i % 3 == 0 ? HomogeneousKSpace::hydrodynamic(1.0, uniform(r, 0.1, 0.3), uniform(r, 0.02, 0.2)) : local();
    const HomogeneousKSpace slab = local();
    const HomogeneousKSpace upper =
        i % 3 == 1 ? HomogeneousKSpace::hydrodynamic(1.2, uniform(r, 0.1, 0.3), uniform(r, 0.02, 0.2)) : local();
    const SlabMedia m{lower, slab, upper, uniform(r, 0.3, 2.0)};
    const Vec2 q(uniform(r, -2, 2), uniform(r, -2, 2));
    const cd w(uniform(r, 0.2, 2.0), i % 2 ? 0.0 : 0.05);
    const SlabGreen plus(m, q, w), minus(m, -q, w);
    for (auto [a, b] : {std::pair{0.1, 0.9}, std::pair{0.5, 0.2}, std::pair{0.3, 0.35}}) {
      const double zp = a * m.d, z = b * m.d;
      slab_worst = std::max(slab_worst, rel(plus.green(zp, z), minus.green(z, zp).transpose()));
      ++samples;
    }
  }
  const bool ok = grid_reciprocity_worst >= 0.0 && grid_reciprocity_worst <= 1e-10 && slab_worst <= 1e-9;
  return {ok, fmt("grid solves: worst %.2e (<= 1e-10) over %g solves; slab samples: worst %.2e (<= 1e-9) over %g",
                  grid_reciprocity_worst, grid_solves, slab_worst, samples)};
}

// ---- 4 -----------------------------------------------------------------

Outcome gauge_theorem() {
  Rng r(1004);
  const GridPtr g = Grid::periodic_box({8, 8, 8}, {4.0, 4.0, 4.0});
  const IsotropicSigma s = IsotropicSigma::magnetodielectric(0.8, 0.25);
  const DiscreteKernel sigma = isotropic_sigma_kernel(s, g);
  const DiscreteKernel k = isotropic_sqrt_kernel(s, g);
  const DiscreteKernel kc = curl_form_kernel(s, g);
  const double asym = hermiticity_residual(kc);
  const double root = sqrt_residual(kc, sigma);
  const double via_gauge = rel(gauge_transform(k, curl_gauge(s, g)).m, kc.m);

  double flip_herm = 0.0, flip_root = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::array<int, 2>> signs(g->size());
    for (auto& p : signs) p = {r() % 2 ? 1 : -1, r() % 2 ? 1 : -1};
    const DiscreteKernel kf = gauge_transform(k, sign_flip_gauge(signs, g));
    flip_herm = std::max(flip_herm, hermiticity_residual(kf));
    flip_root = std::max(flip_root, sqrt_residual(kf, sigma));
  }
  const bool ok = asym > 1e-3 && root <= 1e-10 && via_gauge <= 1e-10 && flip_herm <= 1e-10 && flip_root <= 1e-10;
  return {ok, fmt("curl-form root: asymmetry %.2e (> 1e-3), root residual %.2e (<= 1e-10); sign flips: "
                  "Hermiticity %.2e, root residual %.2e (<= 1e-10)",
                  asym, root, flip_herm, flip_root)};
}

// ---- 5, 6 --------------------------------------------------------------

struct Field {
  std::vector<double> s, g;
};

Field perturbed(const Grid& grid, double s0, double g0, double eps, const std::function<double(const Vec3&)>& f) {
  Field out{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid.points[i]);
    out.s[i] = s0 * (1.0 + eps * v);
    out.g[i] = g0 * (1.0 + 0.5 * eps * v);
  }
  return out;
}

Outcome perturbative_scaling() {
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const double s0 = 0.7, g0 = 0.3, eps = 0.1;
  const std::function<double(const Vec3&)> profiles[3] = {
      [](const Vec3& p) { return std::sin(pi * p.x()); },
      [](const Vec3& p) { return std::cos(pi * p.y()) * std::sin(pi * p.z()); },
      [](const Vec3& p) { return std::exp(std::cos(pi * (p.x() + p.y()))) - 1.0; }};
  bool ok = true;
  std::string ratios;
  for (const auto& f : profiles) {
    double res[2];
    for (int j = 0; j < 2; ++j) {
      const Field fl = perturbed(*g, s0, g0, j == 0 ? eps : eps / 2, f);
      res[j] = sqrt_residual(perturbative_K(fl.s, fl.g, s0, g0, g), magnetodielectric_sigma(fl.s, fl.g, g));
    }
    const double ratio = res[1] / res[0];
    ok = ok && ratio >= 0.2 && ratio <= 0.35;
    ratios += (ratios.empty() ? "" : ", ") + fmt("%.4f", ratio);
  }
  return {ok, "residual(eps/2)/residual(eps) = " + ratios + " (each in [0.2, 0.35])"};
}

Outcome naive_negative() {
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const double s0 = 0.7, g0 = 0.3;
  // γ rises and falls linearly along x (a triangle wave, continuous on the torus).
  std::vector<double> s(g->size(), s0), gm(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->points[i].x() / g->length[0];
    gm[i] = g0 * (1.0 + 0.05 * (x < 0.5 ? 4.0 * x - 1.0 : 3.0 - 4.0 * x));
  }
  const DiscreteKernel sigma = magnetodielectric_sigma(s, gm, g);
  const double naive = sqrt_residual(naive_inhomogeneous_K(s, gm, g), sigma);
  const double pert = sqrt_residual(perturbative_K(s, gm, s0, g0, g), sigma);
  return {naive > 1e-3 && pert * 10.0 <= naive,
          fmt("pointwise curl-form kernel residual %.2e (> 1e-3); first-order kernel %.2e, %.1fx smaller (>= 10x)",
              naive, pert, naive / pert)};
}

// ---- 7 -----------------------------------------------------------------

Outcome kliever_fuchs_closed_form() {
  Rng r(1007);
  double vac = 0.0, loc = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double q = uniform(r, 0.02, 5.0);
    cd w(uniform(r, 0.05, 3.0), uniform(r, 0.0, 0.3));
    if (std::abs(q - w.real()) < 1e-3 && w.imag() == 0.0) w += cd(0.0, 0.01);
    const cd kappa = decaying_sqrt(q * q - w * w);
    const ImpedancePair z = kliever_fuchs(HomogeneousKSpace::vacuum(), q, w);
    vac = std::max(vac, rel(z.zs, I_unit * w / (8.0 * pi * pi * kappa)));

    const cd eps(uniform(r, 1.0, 6.0), uniform(r, 0.01, 2.0));
    const cd ke = decaying_sqrt(q * q - eps * w * w);
    const ImpedancePair zl = kliever_fuchs(HomogeneousKSpace::dielectric(eps), q, w);
    loc = std::max({loc, rel(zl.zs, I_unit * w / (8.0 * pi * pi * ke)),
                    rel(zl.zp, -I_unit * ke / (8.0 * pi * pi * eps * w))});
  }
  return {vac <= 1e-8 && loc <= 1e-8,
          fmt("vacuum Z_s vs i w/(8 pi^2 kappa): %.2e; dielectric Z_s, Z_p vs Fresnel: %.2e (<= 1e-8, 50 points)",
              vac, loc)};
}

// ---- 8 -----------------------------------------------------------------

Outcome slab_vs_transfer_matrix() {
  const auto t0 = Clock::now();
  const DrudeLorentzParams metal{1.5, 0.15, 0.0}, lorentz{1.0, 0.2, 0.8};
  const cd glass(2.25, 0.02);
  const SlabMedia m{HomogeneousKSpace::dielectric(glass), HomogeneousKSpace::local_drude(metal),
                    HomogeneousKSpace::local_drude(lorentz), 0.7};
  double worst_s = 0.0, worst_p = 0.0, worst_cross = 0.0;
  for (int iq = 0; iq < 10; ++iq) {
    for (int iw = 0; iw < 10; ++iw) {
      const double qn = 0.1 + 0.3 * iq;
      const Vec2 q = qn * Vec2(std::cos(0.3 + iq), std::sin(0.3 + iq));
      const cd w(0.2 + 0.2 * iw, 0.0);
      const std::array<cd, 3> eps{glass, eval_epsilon(metal, w), eval_epsilon(lorentz, w)};
      const SlabGreen sg(m, q, w);
      for (auto [zp, z] : {std::pair{0.2, 0.5}, std::pair{0.6, 0.1}}) {
        // Rotate into the plane-of-incidence frame: index 1 is s, {0, 2} is p.
        const Mat3c f = lateral_frame(-q).cast<cd>();
        const Mat3c a = f.transpose() * sg.green(zp, z) * f;
        const Mat3c b = f.transpose() * transfer_matrix_green(eps, m.d, q, w, zp, z) * f;
        worst_s = std::max(worst_s, std::abs(a(1, 1) - b(1, 1)) / std::abs(b(1, 1)));
        Mat3c pa = a, pb = b;
        pa.row(1).setZero(), pa.col(1).setZero(), pb.row(1).setZero(), pb.col(1).setZero();
        worst_p = std::max(worst_p, rel(pa, pb));
        worst_cross = std::max(worst_cross, (a.row(1).norm() + a.col(1).norm() - 2.0 * std::abs(a(1, 1))) / a.norm());
      }
    }
  }
  const double t = since(t0);
  return {std::max(worst_s, worst_p) <= 1e-8 && t <= 120.0,
          fmt("10x10 (q, w) grid: s %.2e, p %.2e (<= 1e-8), s-p mixing %.1e; %.1f s (<= 120 s)", worst_s, worst_p,
              worst_cross, t)};
}

// ---- 9 -----------------------------------------------------------------

Outcome block_identity() {
  const auto t0 = Clock::now();
  Rng r(1009);
  auto block = [&] {
    TangentialBlock x;
    for (int i = 0; i < 4; ++i) x(i) = cuniform(r, -1, 1);
    return x;
  };
  double worst = 0.0;
  int used = 0, rejected = 0;
  while (used < 10000) {
    const TangentialBlock a = block(), b = block(), c = block(), d = block();
    Eigen::Matrix4cd m;
    m << a, b, c, d;
    // Well-conditioned: the full matrix and every ♯-inverted block.
    bool good = m.fullPivLu().rcond() > 1e-2;
    for (const TangentialBlock* x : {&a, &b, &c, &d}) good = good && x->fullPivLu().rcond() > 1e-2;
    if (!good) {
      ++rejected;
      continue;
    }
    worst = std::max(worst, block_identity_residual(a, b, c, d));
    ++used;
  }
  const double t = since(t0);
  return {worst <= 1e-12 && t <= 5.0,
          fmt("worst identity residual %.2e (<= 1e-12) on 10^4 quadruples (%g rejected as ill-conditioned); "
              "%.2f s (<= 5 s)",
              worst, rejected, t)};
}

// ---- 10 ----------------------------------------------------------------

Outcome causality() {
  const std::vector<double> grid = kk_standard_grid();
  struct Model {
    const char* name;
    ScalarResponse q;
  };
  const DrudeLorentzParams drude{1.0, 0.1, 0.0}, lorentz{1.3, 0.25, 0.9}, weak{0.5, 0.02, 0.0};
  const auto hyd = HomogeneousKSpace::hydrodynamic(1.0, 0.15, 0.1);
  const std::vector<Model> models{
      {"Drude", [&](cd w) { return conductivity_from_epsilon(eval_epsilon(drude, w), w); }},
      {"Lorentz", [&](cd w) { return conductivity_from_epsilon(eval_epsilon(lorentz, w), w); }},
      {"weakly damped Drude", [&](cd w) { return conductivity_from_epsilon(eval_epsilon(weak, w), w); }},
      {"hydrodynamic, longitudinal at k = 2", [&](cd w) { return hyd.eval(2.0, w).first; }},
  };
  double kk_worst = 0.0;
  int schwarz_fail = 0, schwarz_total = 0;
  for (const Model& m : models) {
    const auto rep = kramers_kronig_residual(m.q, grid);
    kk_worst = std::max(kk_worst, rep.flagged ? 1.0 : rep.residual);
    for (int i = -40; i <= 40; ++i)
      for (int j = 0; j <= 10; ++j) {
        const cd w(0.1 * i, 0.05 * j);
        if (std::abs(w) < 1e-12) continue;
        ++schwarz_total;
        schwarz_fail += !schwarz_check(m.q, w);
      }
  }
  const Vec3 k(0.4, -1.1, 0.7);
  for (int i = -40; i <= 40; ++i) {
    const cd w(0.1 * i + 0.05, 0.1);
    ++schwarz_total;
    schwarz_fail += !schwarz_check(std::function<Mat3c(cd)>([&](cd x) { return hyd.tensor(k, x); }), w);
  }
  return {kk_worst < 1e-3 && schwarz_fail == 0,
          fmt("worst Kramers-Kronig residual %.2e (< 1e-3) over 4 models; Schwarz failures %g of %g", kk_worst,
              schwarz_fail, schwarz_total)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"square-root kernel", square_root_kernel},
      {"fluctuation-dissipation identity", fluctuation_dissipation},
      {"reciprocity", reciprocity},
      {"gauge theorem", gauge_theorem},
      {"perturbative kernel scaling", perturbative_scaling},
      {"naive kernel negative test", naive_negative},
      {"Kliever-Fuchs closed forms", kliever_fuchs_closed_form},
      {"slab vs transfer matrix", slab_vs_transfer_matrix},
      {"block inverse identity", block_identity},
      {"Kramers-Kronig and Schwarz", causality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.summary.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
