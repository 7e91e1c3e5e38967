#include <doctest.h>

#include "dqed/core/errors.hpp"
#include "dqed/core/spectral.hpp"
#include "dqed/response_models.hpp"
#include "support.hpp"

using namespace dqed;
using namespace dqed::test;

TEST_CASE("Drude-Lorentz permittivity follows the oscillator formula") {
  Rng r(1);
  for (int i = 0; i < 50; ++i) {
    const DrudeLorentzParams p{uniform(r, 0.1, 3), uniform(r, 0.01, 1), uniform(r, 0, 2)};
    const cd w(uniform(r, -3, 3), uniform(r, 0, 1));
    const cd expected = 1.0 + p.plasma_frequency * p.plasma_frequency /
                                  (p.resonance * p.resonance - w * w - I_unit * p.damping * w);
    CHECK(rel(eval_epsilon(p, w), expected) < 1e-14);
    CHECK(rel(eval_kappa(p, w), 1.0 / expected) < 1e-14);
  }
}

TEST_CASE("free-electron conductivity has the Drude real part at real frequency") {
  const double wp = 1.3, gd = 0.2;
  for (double w : {0.1, 0.5, 1.0, 4.0}) {
    const cd q = conductivity_from_epsilon(eval_epsilon({wp, gd, 0.0}, w), w);
    CHECK(q.real() == doctest::Approx(wp * wp * gd / (w * w + gd * gd)).epsilon(1e-13));
    CHECK(q.imag() == doctest::Approx(wp * wp * w / (w * w + gd * gd)).epsilon(1e-13));
  }
}

TEST_CASE("hydrodynamic response") {
  const double wp = 1.0, gd = 0.1;
  const cd w(0.8, 0.0);
  const cd local = conductivity_from_epsilon(eval_epsilon({wp, gd, 0.0}, w), w);

  SUBCASE("beta = 0 reduces to the local Drude conductivity") {
    auto [par, perp] = hydrodynamic_kspace(wp, gd, 0.0, 3.0, w);
    CHECK(rel(par, local) < 1e-14);
    CHECK(rel(perp, local) < 1e-14);
  }
  SUBCASE("longitudinal permittivity carries the pressure term") {
    const double beta = 0.2, k = 1.7;
    auto [par, perp] = hydrodynamic_kspace(wp, gd, beta, k, w);
    const cd eps_par = 1.0 - wp * wp / (w * (w + I_unit * gd) - beta * beta * k * k);
    CHECK(rel(par, -I_unit * w * (eps_par - 1.0)) < 1e-14);
    CHECK(rel(perp, local) < 1e-14);
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(hydrodynamic_kspace(wp, 0.0, 0.1, 1.0, w), ParameterError);
    CHECK_THROWS_AS(hydrodynamic_kspace(-1.0, gd, 0.1, 1.0, w), ParameterError);
  }
}

TEST_CASE("isotropic tensor splits into longitudinal and transverse parts") {
  const auto m = HomogeneousKSpace::hydrodynamic(1.2, 0.3, 0.15);
  const Vec3 k(0.3, -0.8, 0.5);
  const cd w(0.9, 0.05);
  const Mat3c t = m.tensor(k, w);
  const auto [par, perp] = m.eval(k.norm(), w);
  const Vec3c kh = (k / k.norm()).cast<cd>();
  CHECK(rel(t * kh, par * kh) < 1e-14);
  const Vec3c n = k.cross(Vec3(1, 0, 0)).normalized().cast<cd>();
  CHECK(rel(t * n, perp * n) < 1e-14);
}

TEST_CASE("Schwarz reflection holds for every Drude-family model") {
  Rng r(2);
  for (int i = 0; i < 40; ++i) {
    const DrudeLorentzParams p{uniform(r, 0.1, 3), uniform(r, 0.01, 1), uniform(r, 0, 2)};
    const cd w(uniform(r, -3, 3), uniform(r, 0, 1));
    CHECK(schwarz_check([&](cd x) { return conductivity_from_epsilon(eval_epsilon(p, x), x); }, w));
    const auto m = HomogeneousKSpace::hydrodynamic(p.plasma_frequency, p.damping, uniform(r, 0.01, 0.3));
    const Vec3 k(uniform(r, -2, 2), uniform(r, -2, 2), uniform(r, -2, 2));
    CHECK(schwarz_check(std::function<Mat3c(cd)>([&](cd x) { return m.tensor(k, x); }), w));
  }
  // A response with a non-real time-domain kernel breaks the symmetry.
  CHECK_FALSE(schwarz_check([](cd x) { return cd(1.0, 1.0) / (1.0 - I_unit * x); }, cd(0.7, 0.1)));
}

TEST_CASE("Kramers-Kronig residual") {
  const std::vector<double> grid = kk_standard_grid();
  CHECK(grid.size() == 2048);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);

  SUBCASE("causal Drude and Lorentz responses pass") {
    for (DrudeLorentzParams p : {DrudeLorentzParams{1.0, 0.1, 0.0}, DrudeLorentzParams{1.0, 0.2, 0.7}}) {
      const auto rep = kramers_kronig_residual(
          [&](cd w) { return conductivity_from_epsilon(eval_epsilon(p, w), w); }, grid);
      CHECK(rep.residual < 1e-3);
      CHECK_FALSE(rep.flagged);
    }
  }
  SUBCASE("a constant conductivity has a non-integrable tail") {
    const auto rep = kramers_kronig_residual([](cd) { return cd(2.0); }, grid);
    CHECK(rep.flagged);
  }
}

TEST_CASE("local kernels on a uniform periodic box keep the tensor on the diagonal") {
  const GridPtr g = Grid::periodic_box({2, 3, 2}, {1.0, 1.5, 1.0});
  std::vector<cd> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cd(1.0 + i, 0.5 * i);
  const DiscreteKernel k = DiscreteKernel::local_scalar(g, v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(k.m(3 * i + 1, 3 * i + 1) - v[i]) < 1e-14);
    CHECK(rel(k.sample(i, i), v[i] * Mat3c::Identity() / g->weights[i]) < 1e-14);
  }
}

TEST_CASE("homogeneous kernel is diagonal in the plane-wave basis") {
  const GridPtr g = Grid::periodic_box({4, 4, 4}, {3.0, 3.0, 3.0});
  const auto m = HomogeneousKSpace::hydrodynamic(1.0, 0.2, 0.1);
  const cd w(0.9, 0.0);
  const MatXc kq = to_kspace(*g, homogeneous_kernel(m, w, g).m);
  const std::vector<Vec3> ks = wavevectors(*g);
  MatXc off = kq;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto b = off.block<3, 3>(3 * i, 3 * i);
    if (ks[i].norm() > 0) CHECK(rel(Mat3c(b), m.tensor(ks[i], w)) < 1e-12);
    off.block<3, 3>(3 * i, 3 * i).setZero();
  }
  CHECK(off.norm() < 1e-12 * kq.norm());
}

TEST_CASE("Hermitian split and positivity") {
  Rng r(3);
  const GridPtr g = Grid::periodic_box({3, 3, 3}, {1.0, 1.0, 1.0});
  const auto lat = LocalAnisotropic::drude({DrudeLorentzParams{1.0, 0.1, 0.2}, {0.7, 0.3, 0.0}, {1.5, 0.05, 0.9}});
  const DiscreteKernel q = local_anisotropic_kernel(lat, 0.8, g);
  const HermitianSplit s = hermitian_split(q);
  CHECK(rel(s.sigma.m + I_unit * s.tau.m, q.m) < 1e-15);
  CHECK(hermiticity_residual(s.sigma) < 1e-15);
  CHECK(hermiticity_residual(s.tau) < 1e-15);
  CHECK(check_positive(s.sigma) > 0.0);

  MatXc bad = s.sigma.m;
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(check_positive(DiscreteKernel(g, bad)), PositivityError);
}

TEST_CASE("magnetodielectric kernel rejects active media at real frequency") {
  const GridPtr g = Grid::periodic_box({2, 2, 2}, {1.0, 1.0, 1.0});
  std::vector<cd> eps(g->size(), cd(2.0, 0.1)), kap(g->size(), cd(0.8, -0.1));
  CHECK_NOTHROW(magnetodielectric_kernel(eps, kap, 1.0, g));
  kap[3] = cd(0.8, 0.1);
  CHECK_THROWS_AS(magnetodielectric_kernel(eps, kap, 1.0, g), ModelValidityError);
  CHECK_NOTHROW(magnetodielectric_kernel(eps, kap, cd(1.0, 0.2), g));
}

TEST_CASE("cell lattice needs every cell resolved") {
  CellLattice lat;
  lat.cell = Vec3(1.0, 1.0, 1.0);
  lat.models[{1, 0, 1}] = HomogeneousKSpace::local_drude({1.0, 0.2, 0.0});
  const auto cells = cell_assignment(lat, *Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0}));
  CHECK(cells[0] == std::array<int, 3>{0, 0, 0});
  CHECK(cells.back() == std::array<int, 3>{1, 1, 1});
  CHECK_THROWS_AS(cell_assignment(lat, *Grid::periodic_box({2, 2, 2}, {2.0, 2.0, 2.0})), LayoutError);

  const GridPtr g = Grid::periodic_box({4, 4, 4}, {2.0, 2.0, 2.0});
  const DiscreteKernel k = cell_lattice_kernel(lat, 0.9, g);
  CHECK(reciprocity_residual(k) < 1e-14);
  // Points in different cells do not couple.
  CHECK(k.sample(g->index(0, 0, 0), g->index(2, 0, 0)).norm() == 0.0);
}
