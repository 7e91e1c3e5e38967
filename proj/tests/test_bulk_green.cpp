#include <doctest.h>

#include "dqed/bulk_green.hpp"
#include "dqed/core/errors.hpp"
#include "support.hpp"

using namespace dqed;
using namespace dqed::test;

namespace {

// ∫dβ e^{iβx}/(β² + s²) and ∫dβ β e^{iβx}/(β² + s²), Re s > 0.
cd even_integral(cd s, double x) { return pi * std::exp(-s * std::abs(x)) / s; }
cd odd_integral(cd s, double x) { return I_unit * pi * (x > 0 ? 1.0 : -1.0) * std::exp(-s * std::abs(x)); }

// Closed forms of the β-integrals for a hydrodynamic medium, from partial
// fractions of the transverse and longitudinal denominators.
BetaIntegrals hydrodynamic_closed_form(double wp, double gd, double beta, double x, double q, cd w) {
  const cd base = w * (w + I_unit * gd);
  const cd big_omega = base - wp * wp;
  const cd kl = decaying_sqrt(q * q - big_omega / (beta * beta));
  const cd eps_d = 1.0 - wp * wp / base;
  const cd kt = decaying_sqrt(q * q - eps_d * w * w);
  const cd r = wp * wp / big_omega;
  BetaIntegrals b;
  b.a = even_integral(kt, x);
  b.b = pi * (kt * std::exp(-kt * std::abs(x)) - q * std::exp(-q * std::abs(x))) / (kt * kt - q * q);
  b.c = (q * q / (w * w)) * (even_integral(q, x) - r * (even_integral(kl, x) - even_integral(q, x)));
  b.e = -(wp * wp / (w * w * beta * beta)) * even_integral(kl, x);
  b.f = q / (kt * kt - q * q) * (odd_integral(q, x) - odd_integral(kt, x)) +
        (q / (w * w)) * (odd_integral(q, x) - r * (odd_integral(kl, x) - odd_integral(q, x)));
  b.g = odd_integral(kt, x);
  return b;
}

}  // namespace

TEST_CASE("bulk Green tensor solves the wave equation (property)") {
  Rng r(21);
  for (int i = 0; i < 30; ++i) {
    const auto m = HomogeneousKSpace::hydrodynamic(uniform(r, 0.5, 2), uniform(r, 0.05, 0.5), uniform(r, 0.01, 0.3));
    const Vec3 k(uniform(r, -2, 2), uniform(r, -2, 2), uniform(r, -2, 2));
    const cd w(uniform(r, 0.2, 2), uniform(r, 0, 0.3));
    const Mat3c g = bulk_green_k(m, k, w);
    CHECK(bulk_green_residual(g, m.tensor(k, w), k, w) < 1e-12);
    CHECK(rel(g, g.transpose()) < 1e-14);  // symmetric for isotropic media
    CHECK(rel(bulk_gamma_k(m, k, w), cross_matrix(k).cast<cd>() * g / w) < 1e-14);
  }
}

TEST_CASE("bulk Green tensor reports on-shell poles") {
  const Vec3 k(0.0, 0.0, 1.0);
  CHECK_THROWS_AS(bulk_green_k(HomogeneousKSpace::vacuum(), k, cd(1.0, 0.0)), PoleError);
  try {
    bulk_green_k(HomogeneousKSpace::vacuum(), k, cd(1.0, 0.0));
  } catch (const PoleError& e) {
    CHECK(std::abs(e.root()) < 1e-12);
  }
}

TEST_CASE("dispersion relations") {
  const auto m = HomogeneousKSpace::dielectric(cd(2.0, 0.3));
  const cd w(0.7, 0.01);
  const DispersionPair d = dispersion(m, 1.3, w);
  CHECK(rel(d.perp, 1.69 - cd(2.0, 0.3) * w * w) < 1e-14);
  CHECK(rel(d.par, cd(2.0, 0.3) * w * w) < 1e-14);
}

TEST_CASE("beta integrals of a dielectric match closed forms") {
  const cd eps(2.5, 0.4), w(0.9, 0.02);
  const double q = 0.7;
  const cd kappa = decaying_sqrt(q * q - eps * w * w);
  for (double x : {0.3, -0.8, 2.0}) {
    const BetaIntegrals b = beta_integrals(HomogeneousKSpace::dielectric(eps), x, Side::none, q, w);
    const cd ew2 = eps * w * w;
    CHECK(rel(b.a, even_integral(kappa, x)) < 1e-10);
    CHECK(rel(b.b, (q * q * even_integral(q, x) - kappa * kappa * even_integral(kappa, x)) / ew2) < 1e-10);
    CHECK(rel(b.c, q * q * even_integral(q, x) / ew2) < 1e-10);
    CHECK(std::abs(b.e) < 1e-10);
    CHECK(rel(b.f, q * odd_integral(kappa, x) / ew2) < 1e-10);
    CHECK(rel(b.g, odd_integral(kappa, x)) < 1e-10);
  }
}

TEST_CASE("beta integrals of a hydrodynamic medium match closed forms") {
  const double wp = 1.0, gd = 0.1;
  const cd w(0.8, 0.0);
  for (double beta : {0.2, 0.05, 0.003}) {
    for (double x : {0.4, -0.15}) {
      for (double q : {0.3, 1.5}) {
        CAPTURE(beta);
        CAPTURE(x);
        CAPTURE(q);
        const auto m = HomogeneousKSpace::hydrodynamic(wp, gd, beta);
        const BetaIntegrals b = beta_integrals(m, x, Side::none, q, w);
        const BetaIntegrals o = hydrodynamic_closed_form(wp, gd, beta, x, q, w);
        const double scale = std::max({std::abs(o.a), std::abs(o.b), std::abs(o.c), std::abs(o.e),
                                       std::abs(o.f), std::abs(o.g)});
        for (auto [got, want] : {std::pair{b.a, o.a}, {b.b, o.b}, {b.c, o.c}, {b.e, o.e}, {b.f, o.f}, {b.g, o.g}})
          CHECK(std::abs(got - want) < 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("partial Fourier transform is reciprocal (property)") {
  Rng r(22);
  for (int i = 0; i < 6; ++i) {
    const auto m = i % 2 ? HomogeneousKSpace::hydrodynamic(1.0, 0.2, uniform(r, 0.02, 0.2))
                         : HomogeneousKSpace::local_drude({uniform(r, 0.5, 2), uniform(r, 0.05, 0.5), 0.0});
    const Vec2 q(uniform(r, -1.5, 1.5), uniform(r, -1.5, 1.5));
    const cd w(uniform(r, 0.3, 1.5), uniform(r, 0.0, 0.1));
    const double dz = uniform(r, 0.1, 1.0);
    const PartialFourierSample a = partial_fourier(m, dz, Side::none, q, w);
    const PartialFourierSample b = partial_fourier(m, -dz, Side::none, -q, w);
    CHECK(rel(a.g, b.g.transpose()) < 1e-9);
    CHECK(rel(a.contact, b.contact) < 1e-14);
  }
}

TEST_CASE("coincident heights keep the contact term apart") {
  const auto m = HomogeneousKSpace::dielectric(cd(2.0, 0.2));
  const cd w(0.8, 0.05);
  const Vec2 q(0.4, 0.0);
  const PartialFourierSample plus = partial_fourier(m, 0.0, Side::plus, q, w);
  const PartialFourierSample minus = partial_fourier(m, 0.0, Side::minus, q, w);
  // δ(z − z′) ẑẑ / D∥(∞) with the (2π)⁻³ normalization, D∥ = εω².
  CHECK(rel(plus.contact(2, 2), -1.0 / (8.0 * pi * pi * pi) * (2.0 * pi) / (cd(2.0, 0.2) * w * w)) < 1e-10);
  // Even parts agree across z = z′; the odd (xz) parts flip sign.
  CHECK(rel(plus.g(0, 0), minus.g(0, 0)) < 1e-10);
  CHECK(rel(plus.g(0, 2), -minus.g(0, 2)) < 1e-10);
  CHECK(lateral_frame(Vec2(0, 0)).isApprox(Mat3::Identity()));
}

TEST_CASE("Kliever-Fuchs impedances") {
  Rng r(23);
  for (int i = 0; i < 10; ++i) {
    const double q = uniform(r, 0.05, 3);
    const cd w(uniform(r, 0.1, 2), uniform(r, 0, 0.2));
    const cd eps(uniform(r, 1, 5), uniform(r, 0.01, 1));
    const cd kv = decaying_sqrt(q * q - w * w), ke = decaying_sqrt(q * q - eps * w * w);
    const ImpedancePair vac = kliever_fuchs(HomogeneousKSpace::vacuum(), q, w);
    CHECK(rel(vac.zs, I_unit * w / (8 * pi * pi * kv)) < 1e-10);
    const ImpedancePair die = kliever_fuchs(HomogeneousKSpace::dielectric(eps), q, w);
    CHECK(rel(die.zs, I_unit * w / (8 * pi * pi * ke)) < 1e-10);
    CHECK(rel(die.zp, -I_unit * ke / (8 * pi * pi * eps * w)) < 1e-10);
  }
  CHECK_THROWS_AS(kliever_fuchs(HomogeneousKSpace::magnetodielectric({1, 0.1, 0}, {0.5, 0.1, 0.2}), 0.5, 1.0),
                  UnsupportedError);
  CHECK_THROWS_AS(kliever_fuchs(HomogeneousKSpace::vacuum(), 0.5, 0.5), ParameterError);
}
