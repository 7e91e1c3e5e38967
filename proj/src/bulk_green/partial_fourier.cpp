#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "dqed/bulk_green.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/core/quadrature.hpp"

namespace dqed {
namespace {

// Integrand slots: a, b, c, e are even in β; f, g are odd.
constexpr int kA = 0, kB = 1, kC = 2, kE = 3, kF = 4, kG = 5;
constexpr bool kEven[6] = {true, true, true, true, false, false};

// Remainders after removing the analytic references: 1/D⊥ loses
// 1/(β²+A²) with A² = q² + K², and 1/D∥ loses its large-k constant.
struct Remainder {
  const HomogeneousKSpace& m;
  double q, K2;
  cd w, q_par_inf, d_par_inf;

  // Complex β is used on the rotated contour, where k² = q² + β² is complex.
  void operator()(cd beta, std::array<cd, 6>& r) const {
    const cd b2 = beta * beta;
    const cd k2 = q * q + b2;
    auto [qp, qt] = m.q(k2, w);
    const cd dperp = k2 - w * w - I_unit * w * qt;
    const cd dpar = w * w + I_unit * w * qp;
    if (dperp == 0.0 || dpar == 0.0) throw PoleError("partial_fourier: dispersion root on the contour", beta);
    // Written without cancellation: β² + A² − D⊥ = K² + ω² + iωQ⊥.
    const cd dt = (K2 + w * w + I_unit * w * qt) / (dperp * (b2 + q * q + K2));
    const cd dl = I_unit * w * (q_par_inf - qp) / (dpar * d_par_inf);
    const bool origin = k2 == 0.0;
    const cd bb = origin ? cd(1.0) : b2 / k2;
    const cd qq = origin ? cd(0.0) : q * q / k2;
    const cd qb = origin ? cd(0.0) : q * beta / k2;
    r[kA] = dt;
    r[kB] = bb * dt;
    r[kC] = qq * dl;
    r[kE] = dl;
    r[kF] = qb * (dt + dl);
    r[kG] = beta * dt;
  }
};

cd principal_sqrt_decaying(cd z) {
  cd s = std::sqrt(z);
  if (s.real() < 0.0) s = -s;
  return s;
}

}  // namespace

BetaIntegrals beta_integrals(const HomogeneousKSpace& m, double dz, Side side, double q, cd w,
                             const QuadratureSpec& spec) {
  if (q < 0.0) throw ParameterError("beta_integrals: |q| must be >= 0");
  if (std::abs(w) == 0.0) throw SingularityError("beta_integrals: w = 0");
  if (m.magnetic_like) {
    // Q⊥ ~ k² changes the large-β asymptotics; the layered pipeline excludes it.
    throw UnsupportedError("partial Fourier transform: magnetic-like (curl-type) media are excluded");
  }
  const double x = std::abs(dz);
  const double sg = dz > 0.0 ? 1.0 : dz < 0.0 ? -1.0 : static_cast<double>(static_cast<int>(side));

  double K = std::max({q, std::abs(w), 1e-300});
  if (m.k_scale) K = std::max(K, m.k_scale(w));
  const double K2 = K * K;
  const cd A = std::sqrt(cd(q * q + K2));

  // Large-k constant of D∥ by Richardson on two far samples.
  const double kf = 1e6 * K;
  const cd qp1 = m.q(cd(kf * kf), w).first, qp2 = m.q(cd(4.0 * kf * kf), w).first;
  const cd q_par_inf = (4.0 * qp2 - qp1) / 3.0;
  const cd d_par_inf = w * w + I_unit * w * q_par_inf;
  if (std::abs(d_par_inf) == 0.0) throw PoleError("partial_fourier: D_par vanishes at large k", d_par_inf);

  // Lossless media put the transverse root on the real β axis.
  {
    const cd qt = m.q(cd(q * q), w).second;
    const cd kt = principal_sqrt_decaying(q * q - w * w - I_unit * w * qt);
    if (kt.real() <= 1e-12 * std::abs(kt))
      throw ParameterError("partial_fourier: medium is lossless at this (q, w); poles sit on the real axis");
  }

  Remainder rem{m, q, K2, w, q_par_inf, d_par_inf};
  const double B = spec.cutoff * K;

  // Tail model fitted at B/2 and B with u = 1/(β²+K²):
  //   even slots r ≈ c1·u + c2·u², odd slots r ≈ β(c1·u² + c2·u³).
  // Both integrate in closed form, leaving a remainder of order β⁻⁶.
  std::array<cd, 6> r1, r2, c1, c2;
  const double b1 = 0.5 * B, b2 = B;
  rem(b1, r1);
  rem(b2, r2);
  const double u1 = 1.0 / (b1 * b1 + K2), u2 = 1.0 / (b2 * b2 + K2);
  for (int j = 0; j < 6; ++j) {
    const cd y1 = kEven[j] ? r1[j] / u1 : r1[j] / (b1 * u1 * u1);
    const cd y2 = kEven[j] ? r2[j] / u2 : r2[j] / (b2 * u2 * u2);
    c2[j] = (y1 - y2) / (u1 - u2);
    c1[j] = y1 - c2[j] * u1;
  }
  auto tail_model = [&](int j, cd beta) -> cd {
    const cd u = 1.0 / (beta * beta + K2);
    return kEven[j] ? (c1[j] + c2[j] * u) * u : beta * u * u * (c1[j] + c2[j] * u);
  };

  auto integrand = [&](double beta, VecXc& out) {
    std::array<cd, 6> r;
    rem(cd(beta), r);
    const double cb = 2.0 * std::cos(beta * x), sb = 2.0 * std::sin(beta * x) * sg;
    for (int j = 0; j < 6; ++j) {
      const cd d = r[j] - tail_model(j, beta);
      out(j) = kEven[j] ? cb * d : I_unit * sb * d;
    }
  };

  // Analytic parts. E(s) = ∫e^{iβx}/(β²+s²), O(s) = ∫e^{iβx}β/(β²+s²).
  auto Ev = [&](cd s) { return pi * std::exp(-s * x) / s; };
  auto Od = [&](cd s) { return I_unit * pi * sg * std::exp(-s * x); };
  const double q2E_q = pi * q * std::exp(-q * x);  // q²·E(q), finite at q = 0
  std::array<cd, 6> ref;
  ref[kA] = Ev(A);
  ref[kB] = (A * A * Ev(A) - q2E_q) / K2;
  ref[kC] = q2E_q / d_par_inf;
  ref[kE] = 0.0;
  ref[kF] = q / K2 * (Od(q) - Od(A)) + q / d_par_inf * Od(q);
  ref[kG] = Od(A);
  const double ek = std::exp(-K * x);
  const double k3 = K2 * K;
  for (int j = 0; j < 6; ++j) {
    if (kEven[j])
      ref[j] += c1[j] * pi * ek / K + c2[j] * pi * (1.0 + K * x) * ek / (2.0 * k3);
    else
      ref[j] += I_unit * pi * sg * x * ek * (c1[j] / (2.0 * K) + c2[j] * (1.0 + K * x) / (8.0 * k3));
  }

  double ref_scale = 0.0;
  for (const cd& v : ref) ref_scale = std::max(ref_scale, std::abs(v));
  const double tol_guess = std::max(spec.abs_tol, spec.rel_tol * ref_scale);

  quad::Options opt;
  opt.rel_tol = 0.1 * spec.rel_tol;  // the remainder may exceed the final sum
  opt.abs_tol = 0.1 * tol_guess;
  opt.max_intervals = spec.max_intervals;

  // Geometric panels from K/256 upward.
  auto geometric = [&](double lo, double hi) {
    std::vector<double> p{lo};
    for (double t = K / 256.0; t < hi; t *= 2.0)
      if (t > lo) p.push_back(t);
    p.push_back(hi);
    return p;
  };

  VecXc total(6);
  double err = 0.0;
  int evals = 0;
  if (x == 0.0) {
    // No oscillation: integrate to B; what is left decays like β⁻⁵ or faster.
    const quad::Result res = quad::adaptive_gk15(integrand, 6, geometric(0.0, B), opt);
    std::array<cd, 6> rb;
    const double bt = 1.5 * B;
    rem(cd(bt), rb);
    double tail_err = 0.0;
    for (int j = 0; j < 6; ++j)
      tail_err = std::max(tail_err, 2.0 * std::abs(rb[j] - tail_model(j, cd(bt))) * bt / 5.0);
    total = res.value;
    err = res.error + tail_err;
    evals = res.evaluations;
  } else {
    // Real axis up to β₀ = 4K in panels of at most one period, then the two
    // exponentials of cos/sin are continued along β₀ ± it where they decay
    // like e^{−t|Δz|}. All poles of the integrand lie within |β| < β₀.
    const double b0 = 4.0 * K;
    std::vector<double> bp{0.0};
    const std::vector<double> geo = geometric(0.0, b0);
    for (std::size_t i = 1; i < geo.size(); ++i) {
      const double lo = geo[i - 1], hi = geo[i];
      const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) * x / (2.0 * pi))));
      for (int s = 1; s <= parts; ++s) bp.push_back(s == parts ? hi : lo + (hi - lo) * s / parts);
    }
    const quad::Result re = quad::adaptive_gk15(integrand, 6, bp, opt);

    const cd ph = std::exp(I_unit * b0 * x);
    auto ray = [&](double t, VecXc& out) {
      std::array<cd, 6> rp, rm;
      const cd bp_ = cd(b0, t), bm = cd(b0, -t);
      rem(bp_, rp);
      rem(bm, rm);
      const double decay = std::exp(-t * x);
      for (int j = 0; j < 6; ++j) {
        const cd up = (rp[j] - tail_model(j, bp_)) * ph * I_unit * decay;
        const cd dn = (rm[j] - tail_model(j, bm)) * std::conj(ph) * (-I_unit) * decay;
        out(j) = kEven[j] ? up + dn : sg * (up - dn);
      }
    };
    const double t_end = 45.0 / x;
    std::vector<double> tp{0.0};
    for (double t = std::min(K / 256.0, 1.0 / x); t < t_end; t *= 2.0) tp.push_back(t);
    tp.push_back(t_end);
    const quad::Result ry = quad::adaptive_gk15(ray, 6, tp, opt);
    total = re.value + ry.value;
    err = re.error + ry.error;
    evals = re.evaluations + ry.evaluations;
  }

  BetaIntegrals out;
  out.a = total(kA) + ref[kA];
  out.b = total(kB) + ref[kB];
  out.c = total(kC) + ref[kC];
  out.e = total(kE) + ref[kE];
  out.f = total(kF) + ref[kF];
  out.g = total(kG) + ref[kG];
  out.d_par_inf = d_par_inf;
  out.error = err;
  out.evaluations = evals;

  double scale = 0.0;
  for (cd v : {out.a, out.b, out.c, out.e, out.f, out.g}) scale = std::max(scale, std::abs(v));
  const double target = std::max(spec.abs_tol, spec.rel_tol * scale);
  if (out.error > target) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "partial_fourier: quadrature error %.3e exceeds tolerance %.3e", out.error,
                  target);
    throw AccuracyError(buf);
  }
  return out;
}

Mat3 lateral_frame(const Vec2& q) {
  const double qn = q.norm();
  Mat3 r = Mat3::Identity();
  if (qn == 0.0) return r;
  const Vec3 e1(q.x() / qn, q.y() / qn, 0.0);
  const Vec3 e2(-q.y() / qn, q.x() / qn, 0.0);
  r.col(0) = e1;
  r.col(1) = e2;
  r.col(2) = Vec3::UnitZ();
  return r;
}

PartialFourierSample partial_fourier(const HomogeneousKSpace& m, double dz, Side side, const Vec2& q,
                                     cd w, const QuadratureSpec& spec) {
  const double qn = q.norm();
  const BetaIntegrals s = beta_integrals(m, dz, side, qn, w, spec);
  const double norm3 = std::pow(2.0 * pi, 3);
  Mat3c gf;
  gf << s.b - s.c, 0.0, -s.f,
        0.0, s.a, 0.0,
        -s.f, 0.0, s.a - s.b + s.c - s.e;
  gf /= norm3;
  Mat3c gam;
  gam << 0.0, -s.g, 0.0,
         s.g, 0.0, -qn * s.a,
         0.0, qn * s.a, 0.0;
  gam /= (w * norm3);
  const Mat3c r = lateral_frame(q).cast<cd>();
  PartialFourierSample out;
  out.g = r * gf * r.transpose();
  out.gamma = r * gam * r.transpose();
  out.contact = Mat3c::Zero();
  out.contact(2, 2) = -1.0 / (std::pow(2.0 * pi, 2) * s.d_par_inf);
  out.error = s.error / norm3;
  return out;
}

ImpedancePair kliever_fuchs(const HomogeneousKSpace& m, double q, cd w, const QuadratureSpec& spec) {
  const BetaIntegrals s = beta_integrals(m, 0.0, Side::plus, q, w, spec);
  const double norm3 = std::pow(2.0 * pi, 3);
  return {I_unit * w * s.a / norm3, I_unit * w * (s.b - s.c) / norm3, std::abs(w) * s.error / norm3};
}

}  // namespace dqed
