#include <algorithm>
#include <cmath>
#include <limits>

#include "dqed/core/errors.hpp"
#include "dqed/core/quadrature.hpp"
#include "dqed/response_models.hpp"

namespace dqed {
namespace {

constexpr double kTailLimit = 0.1;   // tail share above this means the grid is too narrow
constexpr double kMinExponent = 0.5; // slower decay is not Hilbert-integrable in practice

// ∫₀¹ u^{p−1}/(a·u + b) du by Gauss–Legendre, with a substitution u = t^m
// that smooths the u^{p−1} endpoint behaviour.
double tail_integral(double p, double a, double b) {
  static thread_local std::vector<double> x, w;
  if (x.empty()) quad::gauss_legendre(64, 0.0, 1.0, x, w);
  const double m = 2.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i];
    const double u = std::pow(t, m);
    const double jac = m * std::pow(t, m - 1.0);
    s += w[i] * std::pow(u, p - 1.0) / (a * u + b) * jac;
  }
  return s;
}

// Decay exponent p of |f| ~ |ω|^{-p} from the two outermost samples.
double decay_exponent(double f_out, double f_in, double w_out, double w_in) {
  if (f_out == 0.0 || f_in == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(std::abs(f_out) / std::abs(f_in)) / std::log(w_out / w_in);
}

}  // namespace

std::vector<double> kk_standard_grid(int n, double lo, double hi) {
  if (n < 8 || n % 2 != 0 || !(lo > 0.0) || !(hi > lo))
    throw ParameterError("kk grid: need even n >= 8 and 0 < lo < hi");
  const int half = n / 2;
  std::vector<double> pos(half);
  for (int i = 0; i < half; ++i)
    pos[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (half - 1));
  std::vector<double> g;
  g.reserve(n);
  for (int i = half - 1; i >= 0; --i) g.push_back(-pos[i]);
  for (int i = 0; i < half; ++i) g.push_back(pos[i]);
  return g;
}

KramersKronigReport kramers_kronig_residual(const ScalarResponse& q, const std::vector<double>& g) {
  const std::size_t n = g.size();
  if (n < 8) throw ParameterError("kk: grid too small");
  const double W = g.back();
  for (std::size_t j = 0; j < n; ++j) {
    if (j + 1 < n && !(g[j + 1] > g[j])) throw ParameterError("kk: grid must increase strictly");
    if (std::abs(g[j] + g[n - 1 - j]) > 1e-12 * W) throw ParameterError("kk: grid must be symmetric");
  }

  std::vector<double> f(n), h(n), t(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cd v = q(cd(g[j], 0.0));
    f[j] = v.real();
    h[j] = v.imag();
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? g[j] - g[j - 1] : 0.0;
    const double right = j + 1 < n ? g[j + 1] - g[j] : 0.0;
    t[j] = 0.5 * (left + right);
  }

  KramersKronigReport rep;
  const double pR = decay_exponent(f[n - 1], f[n - 2], g[n - 1], g[n - 2]);
  const double pL = decay_exponent(f[0], f[1], -g[0], -g[1]);
  rep.tail_exponent = std::min(pR, pL);
  rep.flagged = rep.tail_exponent < kMinExponent;

  double num = 0.0, nh = 0.0, nH = 0.0, ntail = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w = g[i];
    if (std::abs(w) > 0.5 * W) continue;
    // Principal value with the pole subtracted: ∫(f(ω′) − f(ω))/(ω − ω′) + f(ω)·ln((W+ω)/(W−ω)).
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      s += t[j] * (f[j] - f[i]) / (w - g[j]);
    }
    const double a = g[i] - g[i - 1], b = g[i + 1] - g[i];
    const double deriv = (f[i + 1] - f[i]) * a / (b * (a + b)) + (f[i] - f[i - 1]) * b / (a * (a + b));
    s += t[i] * (-deriv);
    s += f[i] * std::log((W + w) / (W - w));

    double tail = 0.0;
    if (!rep.flagged) {
      if (std::isfinite(pR)) tail += f[n - 1] * W * tail_integral(pR, w, -W);
      if (std::isfinite(pL)) tail += f[0] * W * tail_integral(pL, w, W);
    }
    const double H = (s + tail) / pi;
    num += (h[i] - H) * (h[i] - H);
    nh += h[i] * h[i];
    nH += H * H;
    ntail += (tail / pi) * (tail / pi);
  }
  const double denom = std::sqrt(std::max(nh, nH));
  rep.residual = denom > 0.0 ? std::sqrt(num) / denom : 0.0;
  rep.tail_fraction = nH > 0.0 ? std::sqrt(ntail / nH) : 0.0;
  if (!rep.flagged && rep.tail_fraction > kTailLimit)
    throw ResolutionError("kk: tail model carries " + std::to_string(rep.tail_fraction) +
                          " of the transform; widen the frequency grid");
  return rep;
}

bool schwarz_check(const ScalarResponse& q, cd w, double tol) {
  const cd a = std::conj(q(w));
  const cd b = q(-std::conj(w));
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

bool schwarz_check(const std::function<Mat3c(cd)>& q, cd w, double tol) {
  const Mat3c a = q(w).conjugate();
  const Mat3c b = q(-std::conj(w));
  const double floor = 1e-15 * std::max(a.norm(), b.norm());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double scale = std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor});
      if (std::abs(a(i, j) - b(i, j)) > tol * scale) return false;
    }
  return true;
}

}  // namespace dqed
