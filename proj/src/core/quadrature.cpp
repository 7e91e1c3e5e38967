#include "dqed/core/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dqed::quad {
namespace {

struct Rule {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
};

const Rule& gk15() {
  static const Rule rule = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    Rule r;
    const auto& xa = GK::abscissa();
    const auto& wa = GK::weights();
    const auto& ga = G::weights();
    int idx = 0;
    r.x[idx] = xa[0];
    r.wk[idx] = wa[0];
    r.wg[idx] = ga[0];
    ++idx;
    for (std::size_t i = 1; i < xa.size(); ++i) {
      double wg = (i % 2 == 0) ? ga[i / 2] : 0.0;
      for (double s : {1.0, -1.0}) {
        r.x[idx] = s * xa[i];
        r.wk[idx] = wa[i];
        r.wg[idx] = wg;
        ++idx;
      }
    }
    return r;
  }();
  return rule;
}

struct Panel {
  double a, b;
  VecXc value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const VectorIntegrand& f, int m, double a, double b, VecXc& buf) {
  const Rule& r = gk15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<VecXc, 15> fx;
  VecXc k = VecXc::Zero(m), g = VecXc::Zero(m);
  VecX abs_k = VecX::Zero(m);
  for (int i = 0; i < 15; ++i) {
    f(c + h * r.x[i], buf);
    fx[i] = buf;
    k += r.wk[i] * buf;
    abs_k += r.wk[i] * buf.cwiseAbs();
    if (r.wg[i] != 0.0) g += r.wg[i] * buf;
  }
  // QUADPACK-style estimate: the raw |K − G| is scaled by the spread of the
  // integrand and floored at the roundoff level of the panel.
  const VecXc mean = 0.5 * k;
  VecX asc = VecX::Zero(m);
  for (int i = 0; i < 15; ++i) asc += r.wk[i] * (fx[i] - mean).cwiseAbs();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double err = 0.0;
  for (int j = 0; j < m; ++j) {
    double e = std::abs(k(j) - g(j)) * std::abs(h);
    const double resasc = asc(j) * std::abs(h), resabs = abs_k(j) * std::abs(h);
    if (resasc != 0.0 && e != 0.0) e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) e = std::max(50.0 * eps * resabs, e);
    err = std::max(err, e);
  }
  return Panel{a, b, k * h, err};
}

}  // namespace

Result adaptive_gk15(const VectorIntegrand& f, int m, const std::vector<double>& breakpoints,
                     const Options& opt) {
  if (breakpoints.size() < 2) throw std::invalid_argument("adaptive_gk15: need two breakpoints");
  VecXc buf(m);
  std::priority_queue<Panel> heap;
  Result res;
  res.value = VecXc::Zero(m);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    Panel p = eval_panel(f, m, breakpoints[i], breakpoints[i + 1], buf);
    res.value += p.value;
    res.error += p.error;
    heap.push(std::move(p));
  }
  res.evaluations = 15 * static_cast<int>(heap.size());

  auto target = [&] {
    return std::max(opt.abs_tol, opt.rel_tol * res.value.cwiseAbs().maxCoeff());
  };
  int stalled = 0;  // splits that failed to shrink the error: roundoff-limited
  while (res.error > target() && static_cast<int>(heap.size()) < opt.max_intervals && stalled < 50) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // cannot split further
      heap.push(std::move(worst));
      break;
    }
    Panel left = eval_panel(f, m, worst.a, mid, buf);
    Panel right = eval_panel(f, m, mid, worst.b, buf);
    res.evaluations += 30;
    if (left.error + right.error > 0.99 * worst.error) ++stalled;
    res.value += left.value + right.value - worst.value;
    res.error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  // Re-sum to shed the drift of incremental updates.
  res.value.setZero();
  res.error = 0.0;
  res.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    res.value += heap.top().value;
    res.error += heap.top().error;
    heap.pop();
  }
  res.converged = res.error <= target();
  return res;
}

void gauss_legendre(int order, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  // Golub–Welsch via Eigen keeps the order free instead of fixed templates.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    double beta = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(order);
  w.resize(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    x[i] = c + h * es.eigenvalues()(i);
    w[i] = 2.0 * h * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

}  // namespace dqed::quad
