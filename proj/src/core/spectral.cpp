#include "dqed/core/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "dqed/core/errors.hpp"

namespace dqed {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void require_periodic(const Grid& g, const char* who) {
  if (!g.periodic()) throw UnsupportedError(std::string(who) + ": periodic box required");
}

// Signed Fourier index for position i on an axis of length n.
int signed_index(int i, int n) { return i <= n / 2 ? i : i - n; }

double axis_wavenumber(int i, int n, double length) {
  if (n % 2 == 0 && i == n / 2) return 0.0;
  return 2.0 * pi * signed_index(i, n) / length;
}

// 1D derivative along an axis of n points.
MatX derivative_1d(int n, double length, bool periodic) {
  MatX d = MatX::Zero(n, n);
  const double h = length / n;
  if (periodic) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) {
          const double k = axis_wavenumber(m, n, length);
          // Re[(i k) e^{ik(i-j)h}] / n; the imaginary parts cancel in pairs.
          s += -k * std::sin(2.0 * pi * m * (i - j) / n);
        }
        d(i, j) = s / n;
      }
    return d;
  }
  const double c1 = 8.0 / (12.0 * h), c2 = 1.0 / (12.0 * h);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) d(i, i + 1) = c1;
    if (i - 1 >= 0) d(i, i - 1) = -c1;
    if (i + 2 < n) d(i, i + 2) = -c2;
    if (i - 2 >= 0) d(i, i - 2) = c2;
  }
  return d;
}

}  // namespace

std::vector<Vec3> wavevectors(const Grid& g) {
  require_periodic(g, "wavevectors");
  std::vector<Vec3> k(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    auto c = g.coords(static_cast<int>(idx));
    for (int a = 0; a < 3; ++a) k[idx][a] = axis_wavenumber(c[a], g.n[a], g.length[a]);
  }
  return k;
}

void fft3(const Grid& g, cd* data, int sign) {
  // Plans are cached per (shape, direction); FFTW_UNALIGNED lets one plan
  // serve every buffer, and execution with the new-array API is thread-safe.
  static std::map<std::array<int, 4>, fftw_plan> cache;
  const std::array<int, 4> key{g.n[0], g.n[1], g.n[2], sign < 0 ? -1 : 1};
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<cd> tmp(g.size());
      auto* t = reinterpret_cast<fftw_complex*>(tmp.data());
      plan = fftw_plan_dft_3d(g.n[0], g.n[1], g.n[2], t, t,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      cache.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

MatX derivative_matrix(const Grid& g, int axis) {
  if (!g.structured()) throw UnsupportedError("derivative_matrix: structured box required");
  const MatX d1 = derivative_1d(g.n[axis], g.length[axis], g.periodic());
  const int n = static_cast<int>(g.size());
  MatX d = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    auto ci = g.coords(i);
    for (int m = 0; m < g.n[axis]; ++m) {
      if (d1(ci[axis], m) == 0.0) continue;
      auto cj = ci;
      cj[axis] = m;
      d(i, g.index(cj[0], cj[1], cj[2])) = d1(ci[axis], m);
    }
  }
  return d;
}

MatX curl_matrix(const Grid& g) {
  const int n = static_cast<int>(g.size());
  MatX c = MatX::Zero(3 * n, 3 * n);
  for (int b = 0; b < 3; ++b) {
    const MatX d = derivative_matrix(g, b);
    for (int a = 0; a < 3; ++a)
      for (int cc = 0; cc < 3; ++cc) {
        // Levi-Civita ε_{a b cc}
        int eps = 0;
        if (a != b && b != cc && a != cc) eps = ((b - a + 3) % 3 == 1) ? 1 : -1;
        if (eps == 0) continue;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (d(i, j) != 0.0) c(3 * i + a, 3 * j + cc) += eps * d(i, j);
      }
  }
  return c;
}

MatXc translation_invariant_kernel(const Grid& g, const TensorSymbol& s) {
  const auto k = wavevectors(g);
  std::vector<Mat3c> sym(k.size());
  for (std::size_t m = 0; m < k.size(); ++m) sym[m] = s(k[m]);
  return translation_invariant_kernel(g, sym);
}

MatXc translation_invariant_kernel(const Grid& g, const std::vector<Mat3c>& sym) {
  require_periodic(g, "translation_invariant_kernel");
  const int n = static_cast<int>(g.size());
  if (sym.size() != g.size()) throw DimensionError("translation_invariant_kernel: one block per mode");

  // c_ab(Δ) = (1/N) Σ_m s_ab(k_m) e^{i k_m·Δ}
  std::vector<std::vector<cd>> c(9, std::vector<cd>(n));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      auto& buf = c[3 * a + b];
      for (int m = 0; m < n; ++m) buf[m] = sym[m](a, b) / static_cast<double>(n);
      fft3(g, buf.data(), +1);
    }

  MatXc out(3 * n, 3 * n);
  for (int i = 0; i < n; ++i) {
    auto ci = g.coords(i);
    for (int j = 0; j < n; ++j) {
      auto cj = g.coords(j);
      int d[3];
      for (int ax = 0; ax < 3; ++ax) d[ax] = ((ci[ax] - cj[ax]) % g.n[ax] + g.n[ax]) % g.n[ax];
      const int diff = g.index(d[0], d[1], d[2]);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out(3 * i + a, 3 * j + b) = c[3 * a + b][diff];
    }
  }
  return out;
}

VecXc apply_symbol(const Grid& g, const TensorSymbol& s, const VecXc& f) {
  require_periodic(g, "apply_symbol");
  const int n = static_cast<int>(g.size());
  if (f.size() != 3 * n) throw DimensionError("apply_symbol: field length must be 3N");
  const auto k = wavevectors(g);
  std::vector<std::vector<cd>> comp(3, std::vector<cd>(n));
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < n; ++i) comp[a][i] = f(3 * i + a);
    fft3(g, comp[a].data(), -1);
  }
  std::vector<std::vector<cd>> out(3, std::vector<cd>(n));
  for (int m = 0; m < n; ++m) {
    const Mat3c sm = s(k[m]);
    Vec3c v(comp[0][m], comp[1][m], comp[2][m]);
    Vec3c r = sm * v;
    for (int a = 0; a < 3; ++a) out[a][m] = r(a);
  }
  VecXc res(3 * n);
  for (int a = 0; a < 3; ++a) {
    fft3(g, out[a].data(), +1);
    for (int i = 0; i < n; ++i) res(3 * i + a) = out[a][i] / static_cast<double>(n);
  }
  return res;
}

MatXc to_kspace(const Grid& g, const MatXc& a) {
  require_periodic(g, "to_kspace");
  const int n = static_cast<int>(g.size());
  if (a.rows() != 3 * n || a.cols() != 3 * n) throw DimensionError("to_kspace: shape");
  MatXc b(3 * n, 3 * n);
  std::vector<cd> buf(n);
  // B = A U: backward transform along the column point index.
  for (int r = 0; r < 3 * n; ++r)
    for (int comp = 0; comp < 3; ++comp) {
      for (int j = 0; j < n; ++j) buf[j] = a(r, 3 * j + comp);
      fft3(g, buf.data(), +1);
      for (int m = 0; m < n; ++m) b(r, 3 * m + comp) = buf[m];
    }
  // U† B: forward transform along the row point index.
  MatXc out(3 * n, 3 * n);
  for (int col = 0; col < 3 * n; ++col)
    for (int comp = 0; comp < 3; ++comp) {
      for (int i = 0; i < n; ++i) buf[i] = b(3 * i + comp, col);
      fft3(g, buf.data(), -1);
      for (int m = 0; m < n; ++m) out(3 * m + comp, col) = buf[m] / static_cast<double>(n);
    }
  return out;
}

}  // namespace dqed
