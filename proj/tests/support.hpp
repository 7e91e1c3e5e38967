#pragma once

#include <cmath>
#include <random>

#include "dqed/core/types.hpp"

namespace dqed::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }

inline cd cuniform(Rng& r, double lo, double hi) { return {uniform(r, lo, hi), uniform(r, lo, hi)}; }

inline double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Root with Re > 0, i.e. the decaying branch of e^{-κ|z|}.
inline cd decaying_sqrt(cd x) {
  cd s = std::sqrt(x);
  return s.real() < 0.0 ? -s : s;
}

}  // namespace dqed::test
