#pragma once

#include <functional>
#include <vector>

#include "dqed/core/grid.hpp"

namespace dqed {

// k-space symbol of a translation-invariant dyadic kernel.
using TensorSymbol = std::function<Mat3c(const Vec3& k)>;

// Wave vector of every Fourier mode of a periodic box, in the same index
// order as the grid points. The Nyquist component along an even axis is set
// to zero: it keeps the spectral derivative real and antisymmetric, and the
// same vectors drive every symbol so curl, projectors and k-space media stay
// mutually consistent on the grid.
std::vector<Vec3> wavevectors(const Grid& g);

// In-place unnormalized 3D DFT over the grid's shape. sign = -1 forward,
// +1 backward. Thread-safe.
void fft3(const Grid& g, cd* data, int sign);

// N×N first-derivative matrix along `axis`: spectral on periodic boxes,
// fourth-order central differences with zero padding on open boxes.
MatX derivative_matrix(const Grid& g, int axis);

// 3N×3N curl, (∇×f)_a = ε_abc ∂_b f_c. Real symmetric on both topologies.
MatX curl_matrix(const Grid& g);

// Weighted matrix of the periodic operator whose symbol is s(k). On a
// uniform box the weighted matrix equals the operator matrix.
MatXc translation_invariant_kernel(const Grid& g, const TensorSymbol& s);
// Same, with one 3×3 block per Fourier mode (index order of wavevectors()).
MatXc translation_invariant_kernel(const Grid& g, const std::vector<Mat3c>& per_mode);

// Applies s(k) to a 3-component field (index 3·point + component) via FFT.
VecXc apply_symbol(const Grid& g, const TensorSymbol& s, const VecXc& f);

// U† A U with U the unitary plane-wave basis (columns 3·mode + component).
// A translation-invariant kernel becomes block diagonal; block m holds the
// symbol at wavevectors()[m].
MatXc to_kspace(const Grid& g, const MatXc& a);

}  // namespace dqed
