// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lattice.hpp
 * @brief Periodic lattice for the N-particle configuration space and
 *        N-body wave functions living on it.
 *
 * Axis layout: particle a, spatial component j maps to axis a*d + j.
 * Sites are stored row-major, so axis 0 varies slowest. Coordinates run
 * over x_m = -L/2 + m*h, m = 0..M-1.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosedyn/error.hpp"

namespace bosedyn {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;
using RealField = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Default ceiling on the number of lattice sites of one tensor (2^27).
inline constexpr std::size_t kDefaultSiteCap = std::size_t{1} << 27;

struct Grid {
  int d = 1;
  int N = 1;
  int M = 0;
  double L = 0.0;
  double h = 0.0;
  std::size_t sites = 0;
  std::vector<double> coords;

  int axes() const { return d * N; }
  /// Volume element h^{dN}.
  double cell_volume() const;
  /// Volume element of one particle slot, h^d.
  double slot_volume() const;
  std::size_t axis_stride(int axis) const;
  /// Lattice index of `axis` at `site`.
  int index(std::size_t site, int axis) const {
    return static_cast<int>((site / axis_stride(axis)) % static_cast<std::size_t>(M));
  }
  std::vector<int> shape() const { return std::vector<int>(static_cast<std::size_t>(axes()), M); }

  bool same_lattice(const Grid& other) const {
    return d == other.d && N == other.N && M == other.M && L == other.L;
  }
};

/// Accepts M = 2^k or M = 3*2^k (k >= 2); both are FFT-friendly.
bool admissible_points_per_axis(int M);

Grid make_grid(int d, int N, int M, double L, std::size_t site_cap = kDefaultSiteCap);

/// Minimal-image lattice offset in [-M/2, M/2).
inline int min_image(int delta, int M) {
  int r = delta % M;
  if (r < 0) r += M;
  return r >= M / 2 ? r - M : r;
}

/// Sign of a minimal-image offset; the antipodal offset -M/2 is assigned 0
/// so that the sign stays odd under exchange.
inline double min_image_sign(int offset, int M) {
  if (offset == 0 || 2 * offset == -M) return 0.0;
  return offset > 0 ? 1.0 : -1.0;
}

/// Spectral operators for a periodic box with `shape` points per axis and
/// edge `length` on every axis. Plans are shared through a process-wide cache.
class Spectral {
 public:
  Spectral(std::vector<int> shape, double length);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  static const Spectral& get(const std::vector<int>& shape, double length);
  static const Spectral& get(const Grid& grid) { return get(grid.shape(), grid.L); }

  std::size_t size() const { return size_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  double length() const { return length_; }

  /// Unnormalized forward DFT (sign -1).
  void forward(const cplx* in, cplx* out) const;
  /// Inverse DFT including the 1/size factor.
  void inverse(const cplx* in, cplx* out) const;

  /// Angular wavenumber 2*pi*m/L of axis index m in FFT order.
  double wavenumber(int m, int axis) const;
  /// Multiplier of d/dx on one axis; the Nyquist mode is mapped to zero.
  double derivative_wavenumber(int m, int axis) const;
  int mode_index(std::size_t flat, int axis) const;

  ComplexField derivative(const ComplexField& f, int axis) const;
  /// All first derivatives, axis-ordered, from one forward transform.
  std::vector<ComplexField> gradient(const ComplexField& f) const;
  ComplexField laplacian(const ComplexField& f) const;
  RealField derivative(const RealField& f, int axis) const;
  RealField laplacian(const RealField& f) const;
  /// Second derivative d/dx_i d/dx_j built from first-derivative multipliers.
  RealField mixed_derivative(const RealField& f, int axis_i, int axis_j) const;
  /// Circular convolution sum_y a(x-y) b(y) (no volume factor).
  RealField convolve(const RealField& a, const RealField& b) const;

 private:
  std::vector<int> shape_;
  double length_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);

struct WaveFunction {
  Grid grid;
  ComplexField values;
  double t = 0.0;
  bool symmetric = false;
};

using Orbital = std::function<cplx(std::span<const double>)>;

/// Normalized Gaussian-like orbital centered at `center` with width `width`
/// and carrier wavevector `k` (all d-dimensional).
Orbital gaussian_orbital(std::vector<double> center, double width, std::vector<double> k = {});
/// Gaussian summed over periodic images (|n| <= 4 per axis) so that it is
/// smooth across the torus seam; each k_j must be an integer multiple of
/// 2 pi / L (InvalidArgument otherwise).
Orbital periodic_gaussian_orbital(std::vector<double> center, double width, double L, std::vector<double> k = {});
/// e^{i k.x} / sqrt(L^d).
Orbital plane_wave_orbital(std::vector<double> k, double L);

WaveFunction product_state(const Grid& grid, const Orbital& orbital);
/// Product of (generally different) orbitals, one per slot; not symmetrized.
WaveFunction product_state(const Grid& grid, const std::vector<Orbital>& orbitals);

double l2_norm(const WaveFunction& psi);
double h1_norm(const WaveFunction& psi);
cplx inner(const WaveFunction& psi, const WaveFunction& phi);
/// Squared L2 norm of the gradient in the slot of particle a.
double slot_gradient_norm_sq(const WaveFunction& psi, int a);
void normalize(WaveFunction& psi);

/// Relabel particle slots: result(x_1..x_N) = psi(x_{perm[0]}, ..., x_{perm[N-1]}).
ComplexField permute_slots(const Grid& grid, const ComplexField& values, std::span<const int> perm);
WaveFunction transpose(const WaveFunction& psi, int a, int b);

struct SymmetryReport {
  double max_deviation = 0.0;
  std::pair<int, int> pair{0, 0};
};

/// Largest sup-norm deviation under any slot transposition, relative to sup|psi|.
SymmetryReport symmetry_report(const WaveFunction& psi);

inline constexpr int kMaxSymmetrizeParticles = 6;

WaveFunction symmetrize(const WaveFunction& psi);

/// Fraction of |psi|^2 within `width_cells` lattice cells of the box faces.
double boundary_mass(const WaveFunction& psi, int width_cells = 2);

void write_snapshot(const std::string& path, const WaveFunction& psi);
WaveFunction read_snapshot(const std::string& path);

}  // namespace bosedyn
