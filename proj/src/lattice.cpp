// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace bosedyn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionOutOfRange: return "dimension-out-of-range";
    case ErrorCode::MemoryCapExceeded: return "memory-cap-exceeded";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::ZeroNormOrbital: return "zero-norm-orbital";
    case ErrorCode::PermutationBudgetExceeded: return "permutation-budget-exceeded";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::NonFiniteValues: return "non-finite-values";
    case ErrorCode::InsufficientSnapshots: return "insufficient-snapshots";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::ForcingSampleGap: return "forcing-sample-gap";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::ValidationError: return "validation-error";
    case ErrorCode::UnknownOracle: return "unknown-oracle";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown-error";
}

// ---------------------------------------------------------------- Grid

double Grid::cell_volume() const { return std::pow(h, d * N); }
double Grid::slot_volume() const { return std::pow(h, d); }

std::size_t Grid::axis_stride(int axis) const {
  std::size_t s = 1;
  for (int k = axes() - 1; k > axis; --k) s *= static_cast<std::size_t>(M);
  return s;
}

bool admissible_points_per_axis(int M) {
  if (M < 4) return false;
  auto u = static_cast<unsigned>(M);
  if (std::has_single_bit(u)) return true;
  return u % 3 == 0 && std::has_single_bit(u / 3) && u / 3 >= 4;
}

Grid make_grid(int d, int N, int M, double L, std::size_t site_cap) {
  if (d < 1 || d > 3) throw Error(ErrorCode::DimensionOutOfRange, "d must be 1, 2 or 3");
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be at least 1");
  if (!admissible_points_per_axis(M))
    throw Error(ErrorCode::InvalidArgument, "M must be a power of two (or 3 times one), at least 4");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorCode::InvalidArgument, "L_box must be positive");

  const int axes = d * N;
  long double total = std::pow(static_cast<long double>(M), axes);
  if (total > static_cast<long double>(site_cap))
    throw Error(ErrorCode::MemoryCapExceeded,
                "M^(dN) = " + std::to_string(static_cast<double>(total)) + " sites exceeds cap " +
                    std::to_string(site_cap));

  Grid g;
  g.d = d;
  g.N = N;
  g.M = M;
  g.L = L;
  g.h = L / M;
  g.sites = static_cast<std::size_t>(total);
  g.coords.resize(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) g.coords[m] = -0.5 * L + m * g.h;
  return g;
}

// ---------------------------------------------------------------- Spectral

Spectral::Spectral(std::vector<int> shape, double length) : shape_(std::move(shape)), length_(length) {
  size_ = 1;
  for (int n : shape_) size_ *= static_cast<std::size_t>(n);
  strides_.assign(shape_.size(), 1);
  for (int k = rank() - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * static_cast<std::size_t>(shape_[k + 1]);

  auto* a = fftw_alloc_complex(size_);
  auto* b = fftw_alloc_complex(size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft(rank(), shape_.data(), a, b, FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft(rank(), shape_.data(), a, b, FFTW_BACKWARD, flags);
  fftw_free(a);
  fftw_free(b);
}

Spectral::~Spectral() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const Spectral& Spectral::get(const std::vector<int>& shape, double length) {
  static std::mutex mutex;
  static std::map<std::pair<std::vector<int>, double>, std::unique_ptr<Spectral>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(shape, length);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Spectral>(shape, length)).first;
  return *it->second;
}

namespace {

void execute(void* plan, const cplx* in, cplx* out, std::size_t n) {
  // Plans are out-of-place; route aliasing calls through a scratch copy.
  if (in == out) {
    ComplexField tmp(in, in + n);
    fftw_execute_dft(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out));
    return;
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void Spectral::forward(const cplx* in, cplx* out) const { execute(forward_plan_, in, out, size_); }

void Spectral::inverse(const cplx* in, cplx* out) const {
  execute(inverse_plan_, in, out, size_);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] *= scale;
}

int Spectral::mode_index(std::size_t flat, int axis) const {
  return static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(shape_[axis]));
}

double Spectral::wavenumber(int m, int axis) const {
  const int n = shape_[axis];
  const int signed_m = m < n / 2 ? m : m - n;
  return 2.0 * kPi * signed_m / length_;
}

double Spectral::derivative_wavenumber(int m, int axis) const {
  if (2 * m == shape_[axis]) return 0.0;
  return wavenumber(m, axis);
}

ComplexField Spectral::derivative(const ComplexField& f, int axis) const {
  ComplexField hat(size_);
  forward(f.data(), hat.data());
  for (std::size_t i = 0; i < size_; ++i) hat[i] *= cplx(0.0, derivative_wavenumber(mode_index(i, axis), axis));
  ComplexField out(size_);
  inverse(hat.data(), out.data());
  return out;
}

std::vector<ComplexField> Spectral::gradient(const ComplexField& f) const {
  ComplexField hat(size_);
  forward(f.data(), hat.data());
  std::vector<ComplexField> out(static_cast<std::size_t>(rank()), ComplexField(size_));
  ComplexField work(size_);
  for (int axis = 0; axis < rank(); ++axis) {
    for (std::size_t i = 0; i < size_; ++i)
      work[i] = hat[i] * cplx(0.0, derivative_wavenumber(mode_index(i, axis), axis));
    inverse(work.data(), out[axis].data());
  }
  return out;
}

ComplexField Spectral::laplacian(const ComplexField& f) const {
  ComplexField hat(size_);
  forward(f.data(), hat.data());
  for (std::size_t i = 0; i < size_; ++i) {
    double k2 = 0.0;
    for (int axis = 0; axis < rank(); ++axis) {
      const double k = wavenumber(mode_index(i, axis), axis);
      k2 += k * k;
    }
    hat[i] *= -k2;
  }
  ComplexField out(size_);
  inverse(hat.data(), out.data());
  return out;
}

ComplexField to_complex(const RealField& f) { return ComplexField(f.begin(), f.end()); }

RealField real_part(const ComplexField& f) {
  RealField out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

RealField Spectral::derivative(const RealField& f, int axis) const {
  return real_part(derivative(to_complex(f), axis));
}

RealField Spectral::laplacian(const RealField& f) const { return real_part(laplacian(to_complex(f))); }

RealField Spectral::mixed_derivative(const RealField& f, int axis_i, int axis_j) const {
  ComplexField hat(size_);
  ComplexField in = to_complex(f);
  forward(in.data(), hat.data());
  for (std::size_t n = 0; n < size_; ++n)
    hat[n] *= -derivative_wavenumber(mode_index(n, axis_i), axis_i) *
              derivative_wavenumber(mode_index(n, axis_j), axis_j);
  ComplexField out(size_);
  inverse(hat.data(), out.data());
  return real_part(out);
}

RealField Spectral::convolve(const RealField& a, const RealField& b) const {
  ComplexField ah(size_), bh(size_);
  ComplexField ac = to_complex(a), bc = to_complex(b);
  forward(ac.data(), ah.data());
  forward(bc.data(), bh.data());
  for (std::size_t i = 0; i < size_; ++i) ah[i] *= bh[i];
  ComplexField out(size_);
  inverse(ah.data(), out.data());
  return real_part(out);
}

// ---------------------------------------------------------------- orbitals

Orbital gaussian_orbital(std::vector<double> center, double width, std::vector<double> k) {
  if (k.empty()) k.assign(center.size(), 0.0);
  return [center = std::move(center), width, k = std::move(k)](std::span<const double> x) {
    double r2 = 0.0, phase = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double dx = x[j] - center[j];
      r2 += dx * dx;
      phase += k[j] * x[j];
    }
    return std::exp(-0.5 * r2 / (width * width)) * std::polar(1.0, phase);
  };
}

Orbital periodic_gaussian_orbital(std::vector<double> center, double width, double L, std::vector<double> k) {
  if (k.empty()) k.assign(center.size(), 0.0);
  for (double kj : k) {
    const double n = kj * L / (2.0 * kPi);
    if (std::abs(n - std::round(n)) > 1e-9) throw Error(ErrorCode::InvalidArgument, "wavevector must be a multiple of 2 pi / L");
  }
  constexpr int kImages = 4;
  return [center = std::move(center), width, L, k = std::move(k)](std::span<const double> x) {
    double amp = 1.0, phase = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double sum = 0.0;
      for (int n = -kImages; n <= kImages; ++n) {
        const double dx = x[j] - center[j] + n * L;
        sum += std::exp(-0.5 * dx * dx / (width * width));
      }
      amp *= sum;
      phase += k[j] * x[j];
    }
    return amp * std::polar(1.0, phase);
  };
}

Orbital plane_wave_orbital(std::vector<double> k, double L) {
  const double amp = 1.0 / std::sqrt(std::pow(L, static_cast<double>(k.size())));
  return [k = std::move(k), amp](std::span<const double> x) {
    double phase = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) phase += k[j] * x[j];
    return amp * std::polar(1.0, phase);
  };
}

namespace {

ComplexField sample_orbital(const Grid& grid, const Orbital& orbital) {
  const Grid one = make_grid(grid.d, 1, grid.M, grid.L);
  ComplexField out(one.sites);
  std::vector<double> x(static_cast<std::size_t>(grid.d));
  for (std::size_t s = 0; s < one.sites; ++s) {
    for (int j = 0; j < grid.d; ++j) x[j] = one.coords[one.index(s, j)];
    out[s] = orbital(x);
  }
  return out;
}

}  // namespace

WaveFunction product_state(const Grid& grid, const std::vector<Orbital>& orbitals) {
  if (static_cast<int>(orbitals.size()) != grid.N)
    throw Error(ErrorCode::InvalidArgument, "need one orbital per particle");
  std::vector<ComplexField> factors;
  for (const auto& orb : orbitals) {
    factors.push_back(sample_orbital(grid, orb));
    double n2 = 0.0;
    for (cplx z : factors.back()) n2 += std::norm(z);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error(ErrorCode::ZeroNormOrbital, "orbital has zero norm");
  }
  WaveFunction psi{grid, ComplexField(grid.sites), 0.0, false};
  const std::size_t slot_sites = factors.front().size();
  for (std::size_t s = 0; s < grid.sites; ++s) {
    cplx v = 1.0;
    std::size_t rest = s;
    for (int a = grid.N - 1; a >= 0; --a) {
      v *= factors[a][rest % slot_sites];
      rest /= slot_sites;
    }
    psi.values[s] = v;
  }
  normalize(psi);
  return psi;
}

WaveFunction product_state(const Grid& grid, const Orbital& orbital) {
  WaveFunction psi = product_state(grid, std::vector<Orbital>(static_cast<std::size_t>(grid.N), orbital));
  psi.symmetric = true;
  return psi;
}

// ---------------------------------------------------------------- norms

double l2_norm(const WaveFunction& psi) {
  double s = 0.0;
  for (cplx z : psi.values) s += std::norm(z);
  return std::sqrt(s * psi.grid.cell_volume());
}

namespace {

/// sum_k w(k) |psi_hat(k)|^2 scaled to a continuum integral.
template <class Weight>
double spectral_quadratic(const WaveFunction& psi, Weight weight) {
  const Spectral& sp = Spectral::get(psi.grid);
  ComplexField hat(sp.size());
  sp.forward(psi.values.data(), hat.data());
  double s = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) s += weight(sp, i) * std::norm(hat[i]);
  return s * psi.grid.cell_volume() / static_cast<double>(sp.size());
}

}  // namespace

double slot_gradient_norm_sq(const WaveFunction& psi, int a) {
  const int d = psi.grid.d;
  return spectral_quadratic(psi, [a, d](const Spectral& sp, std::size_t i) {
    double k2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double k = sp.wavenumber(sp.mode_index(i, a * d + j), a * d + j);
      k2 += k * k;
    }
    return k2;
  });
}

double h1_norm(const WaveFunction& psi) {
  const double kin = spectral_quadratic(psi, [](const Spectral& sp, std::size_t i) {
    double k2 = 0.0;
    for (int axis = 0; axis < sp.rank(); ++axis) {
      const double k = sp.wavenumber(sp.mode_index(i, axis), axis);
      k2 += k * k;
    }
    return k2;
  });
  const double l2 = l2_norm(psi);
  return std::sqrt(l2 * l2 + kin);
}

cplx inner(const WaveFunction& psi, const WaveFunction& phi) {
  if (!psi.grid.same_lattice(phi.grid)) throw Error(ErrorCode::GridMismatch, "inner product across grids");
  cplx s = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) s += std::conj(psi.values[i]) * phi.values[i];
  return s * psi.grid.cell_volume();
}

void normalize(WaveFunction& psi) {
  const double n = l2_norm(psi);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::ZeroNormOrbital, "state has zero norm");
  for (cplx& z : psi.values) z /= n;
}

// ---------------------------------------------------------------- symmetry

ComplexField permute_slots(const Grid& grid, const ComplexField& values, std::span<const int> perm) {
  const std::size_t slot_sites = static_cast<std::size_t>(std::pow(grid.M, grid.d));
  std::vector<std::size_t> slot_stride(static_cast<std::size_t>(grid.N), 1);
  for (int a = grid.N - 2; a >= 0; --a) slot_stride[a] = slot_stride[a + 1] * slot_sites;

  ComplexField out(values.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.N));
  for (std::size_t s = 0; s < grid.sites; ++s) {
    std::size_t rest = s;
    for (int a = grid.N - 1; a >= 0; --a) {
      idx[a] = rest % slot_sites;
      rest /= slot_sites;
    }
    std::size_t src = 0;
    for (int a = 0; a < grid.N; ++a) src += idx[perm[a]] * slot_stride[a];
    out[s] = values[src];
  }
  return out;
}

WaveFunction transpose(const WaveFunction& psi, int a, int b) {
  std::vector<int> perm(static_cast<std::size_t>(psi.grid.N));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[a], perm[b]);
  WaveFunction out = psi;
  out.values = permute_slots(psi.grid, psi.values, perm);
  return out;
}

SymmetryReport symmetry_report(const WaveFunction& psi) {
  SymmetryReport rep;
  double sup = 0.0;
  for (cplx z : psi.values) sup = std::max(sup, std::abs(z));
  if (sup == 0.0) return rep;
  for (int a = 0; a < psi.grid.N; ++a)
    for (int b = a + 1; b < psi.grid.N; ++b) {
      const WaveFunction t = transpose(psi, a, b);
      double dev = 0.0;
      for (std::size_t i = 0; i < psi.values.size(); ++i) dev = std::max(dev, std::abs(t.values[i] - psi.values[i]));
      dev /= sup;
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.pair = {a, b};
      }
    }
  return rep;
}

WaveFunction symmetrize(const WaveFunction& psi) {
  const int N = psi.grid.N;
  if (N > kMaxSymmetrizeParticles)
    throw Error(ErrorCode::PermutationBudgetExceeded, "N! permutations exceed the budget (N <= 6)");
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  ComplexField acc(psi.values.size(), cplx{});
  double count = 0.0;
  do {
    const ComplexField p = permute_slots(psi.grid, psi.values, perm);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (cplx& z : acc) z /= count;

  WaveFunction out{psi.grid, std::move(acc), psi.t, true};
  const double in_norm = l2_norm(psi);
  const double out_norm = l2_norm(out);
  if (!(out_norm > 1e-12 * in_norm))
    throw Error(ErrorCode::ZeroNormOrbital, "symmetric projection vanishes");
  for (cplx& z : out.values) z /= out_norm;
  return out;
}

double boundary_mass(const WaveFunction& psi, int width_cells) {
  const Grid& g = psi.grid;
  double edge = 0.0, total = 0.0;
  for (std::size_t s = 0; s < g.sites; ++s) {
    const double w = std::norm(psi.values[s]);
    total += w;
    for (int axis = 0; axis < g.axes(); ++axis) {
      const int m = g.index(s, axis);
      if (m < width_cells || m >= g.M - width_cells) {
        edge += w;
        break;
      }
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

// ---------------------------------------------------------------- snapshot IO

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

void write_snapshot(const std::string& path, const WaveFunction& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::int64_t header_int[3] = {psi.grid.d, psi.grid.N, psi.grid.M};
  const double header_real[2] = {psi.grid.L, psi.t};
  out.write(reinterpret_cast<const char*>(header_int), sizeof header_int);
  out.write(reinterpret_cast<const char*>(header_real), sizeof header_real);
  out.write(reinterpret_cast<const char*>(psi.values.data()),
            static_cast<std::streamsize>(psi.values.size() * sizeof(cplx)));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

WaveFunction read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::int64_t header_int[3];
  double header_real[2];
  in.read(reinterpret_cast<char*>(header_int), sizeof header_int);
  in.read(reinterpret_cast<char*>(header_real), sizeof header_real);
  if (!in) throw Error(ErrorCode::IoError, "truncated header in " + path);
  WaveFunction psi;
  psi.grid = make_grid(static_cast<int>(header_int[0]), static_cast<int>(header_int[1]),
                       static_cast<int>(header_int[2]), header_real[0]);
  psi.t = header_real[1];
  psi.values.resize(psi.grid.sites);
  in.read(reinterpret_cast<char*>(psi.values.data()), static_cast<std::streamsize>(psi.values.size() * sizeof(cplx)));
  if (!in) throw Error(ErrorCode::IoError, "truncated payload in " + path);
  return psi;
}

}  // namespace bosedyn
