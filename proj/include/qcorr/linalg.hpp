// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra for Hermitian operators on tensor-product
// spaces.
//
// Index convention: a multi-index (i_0, ..., i_{n-1}) over subsystem
// dimensions (d_0, ..., d_{n-1}) maps to the flat index
// sum_k i_k * stride_k with stride_k = prod_{l>k} d_l, i.e. subsystem 0 is
// the slowest-varying tensor index. Matrices are stored row-major.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/errors.hpp"

namespace qcorr {

using cplx = std::complex<double>;
using Dims = std::vector<std::size_t>;
using IndexSet = std::vector<std::size_t>;

namespace tol {
inline constexpr double structural = 1e-12;      // Hermiticity, unit trace
inline constexpr double spectral = 1e-10;        // PSD, eigenvalue clamping
inline constexpr double reconstruction = 1e-9;   // iterative solver output
inline constexpr double entropy_cutoff = 1e-12;  // eigenvalues treated as 0
}  // namespace tol

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != checked_size(rows, cols))
      throw ArgumentError("ComplexMatrix: entry count does not match shape");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  // |v><w|
  static ComplexMatrix outer(std::span<const cplx> v, std::span<const cplx> w) {
    ComplexMatrix m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  std::vector<cplx> column(std::size_t c) const {
    std::vector<cplx> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw ArgumentError("matrix product: inner dimensions differ");
    ComplexMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx* out = &m.data_[i * b.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0)) continue;
        const cplx* brow = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
      }
    }
    return m;
  }

  friend std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
    if (a.cols_ != v.size()) throw ArgumentError("matrix-vector product: size mismatch");
    std::vector<cplx> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * v[k];
      out[i] = s;
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw ArgumentError("ComplexMatrix: rows and cols must be >= 1");
    return rows * cols;
  }
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw ArgumentError("ComplexMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

// Max-abs entry of h - h^dagger.
inline double hermiticity_defect(const ComplexMatrix& h) {
  if (!h.is_square()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
  return m;
}

inline bool is_hermitian(const ComplexMatrix& h, double tolerance = tol::spectral) {
  return hermiticity_defect(h) <= tolerance;
}

// Max-abs entry of U^dagger U - I.
inline double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix g = u.adjoint() * u;
  return (g - ComplexMatrix::identity(g.rows())).max_abs();
}

namespace detail {

inline void require_hermitian(const ComplexMatrix& h, const char* what) {
  if (!h.is_square())
    throw ArgumentError(std::string(what) + ": matrix is not square");
  if (hermiticity_defect(h) > tol::spectral)
    throw ArgumentError(std::string(what) + ": matrix is not Hermitian within tolerance");
}

// Exactly Hermitian copy: (h + h^dagger)/2 with a real diagonal.
inline ComplexMatrix hermitized(const ComplexMatrix& h) {
  ComplexMatrix a = h;
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

inline Dims strides(const Dims& dims) {
  Dims s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

inline std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
// Wilkinson-style shifts. `diag` is overwritten with the eigenvalues, `off`
// holds the couplings off[i] between i and i+1 (off[n-1] ignored).
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return;
  off.resize(n);
  off[n - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw InvariantError("tridiagonal QL failed to converge");
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          const double f = s * off[i];
          const double b = c * off[i];
          off[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j is the eigenvector of values[j]
};

// Cyclic Jacobi eigensolver for Hermitian matrices. Each rotation is a phase
// change that makes the pivot real followed by a real Givens rotation.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  detail::require_hermitian(h, "hermitian_eig");
  const std::size_t n = h.rows();
  ComplexMatrix a = detail::hermitized(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(a.frobenius_norm(), 1e-300);

  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx g = a(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const cplx ph = g / ag;
        const cplx jqp = -s * std::conj(ph);
        const cplx jqq = c * std::conj(ph);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * s + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = s * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * ag;
        a(q, q) = aqq + t * ag;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * jqp;
          v(k, q) = vkp * s + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

namespace detail {

// Eigenvalues only, via Householder reduction to real tridiagonal form and
// implicit QL. No input validation; `h` must be Hermitian.
inline std::vector<double> eigenvalues_unchecked(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  ComplexMatrix a = hermitized(h);
  std::vector<double> diag(n), off(n, 0.0);
  std::vector<cplx> u(n), p(n), q(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double x0abs = std::abs(a(k + 1, k));
    if (xnorm2 - x0abs * x0abs <= 1e-300) {
      off[k] = x0abs;
      continue;
    }
    const double xnorm = std::sqrt(xnorm2);
    const cplx ph = x0abs > 0.0 ? a(k + 1, k) / x0abs : cplx(1.0);
    // v = x + ph*|x| e1, H = I - 2 v v^dagger / |v|^2 maps x to -ph*|x| e1
    const double vnorm2 = xnorm2 - x0abs * x0abs + (x0abs + xnorm) * (x0abs + xnorm);
    const double f = std::sqrt(2.0 / vnorm2);
    u[k + 1] = ph * (x0abs + xnorm) * f;
    for (std::size_t i = k + 2; i < n; ++i) u[i] = a(i, k) * f;

    cplx up = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * u[j];
      p[i] = s;
      up += std::conj(u[i]) * s;
    }
    const double half = 0.5 * up.real();
    for (std::size_t i = k + 1; i < n; ++i) q[i] = p[i] - half * u[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= u[i] * std::conj(q[j]) + q[i] * std::conj(u[j]);
    off[k] = xnorm;
  }
  if (n >= 2) off[n - 2] = std::abs(a(n - 1, n - 2));
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  tridiagonal_ql(diag, off);
  std::sort(diag.begin(), diag.end());
  return diag;
}

}  // namespace detail

// Ascending eigenvalues of a Hermitian matrix (tridiagonal QL route; used on
// hot paths where eigenvectors are not needed).
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  detail::require_hermitian(h, "hermitian_eigenvalues");
  return detail::eigenvalues_unchecked(h);
}

inline double trace_norm(const ComplexMatrix& a) {
  detail::require_hermitian(a, "trace_norm");
  double s = 0.0;
  for (double l : detail::eigenvalues_unchecked(a)) s += std::abs(l);
  return s;
}

// f(h) = V f(diag) V^dagger for Hermitian h.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f) {
  const EigenDecomposition e = hermitian_eig(h);
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx fj = f(e.values[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const cplx vr = e.vectors(r, j) * fj;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(e.vectors(c, j));
    }
  }
  return out;
}

// exp(-i h) for Hermitian h.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h) {
  return hermitian_function(h, [](double x) { return std::polar(1.0, -x); });
}

// Shannon entropy in bits of a spectrum; entries below the cutoff count as 0.
inline double spectral_entropy(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l > tol::entropy_cutoff) s -= l * std::log2(l);
  return s;
}

class DensityOperator {
 public:
  // Shape checks only; use `validated` for external input.
  DensityOperator(ComplexMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    if (!matrix_.is_square()) throw ArgumentError("DensityOperator: matrix is not square");
    if (dims_.empty()) throw ArgumentError("DensityOperator: empty dimension vector");
    for (std::size_t d : dims_)
      if (d == 0) throw ArgumentError("DensityOperator: zero subsystem dimension");
    if (detail::product(dims_) != matrix_.rows())
      throw ArgumentError("DensityOperator: product of dims does not match matrix size");
  }

  static DensityOperator validated(ComplexMatrix matrix, Dims dims) {
    DensityOperator rho(std::move(matrix), std::move(dims));
    rho.validate();
    return rho;
  }

  // Throws InvariantError if the operator is not a valid state.
  void validate() const {
    const double herm = hermiticity_defect(matrix_);
    if (herm > tol::structural)
      throw InvariantError("density operator is not Hermitian (defect " + std::to_string(herm) + ")");
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::structural)
      throw InvariantError("density operator does not have unit trace (trace " + std::to_string(tr) + ")");
    const double lmin = detail::eigenvalues_unchecked(matrix_).front();
    if (lmin < -tol::spectral)
      throw InvariantError("density operator is not positive semidefinite (min eigenvalue " +
                           std::to_string(lmin) + ")");
  }

  bool is_valid() const noexcept {
    try {
      validate();
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  std::size_t subsystems() const noexcept { return dims_.size(); }

  double purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    double s = 0.0;
    for (const auto& z : matrix_.data()) s += std::norm(z);
    return s;
  }

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

// A density operator on a single subsystem.
inline DensityOperator single_system(ComplexMatrix m) {
  const std::size_t n = m.rows();
  return DensityOperator(std::move(m), Dims{n});
}

namespace detail {

inline void require_indices(const IndexSet& idx, std::size_t n, const char* what) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= n) throw ArgumentError(std::string(what) + ": subsystem index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (idx[j] == idx[i]) throw ArgumentError(std::string(what) + ": repeated subsystem index");
  }
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, const IndexSet& subset) {
  const std::size_t n = m.rows();
  const Dims st = strides(dims);
  // masked[x] = contribution of the transposed digits to flat index x
  std::vector<std::size_t> masked(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t k : subset) masked[x] += ((x / st[k]) % dims[k]) * st[k];
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      out(r - masked[r] + masked[c], c - masked[c] + masked[r]) = m(r, c);
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const IndexSet& keep_sorted) {
  const std::size_t nsub = dims.size();
  std::vector<bool> kept(nsub, false);
  for (std::size_t k : keep_sorted) kept[k] = true;
  Dims kdims, tdims;
  for (std::size_t k = 0; k < nsub; ++k) (kept[k] ? kdims : tdims).push_back(dims[k]);
  const Dims st = strides(dims);
  const std::size_t dk = product(kdims);
  const std::size_t dt = tdims.empty() ? 1 : product(tdims);

  // flat offsets of kept-only and traced-only multi-indices
  auto offsets = [&](bool want_kept, std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t x = 0; x < count; ++x) {
      std::size_t rem = x;
      std::size_t acc = 0;
      for (std::size_t k = nsub; k-- > 0;) {
        if (kept[k] != want_kept) continue;
        acc += (rem % dims[k]) * st[k];
        rem /= dims[k];
      }
      off[x] = acc;
    }
    return off;
  };
  const auto koff = offsets(true, dk);
  const auto toff = offsets(false, dt);

  ComplexMatrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) s += m(koff[r] + toff[t], koff[c] + toff[t]);
      out(r, c) = s;
    }
  return out;
}

// (I (x) u (x) I) m (I (x) u (x) I)^dagger with u acting on subsystem k.
inline ComplexMatrix apply_local(const ComplexMatrix& m, const Dims& dims, std::size_t k, const ComplexMatrix& u) {
  const std::size_t n = m.rows();
  const std::size_t d = dims[k];
  const std::size_t lo = strides(dims)[k];
  const std::size_t block = d * lo;
  ComplexMatrix left(n, n);
  for (std::size_t hi = 0; hi < n; hi += block)
    for (std::size_t l = 0; l < lo; ++l)
      for (std::size_t j = 0; j < d; ++j) {
        cplx* out = &left.data()[(hi + j * lo + l) * n];
        for (std::size_t i = 0; i < d; ++i) {
          const cplx uji = u(j, i);
          if (uji == cplx(0.0)) continue;
          const cplx* in = &m.data()[(hi + i * lo + l) * n];
          for (std::size_t c = 0; c < n; ++c) out[c] += uji * in[c];
        }
      }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const cplx* in = &left.data()[r * n];
    cplx* o = &out.data()[r * n];
    for (std::size_t hi = 0; hi < n; hi += block)
      for (std::size_t l = 0; l < lo; ++l)
        for (std::size_t j = 0; j < d; ++j) {
          cplx s = 0.0;
          for (std::size_t i = 0; i < d; ++i) s += in[hi + i * lo + l] * std::conj(u(j, i));
          o[hi + j * lo + l] = s;
        }
  }
  return out;
}

// Reorders tensor factors: output subsystem j is input subsystem order[j].
inline ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, const IndexSet& order) {
  const std::size_t n = m.rows();
  const Dims st = strides(dims);
  Dims new_dims(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) new_dims[j] = dims[order[j]];
  const Dims nst = strides(new_dims);
  std::vector<std::size_t> map(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t y = 0;
    for (std::size_t j = 0; j < order.size(); ++j) y += ((x / st[order[j]]) % dims[order[j]]) * nst[j];
    map[x] = y;
  }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

inline double negative_part(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l < 0.0) s -= l;
  return s;
}

}  // namespace detail

// Reduced state on `keep` (subsystems kept in ascending index order).
inline DensityOperator partial_trace(const DensityOperator& rho, IndexSet keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  detail::require_indices(keep, rho.subsystems(), "partial_trace");
  std::sort(keep.begin(), keep.end());
  Dims kdims;
  for (std::size_t k : keep) kdims.push_back(rho.dims()[k]);
  return DensityOperator(detail::partial_trace(rho.matrix(), rho.dims(), keep), std::move(kdims));
}

inline ComplexMatrix partial_transpose(const DensityOperator& rho, const IndexSet& subset) {
  detail::require_indices(subset, rho.subsystems(), "partial_transpose");
  return detail::partial_transpose(rho.matrix(), rho.dims(), subset);
}

inline DensityOperator permute_subsystems(const DensityOperator& rho, const IndexSet& order) {
  if (order.size() != rho.subsystems())
    throw ArgumentError("permute_subsystems: order must name every subsystem once");
  detail::require_indices(order, rho.subsystems(), "permute_subsystems");
  Dims nd(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) nd[j] = rho.dims()[order[j]];
  return DensityOperator(detail::permute_subsystems(rho.matrix(), rho.dims(), order), std::move(nd));
}

inline DensityOperator unitary_conjugate(const DensityOperator& rho, const ComplexMatrix& u) {
  return DensityOperator(u * rho.matrix() * u.adjoint(), rho.dims());
}

inline double von_neumann_entropy(const DensityOperator& rho) {
  auto ev = detail::eigenvalues_unchecked(rho.matrix());
  for (double& l : ev)
    if (l < 0.0 && l >= -tol::spectral) l = 0.0;
  return spectral_entropy(ev);
}

inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw ArgumentError("trace_distance: dimension mismatch");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

}  // namespace qcorr
