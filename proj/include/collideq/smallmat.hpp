#pragma once

// Dense complex linear algebra for the handful of small Hilbert spaces used by
// the collision model (dimensions 2, 4 and 8). Everything here is a pure
// function on immutable values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collideq/error.hpp"

namespace collideq {

using complex = std::complex<double>;

namespace tol {
inline constexpr double algebraic = 1e-12;   // exact identities (kron, traces, hermiticity)
inline constexpr double spectral = 1e-10;    // anything that went through an eigensolver
inline constexpr double positivity = 1e-10;  // eigenvalues above -positivity count as >= 0
}  // namespace tol

/// Square complex matrix stored row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    require(dim >= 1, "ComplexMatrix: dimension must be >= 1");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows)
      : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      require(row.size() == dim_, "ComplexMatrix: rows must form a square matrix");
      std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const complex> entries) {
    ComplexMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<complex> entries) {
    return diagonal(std::span<const complex>(entries.begin(), entries.size()));
  }

  std::size_t dim() const noexcept { return dim_; }

  complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  std::span<const complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  complex trace() const noexcept {
    complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  bool is_hermitian(double tolerance = tol::algebraic) const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tolerance) return false;
    return true;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
  friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_dim(b);
    const std::size_t n = a.dim_;
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const complex aik = a(i, k);
        if (aik == complex{}) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void check_same_dim(const ComplexMatrix& o) const {
    require(dim_ == o.dim_, "ComplexMatrix: dimension mismatch (" + std::to_string(dim_) + " vs " +
                                std::to_string(o.dim_) + ")");
  }

  std::size_t dim_;
  std::vector<complex> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

/// Kronecker product: entry (i*db + k, j*db + l) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix r(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const complex aij = a(i, j);
      if (aij == complex{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
    }
  return r;
}

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, complex(0, -1)}, {complex(0, 1), 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

namespace detail {

inline double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

inline double frobenius_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return s;
}

// One unitary rotation in the (p,q) plane that annihilates a(p,q).
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const complex phase = apq / g;
  const double app = a(p, p).real(), aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // G = P R with P = diag(.., 1, .., conj(phase), ..) and R a real Givens rotation.
  const complex gpp = c, gpq = s;
  const complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
  const std::size_t n = a.dim();

  for (std::size_t k = 0; k < n; ++k) {
    const complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace detail

inline Spectrum hermitian_eig(const ComplexMatrix& h) {
  require(h.all_finite(), "hermitian_eig: matrix has non-finite entries");
  require(h.is_hermitian(tol::spectral), "hermitian_eig: matrix is not Hermitian");
  const std::size_t n = h.dim();

  // Work on the exactly Hermitian part so rounding asymmetry cannot leak in.
  ComplexMatrix a = (h + h.adjoint()) * complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = detail::frobenius_norm2(a);
  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = detail::off_diagonal_norm2(a);
    if (off <= 1e-32 * scale || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  Spectrum out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) { return hermitian_eig(h).eigenvalues; }

/// V f(Lambda) V^dagger for Hermitian h. Throws domain_error when f is not finite
/// on one of the eigenvalues.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f) {
  const Spectrum sp = hermitian_eig(h);
  const std::size_t n = h.dim();
  std::vector<complex> fl(n);
  for (std::size_t k = 0; k < n; ++k) {
    fl[k] = complex(std::invoke(f, sp.eigenvalues[k]));
    if (!std::isfinite(fl[k].real()) || !std::isfinite(fl[k].imag()))
      throw domain_error("hermitian_function: f undefined at eigenvalue " + std::to_string(sp.eigenvalues[k]));
  }
  const ComplexMatrix& v = sp.eigenvectors;
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * fl[k] * std::conj(v(j, k));
      r(i, j) = s;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Partial trace
// ---------------------------------------------------------------------------

/// Traces out every factor of `dims` not listed in `keep`. `keep` must be a
/// strictly increasing, nonempty list of factor indices.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
  require(!dims.empty(), "partial_trace: no subsystem dimensions");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  require(total == m.dim(), "partial_trace: subsystem dimensions do not multiply to matrix dimension");
  require(!keep.empty(), "partial_trace: keep set is empty");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    require(keep[k] < dims.size(), "partial_trace: subsystem index " + std::to_string(keep[k]) + " out of range");
    require(k == 0 || keep[k - 1] < keep[k], "partial_trace: keep indices must be strictly increasing");
  }

  const std::size_t nf = dims.size();
  std::vector<std::size_t> stride(nf);
  for (std::size_t k = nf, s = 1; k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }
  std::vector<bool> kept(nf, false);
  for (auto k : keep) kept[k] = true;

  // Offsets into the full index for every multi-index of the kept (resp. traced) factors.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> off{0};
    for (std::size_t k = 0; k < nf; ++k) {
      if (kept[k] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(off.size() * dims[k]);
      for (auto o : off)
        for (std::size_t d = 0; d < dims[k]; ++d) next.push_back(o + d * stride[k]);
      off = std::move(next);
    }
    return off;
  };
  const auto keep_off = offsets(true);
  const auto trace_off = offsets(false);

  ComplexMatrix r(keep_off.size());
  for (std::size_t i = 0; i < keep_off.size(); ++i)
    for (std::size_t j = 0; j < keep_off.size(); ++j) {
      complex s = 0.0;
      for (auto t : trace_off) s += m(keep_off[i] + t, keep_off[j] + t);
      r(i, j) = s;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Hermitian, unit-trace, positive semidefinite matrix over a tensor product
/// of factors with the given dimensions.
class DensityMatrix {
 public:
  DensityMatrix() : DensityMatrix(ComplexMatrix{{1.0}}) {}

  explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(std::move(m), {}) {}

  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims) : mat_(std::move(m)), dims_(std::move(dims)) {
    if (dims_.empty()) dims_ = {mat_.dim()};
    validate();
  }

  /// Builds a density matrix from a numerically computed operator (a marginal or
  /// a conjugated state): hermitizes, clips eigenvalues in [-positivity, 0) to 0
  /// and renormalizes the trace, then validates as usual.
  static DensityMatrix from_computed(const ComplexMatrix& m, std::vector<std::size_t> dims = {}) {
    require(m.is_hermitian(tol::spectral), "DensityMatrix: computed operator is not Hermitian");
    ComplexMatrix h = (m + m.adjoint()) * complex(0.5);
    const Spectrum sp = hermitian_eig(h);
    if (!sp.eigenvalues.empty() && sp.eigenvalues.front() < 0.0) {
      require(sp.eigenvalues.front() >= -tol::positivity,
              "DensityMatrix: computed operator has eigenvalue " + std::to_string(sp.eigenvalues.front()));
      h = hermitian_function(h, [](double x) { return std::max(x, 0.0); });
    }
    const double tr = h.trace().real();
    require(std::abs(tr - 1.0) <= 1e-8, "DensityMatrix: computed operator has trace " + std::to_string(tr));
    h *= complex(1.0 / tr);
    return DensityMatrix(std::move(h), std::move(dims), std::max(sp.eigenvalues.front(), 0.0) / tr);
  }

  /// Pure state |psi><psi| for a normalized ket.
  static DensityMatrix pure(std::span<const complex> ket) {
    ComplexMatrix m(ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i)
      for (std::size_t j = 0; j < ket.size(); ++j) m(i, j) = ket[i] * std::conj(ket[j]);
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix pure(std::initializer_list<complex> ket) {
    return pure(std::span<const complex>(ket.begin(), ket.size()));
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * complex(1.0 / static_cast<double>(dim)));
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const std::vector<std::size_t>& subsystem_dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return mat_.dim(); }
  complex operator()(std::size_t i, std::size_t j) const noexcept { return mat_(i, j); }

  /// U rho U^dagger, keeping the factor structure.
  DensityMatrix conjugated(const ComplexMatrix& u) const {
    return from_computed(u * mat_ * u.adjoint(), dims_);
  }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

 private:
  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims, double known_min_eigenvalue)
      : mat_(std::move(m)), dims_(std::move(dims)) {
    if (dims_.empty()) dims_ = {mat_.dim()};
    validate(known_min_eigenvalue);
  }

  void validate() const { validate(hermitian_eig(mat_).eigenvalues.front()); }

  void validate(double lmin) const {
    const std::size_t total = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    require(total == mat_.dim(), "DensityMatrix: subsystem dimensions do not match matrix dimension");
    require(mat_.all_finite(), "DensityMatrix: non-finite entries");
    require(mat_.is_hermitian(tol::algebraic), "DensityMatrix: matrix is not Hermitian");
    require(std::abs(mat_.trace() - complex(1.0)) <= tol::algebraic, "DensityMatrix: trace is not 1");
    require(lmin >= -tol::positivity, "DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }

  ComplexMatrix mat_;
  std::vector<std::size_t> dims_;
};

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.subsystem_dims();
  dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
  return DensityMatrix::from_computed(kron(a.matrix(), b.matrix()), std::move(dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  ComplexMatrix r = partial_trace(rho.matrix(), rho.subsystem_dims(), keep);
  std::vector<std::size_t> dims;
  for (auto k : keep) dims.push_back(rho.subsystem_dims()[k]);
  return DensityMatrix::from_computed(r, std::move(dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

}  // namespace collideq
