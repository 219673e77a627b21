#include "qbat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace qbat {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be positive");
  if (data_.size() != rows * cols) throw DimensionError("ComplexMatrix: entry count != rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("ComplexMatrix: empty literal");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector: dimension mismatch");
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw DimensionError("partial_trace: expected a 4x4 two-qubit operator");
  ComplexMatrix out(2, 2);
  // index = 2*a + b
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 2; ++s) {
        if (keep == Subsystem::A)
          out(i, j) += rho(2 * i + s, 2 * j + s);
        else
          out(i, j) += rho(2 * s + i, 2 * s + j);
      }
  return out;
}

namespace pauli {

const ComplexMatrix& identity() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
  return m;
}
const ComplexMatrix& x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
const ComplexMatrix& y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}
const ComplexMatrix& z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}
const ComplexMatrix& raising() {
  static const ComplexMatrix m{{0.0, 1.0}, {0.0, 0.0}};
  return m;
}
const ComplexMatrix& lowering() {
  static const ComplexMatrix m{{0.0, 0.0}, {1.0, 0.0}};
  return m;
}

}  // namespace pauli

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("hermitian_eig: matrix is not square");
  const double skew = max_abs_diff(m, m.adjoint());
  if (skew > kHermitianTolerance)
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (max |m - m^H| = " +
                                std::to_string(skew) + ")");

  const std::size_t n = m.rows();
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frob = 0.0;
  for (const auto& z : a.entries()) frob += std::norm(z);
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= kJacobiTolerance * std::max(frob, 1e-300)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq == 0.0) continue;
        const Complex w = std::conj(a(p, q)) / apq;  // phase that makes a_pq real
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        // a <- a G with G = [[c, s], [-s w, c w]] on (p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * w * akq;
          a(k, q) = s * akp + c * w * akq;
        }
        // a <- G^H a
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * std::conj(w) * aqk;
          a(q, k) = s * apk + c * std::conj(w) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * w * vkq;
          v(k, q) = s * vkp + c * w * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Requires rows >= cols.
SingularValueDecomposition svd_tall(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += std::conj(a(k, p)) * a(k, q);
    return s;
  };
  auto column_norm2 = [&](std::size_t p) {
    double s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += std::norm(a(k, p));
    return s;
  };

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(p);
        const double beta = column_norm2(q);
        const Complex gamma = column_dot(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kJacobiTolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex w = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q) * w;
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q) * w;
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_norm2(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SingularValueDecomposition out{std::vector<double>(n), ComplexMatrix(rows, n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v(i, j);
    if (sigma[j] > 0.0)
      for (std::size_t i = 0; i < rows; ++i) out.left(i, k) = a(i, j) / sigma[j];
  }
  return out;
}

}  // namespace

SingularValueDecomposition svd(const ComplexMatrix& m) {
  if (m.rows() >= m.cols()) return svd_tall(m);
  auto t = svd_tall(m.adjoint());
  return {std::move(t.values), std::move(t.right), std::move(t.left)};
}

std::vector<double> singular_values(const ComplexMatrix& m) { return svd(m).values; }

double trace_norm(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

}  // namespace qbat
