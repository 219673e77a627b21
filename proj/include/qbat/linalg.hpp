// Dense complex linear algebra for the small operators of a two-qubit system.
//
// Single-qubit basis ordering is |e> = index 0, |g> = index 1, so the
// two-qubit product basis is |ee>, |eg>, |ge>, |gg>.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace qbat {

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-wise literal, e.g. {{1, 0}, {0, -1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  /// |v><v| for a column vector v.
  static ComplexMatrix projector(std::span<const Complex> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  /// Largest entrywise modulus.
  double max_abs() const;
  std::vector<Complex> column(std::size_t c) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v);

/// max |a - b| over entries; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Reduced 2x2 state of a 4x4 two-qubit operator, keeping the given qubit.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep);

/// Fixed single-qubit operators in the (|e>, |g>) basis.
namespace pauli {
const ComplexMatrix& identity();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
/// sigma+ = |e><g|
const ComplexMatrix& raising();
/// sigma- = |g><e|
const ComplexMatrix& lowering();
}  // namespace pauli

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

struct SingularValueDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix left;          // rows x min(rows, cols)
  ComplexMatrix right;         // cols x min(rows, cols), columns are right singular vectors
};

inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 200;
inline constexpr double kHermitianTolerance = 1e-10;

/// Cyclic complex Jacobi. Throws std::invalid_argument if m is not Hermitian
/// within kHermitianTolerance.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// One-sided (Hestenes) Jacobi SVD.
SingularValueDecomposition svd(const ComplexMatrix& m);

std::vector<double> singular_values(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);

}  // namespace qbat
