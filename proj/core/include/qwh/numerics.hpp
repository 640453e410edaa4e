#pragma once

// Dense complex linear algebra and small utilities shared by every other
// module: a row-major complex matrix, a cyclic Jacobi eigensolver for
// Hermitian matrices, a one-sided Jacobi SVD, the unitary DFT, entropies of
// probability spectra and a counter-based random source.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qwh {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr Complex imag_unit{0.0, 1.0};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }

  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_{ij} |m_ij - conj(m_ji)|
double hermiticity_defect(const ComplexMatrix& m);
/// max_{ij} |(m^dag m - 1)_ij|
double unitarity_defect(const ComplexMatrix& m);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);
double max_abs_difference(std::span<const Complex> a, std::span<const Complex> b);

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column i belongs to values[i]
};

/// Cyclic complex Jacobi rotations until the off-diagonal Frobenius norm
/// drops below 1e-13 relative to the matrix norm. Sweep order is fixed, so
/// results are reproducible bit for bit.
/// Throws std::domain_error for non-square or non-Hermitian input.
EigenSystem hermitian_eig(const ComplexMatrix& m);

struct SingularValueDecomposition {
  ComplexMatrix left;           // rows x r, orthonormal columns
  std::vector<double> values;   // r = min(rows, cols), descending
  ComplexMatrix right;          // cols x r, orthonormal columns
};

/// Thin SVD, m = left * diag(values) * right^dag.
SingularValueDecomposition svd(const ComplexMatrix& m);

/// c_k = M^{-1/2} sum_x exp(-2 pi i x k / M) psi0(x).
ComplexVector dft_coefficients(std::span<const Complex> psi0);
/// Inverse of dft_coefficients.
ComplexVector inverse_dft(std::span<const Complex> coefficients);

/// Nonnegative reals in descending order summing to one.
class SchmidtSpectrum {
 public:
  static constexpr double sum_tolerance = 1e-10;
  static constexpr double default_negative_tolerance = 1e-12;

  /// Sorts, clamps values in [-negative_tolerance, 0) to zero and validates.
  /// Throws std::domain_error on larger negatives or a sum away from one.
  static SchmidtSpectrum from_values(std::vector<double> values,
                                     double negative_tolerance = default_negative_tolerance);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Number of values above threshold.
  std::size_t rank(double threshold = 1e-12) const noexcept;

 private:
  explicit SchmidtSpectrum(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

enum class EntropyKind { von_neumann, quadratic, renyi2 };

std::string_view to_string(EntropyKind kind) noexcept;
/// Accepts "vn", "quad", "renyi2" and the long spellings.
EntropyKind parse_entropy_kind(std::string_view text);

/// von_neumann: -sum l log2 l; quadratic: 1 - sum l^2; renyi2: -log2 sum l^2.
double entropy(const SchmidtSpectrum& spectrum, EntropyKind kind);
double entropy(std::span<const double> values, EntropyKind kind);

/// Counter-based generator: draw i is a pure function of (seed, i), so
/// streams can be split across workers by counter offset.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  Complex complex_normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Normalized vector of i.i.d. complex Gaussians (Haar distributed).
ComplexVector haar_random_state(std::size_t dim, CounterRng& rng);

}  // namespace qwh
