#include "qwh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qwh {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
  for (const auto& z : entries_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::domain_error("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> values) {
  if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (const auto& z : entries_) best = std::max(best, std::abs(z));
  return best;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::domain_error("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v[j];
    out[i] = sum;
  }
  return out;
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

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

double unitarity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) return std::numeric_limits<double>::infinity();
  const auto product = m.adjoint() * m;
  return (product - ComplexMatrix::identity(m.rows())).max_abs();
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner product: length mismatch");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

double norm(std::span<const Complex> v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

double max_abs_difference(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("difference: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver

namespace {

constexpr double jacobi_tolerance = 1e-13;
constexpr int max_jacobi_sweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Rotation G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane,
// chosen so that (G^dag A G)_{pq} = 0.
struct PlaneRotation {
  Complex gpp, gpq, gqp, gqq;
};

PlaneRotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double magnitude = std::abs(apq);
  const Complex phase = apq / magnitude;
  const double tau = (aqq - app) / (2.0 * magnitude);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex conj_phase = std::conj(phase);
  return {c, s, -s * conj_phase, c * conj_phase};
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::domain_error("hermitian_eig: matrix is not square");
  const double scale = std::max(1.0, m.max_abs());
  if (hermiticity_defect(m) >= 1e-10 * scale)
    throw std::domain_error("hermitian_eig: matrix is not Hermitian");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  // Symmetrize so that rounding in the input cannot bias the sweep.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = jacobi_tolerance * std::max(a.frobenius_norm(), std::numeric_limits<double>::min());

  for (int sweep = 0; sweep < max_jacobi_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) < std::numeric_limits<double>::min()) continue;
        const auto g = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        // A <- A G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * g.gpp + akq * g.gqp;
          a(k, q) = akp * g.gpq + akq * g.gqq;
        }
        // A <- G^dag A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(g.gpp) * apk + std::conj(g.gqp) * aqk;
          a(q, k) = std::conj(g.gpq) * apk + std::conj(g.gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * g.gpp + vkq * g.gqp;
          v(k, q) = vkp * g.gpq + vkq * g.gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  EigenSystem result{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    result.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) result.vectors(r, c) = v(r, order[c]);
  }
  return result;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD

namespace {

// Orthogonalize columns in place (rows >= cols). Returns the accumulated
// right rotation.
ComplexMatrix hestenes(std::vector<ComplexVector>& columns) {
  const std::size_t n = columns.size();
  const std::size_t length = n == 0 ? 0 : columns.front().size();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double tolerance = std::numeric_limits<double>::epsilon() * std::sqrt(double(std::max<std::size_t>(length, 1)));

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& ap = columns[p];
        auto& aq = columns[q];
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < length; ++k) {
          alpha += std::norm(ap[k]);
          beta += std::norm(aq[k]);
          gamma += std::conj(ap[k]) * aq[k];
        }
        const double magnitude = std::abs(gamma);
        if (magnitude <= tolerance * std::sqrt(alpha * beta) ||
            magnitude < std::numeric_limits<double>::min())
          continue;
        rotated = true;
        const auto g = jacobi_rotation(alpha, beta, gamma);
        for (std::size_t k = 0; k < length; ++k) {
          const Complex x = ap[k];
          const Complex y = aq[k];
          ap[k] = x * g.gpp + y * g.gqp;
          aq[k] = x * g.gpq + y * g.gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex x = v(k, p);
          const Complex y = v(k, q);
          v(k, p) = x * g.gpp + y * g.gqp;
          v(k, q) = x * g.gpq + y * g.gqq;
        }
      }
    }
    if (!rotated) break;
  }
  return v;
}

// Fill the flagged columns with unit vectors orthogonal to all others.
void complete_orthonormal(std::vector<ComplexVector>& basis, const std::vector<bool>& missing) {
  const std::size_t length = basis.empty() ? 0 : basis.front().size();
  for (std::size_t slot = 0; slot < basis.size(); ++slot) {
    if (!missing[slot]) continue;
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t e = 0; e < length; ++e) {
      ComplexVector candidate(length);
      candidate[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t other = 0; other < basis.size(); ++other) {
          if (other == slot || (missing[other] && other > slot)) continue;
          const Complex proj = inner(basis[other], candidate);
          for (std::size_t k = 0; k < length; ++k) candidate[k] -= proj * basis[other][k];
        }
      const double nrm = norm(candidate);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(candidate);
      }
      if (best_norm > 0.5) break;
    }
    for (auto& z : best) z /= best_norm;
    basis[slot] = std::move(best);
  }
}

SingularValueDecomposition tall_svd(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<ComplexVector> columns(cols);
  for (std::size_t c = 0; c < cols; ++c) columns[c] = m.column(c);
  const ComplexMatrix v = hestenes(columns);

  std::vector<double> sigma(cols);
  for (std::size_t c = 0; c < cols; ++c) sigma[c] = norm(columns[c]);
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const double largest = cols == 0 ? 0.0 : sigma[order.front()];
  const double null_threshold = largest * std::numeric_limits<double>::epsilon() * double(std::max(rows, cols));

  SingularValueDecomposition out{ComplexMatrix(rows, cols), std::vector<double>(cols), ComplexMatrix(cols, cols)};
  std::vector<ComplexVector> left(cols);
  std::vector<bool> missing(cols, false);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t src = order[c];
    out.values[c] = sigma[src];
    if (sigma[src] > null_threshold && sigma[src] > 0.0) {
      left[c] = columns[src];
      for (auto& z : left[c]) z /= sigma[src];
    } else {
      left[c].assign(rows, Complex{});
      missing[c] = true;
    }
    for (std::size_t r = 0; r < cols; ++r) out.right(r, c) = v(r, src);
  }
  complete_orthonormal(left, missing);
  for (std::size_t c = 0; c < cols; ++c) out.left.set_column(c, left[c]);
  return out;
}

}  // namespace

SingularValueDecomposition svd(const ComplexMatrix& m) {
  for (const auto& z : m.entries())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::domain_error("svd: non-finite entry");
  if (m.rows() >= m.cols()) return tall_svd(m);
  auto flipped = tall_svd(m.adjoint());
  return {std::move(flipped.right), std::move(flipped.values), std::move(flipped.left)};
}

// ---------------------------------------------------------------------------
// DFT

namespace {

ComplexVector dft(std::span<const Complex> input, double sign) {
  const std::size_t size = input.size();
  if (size == 0) throw std::domain_error("dft: empty vector");
  // Twiddles indexed by (x k) mod M keep every phase exact to one rounding.
  ComplexVector twiddle(size);
  for (std::size_t j = 0; j < size; ++j)
    twiddle[j] = std::polar(1.0, sign * 2.0 * pi * double(j) / double(size));
  const double scale = 1.0 / std::sqrt(double(size));
  ComplexVector out(size);
  for (std::size_t k = 0; k < size; ++k) {
    Complex sum = 0.0;
    for (std::size_t x = 0; x < size; ++x) sum += twiddle[(x * k) % size] * input[x];
    out[k] = sum * scale;
  }
  return out;
}

}  // namespace

ComplexVector dft_coefficients(std::span<const Complex> psi0) { return dft(psi0, -1.0); }

ComplexVector inverse_dft(std::span<const Complex> coefficients) { return dft(coefficients, +1.0); }

// ---------------------------------------------------------------------------
// Spectra and entropies

SchmidtSpectrum SchmidtSpectrum::from_values(std::vector<double> values, double negative_tolerance) {
  double sum = 0.0;
  for (auto& value : values) {
    if (!std::isfinite(value)) throw std::domain_error("spectrum: non-finite value");
    if (value < 0.0) {
      if (value < -negative_tolerance)
        throw std::domain_error("spectrum: negative value " + std::to_string(value));
      value = 0.0;
    }
    sum += value;
  }
  if (std::abs(sum - 1.0) > sum_tolerance)
    throw std::domain_error("spectrum: values sum to " + std::to_string(sum) + ", expected 1");
  std::sort(values.begin(), values.end(), std::greater<>());
  return SchmidtSpectrum(std::move(values));
}

std::size_t SchmidtSpectrum::rank(double threshold) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [&](double v) { return v > threshold; }));
}

std::string_view to_string(EntropyKind kind) noexcept {
  switch (kind) {
    case EntropyKind::von_neumann: return "vn";
    case EntropyKind::quadratic: return "quad";
    case EntropyKind::renyi2: return "renyi2";
  }
  return "?";
}

EntropyKind parse_entropy_kind(std::string_view text) {
  if (text == "vn" || text == "von_neumann") return EntropyKind::von_neumann;
  if (text == "quad" || text == "quadratic" || text == "linear") return EntropyKind::quadratic;
  if (text == "renyi2" || text == "renyi") return EntropyKind::renyi2;
  throw std::invalid_argument("unknown entropy kind '" + std::string(text) + "'");
}

double entropy(const SchmidtSpectrum& spectrum, EntropyKind kind) {
  const auto& values = spectrum.values();
  switch (kind) {
    case EntropyKind::von_neumann: {
      double s = 0.0;
      for (double v : values)
        if (v > 0.0) s -= v * std::log2(v);
      return std::max(s, 0.0);
    }
    case EntropyKind::quadratic: {
      double purity = 0.0;
      for (double v : values) purity += v * v;
      return std::max(1.0 - purity, 0.0);
    }
    case EntropyKind::renyi2: {
      double purity = 0.0;
      for (double v : values) purity += v * v;
      return std::max(-std::log2(purity), 0.0);
    }
  }
  return 0.0;
}

double entropy(std::span<const double> values, EntropyKind kind) {
  return entropy(SchmidtSpectrum::from_values({values.begin(), values.end()}), kind);
}

// ---------------------------------------------------------------------------
// Random numbers

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t key = mix64(seed_ + 0x9e3779b97f4a7c15ULL);
  return mix64(key ^ (0x9e3779b97f4a7c15ULL * ++counter_));
}

double CounterRng::uniform() noexcept {
  // 53 random bits, shifted off zero.
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  // Box-Muller, cosine branch only so every draw consumes two counters.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

Complex CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

ComplexVector haar_random_state(std::size_t dim, CounterRng& rng) {
  ComplexVector state(dim);
  for (auto& z : state) z = rng.complex_normal();
  const double nrm = norm(state);
  for (auto& z : state) z /= nrm;
  return state;
}

}  // namespace qwh
