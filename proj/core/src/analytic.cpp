#include "qwh/analytic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qwh {

namespace {

constexpr double profile_tolerance = 1e-12;
constexpr double kernel_singular = 1e-9;

void require_open_angle(double theta, const char* what) {
  if (!(theta > 0.0 && theta < pi / 2))
    throw std::domain_error(std::string(what) + ": theta must lie in (0, pi/2)");
}

void require_closed_angle(double theta, const char* what) {
  if (!(theta >= -1e-12 && theta <= pi / 2 + 1e-12))
    throw std::domain_error(std::string(what) + ": theta must lie in [0, pi/2]");
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

// sin^2(m u) / sin^2(u), continued by its limit m^2 at the zeros of sin(u).
double fejer(double m, double u) {
  const double s = std::sin(u);
  if (std::abs(s) < kernel_singular) return m * m;
  const double t = std::sin(m * u);
  return t * t / (s * s);
}

}  // namespace

MomentumProfile momentum_profile(const WalkConfig& config) {
  config.validate();
  const auto c = dft_coefficients(config.psi0);
  MomentumProfile profile;
  for (const auto& mode : momentum_modes(config.lattice_size, config.theta)) {
    profile.c_abs2.push_back(std::norm(c[mode.k]));
    profile.omega.push_back(mode.omega);
  }
  return profile;
}

MomentumProfile localized_profile(std::size_t lattice_size, double theta) {
  if (lattice_size < 2 || lattice_size % 2 != 0)
    throw std::domain_error("localized_profile: M must be even and at least 2");
  MomentumProfile profile;
  profile.c_abs2.assign(lattice_size, 1.0 / double(lattice_size));
  for (const auto& mode : momentum_modes(lattice_size, theta)) profile.omega.push_back(mode.omega);
  return profile;
}

Complex overlap_momentum(const WalkConfig& config, long n) {
  if (n < 0) throw std::domain_error("overlap_momentum: negative n");
  config.validate();
  const auto c = dft_coefficients(config.psi0);
  const auto modes = momentum_modes(config.lattice_size, config.theta);
  const std::array<Complex, 2> chi{config.alpha, config.beta};
  Complex total = 0.0;
  for (const auto& mode : modes) {
    const auto power = uk_power(mode, n);
    Complex amp = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) amp += std::conj(chi[i]) * power(i, j) * chi[j];
    total += std::norm(c[mode.k]) * amp;
  }
  return total;
}

std::vector<Complex> overlap_series(const WalkConfig& config, std::size_t count) {
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back(overlap_momentum(config, long(n)));
  return out;
}

double overlap_parity(std::span<const double> c_abs2, std::span<const double> omega, long n) {
  const std::size_t m = c_abs2.size();
  if (m == 0 || omega.size() != m) throw std::invalid_argument("overlap_parity: grid size mismatch");
  if (n < 0) throw std::domain_error("overlap_parity: negative n");
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(c_abs2[k] - c_abs2[(m - k) % m]) > profile_tolerance)
      throw std::domain_error("overlap_parity: |c_k| is not even in k");
    total += c_abs2[k];
  }
  if (std::abs(total - 1.0) > profile_tolerance) throw std::domain_error("overlap_parity: profile not normalized");
  if (n % 2 != 0) return 0.0;
  std::vector<double> terms(m);
  for (std::size_t k = 0; k < m; ++k) terms[k] = c_abs2[k] * std::cos(double(n) * omega[k]);
  return pairwise_sum(terms);
}

double jacobi_overlap(int n, double u) {
  if (n < 0) throw std::domain_error("jacobi_overlap: negative degree");
  if (n == 0) return 1.0;
  const double x = 1.0 - 2.0 * u;
  double prev = 1.0;
  double cur = 0.5 * (1.0 + x);
  for (int k = 2; k <= n; ++k) {
    const double a = double(2 * k - 1);
    const double b = double(2 * k - 3);
    const double next = ((a * b * x - 1.0) * cur - double(k - 2) * a * prev) / (double(k) * b);
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_overlap_series(int n, double u) {
  if (n < 0) throw std::domain_error("jacobi_overlap_series: negative degree");
  if (n == 0) return 1.0;
  std::vector<double> terms;
  terms.reserve(std::size_t(n) + 1);
  double choose_n = 1.0;   // C(n, j)
  double choose_nj = 1.0;  // C(n + j - 1, j)
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      choose_n *= double(n - j + 1) / double(j);
      choose_nj *= double(n + j - 1) / double(j);
    }
    terms.push_back((j % 2 == 0 ? 1.0 : -1.0) * choose_n * choose_nj * std::pow(u, j));
  }
  return pairwise_sum(terms);
}

double jacobi_overlap_hypergeometric(int n, double u) {
  if (n < 0) throw std::domain_error("jacobi_overlap_hypergeometric: negative degree");
  // 2F1(-n, n; 1; u) = 1 + r_0 u (1 + r_1 u (1 + ...)), r_j = (j - n)(j + n) / (j + 1)^2
  double acc = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    const double ratio = double(j - n) * double(j + n) / (double(j + 1) * double(j + 1));
    acc = 1.0 + ratio * u * acc;
  }
  return acc;
}

double overlap_asymptotic(int n, double theta) {
  if (n < 1) throw std::domain_error("overlap_asymptotic: n must be at least 1");
  require_open_angle(theta, "overlap_asymptotic");
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign * std::sqrt(std::tan(theta) / (double(n) * pi)) * std::cos(2.0 * double(n) * theta + pi / 4);
}

double e2_closed_parity(std::span<const double> c_abs2, std::span<const double> omega, std::size_t clock_size) {
  const std::size_t m = c_abs2.size();
  if (m == 0 || omega.size() != m) throw std::invalid_argument("e2_closed_parity: grid size mismatch");
  if (clock_size < 1) throw std::domain_error("e2_closed_parity: N must be at least 1");
  overlap_parity(c_abs2, omega, 0);  // validates the profile

  const double n = double(clock_size);
  const bool even = clock_size % 2 == 0;
  std::vector<double> rows(m);
  for (std::size_t k = 0; k < m; ++k) {
    double row = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      double kernel = 0.0;
      for (double nu : {1.0, -1.0}) {
        const double u = omega[k] + nu * omega[q];
        if (even)
          kernel += fejer(n / 2, u);
        else
          kernel += 0.5 * (fejer((n + 1) / 2, u) + fejer((n - 1) / 2, u));
      }
      row += c_abs2[q] * kernel;
    }
    rows[k] = c_abs2[k] * row;
  }
  return 1.0 - pairwise_sum(rows) / (n * n);
}

double e2_closed_localized(double theta, std::size_t clock_size) {
  require_closed_angle(theta, "e2_closed_localized");
  if (clock_size < 1) throw std::domain_error("e2_closed_localized: N must be at least 1");
  const double u = std::cos(theta) * std::cos(theta);
  const double n = double(clock_size);
  const std::size_t top = (clock_size - 1) / 2;
  std::vector<double> terms;
  terms.reserve(top);
  double prev = 1.0;
  double cur = 1.0 - u;
  const double x = 1.0 - 2.0 * u;
  for (std::size_t j = 1; j <= top; ++j) {
    if (j >= 2) {
      const double a = double(2 * j - 1);
      const double b = double(2 * j - 3);
      const double next = ((a * b * x - 1.0) * cur - double(j - 2) * a * prev) / (double(j) * b);
      prev = cur;
      cur = next;
    }
    terms.push_back((1.0 - 2.0 * double(j) / n) * cur * cur);
  }
  return 1.0 - (1.0 + 2.0 * pairwise_sum(terms)) / n;
}

double e2_asymptotic(double theta, std::size_t clock_size) {
  if (!(theta >= 0.0 && theta < pi / 2)) throw std::domain_error("e2_asymptotic: theta must lie in [0, pi/2)");
  if (clock_size < 2) throw std::domain_error("e2_asymptotic: N must be at least 2");
  const double n = double(clock_size);
  const double bracket = std::log(n / 2) + sine_integral(4.0 * theta) - 1.0 - pi / 2;
  return 1.0 - (1.0 + 2.0 / pi * bracket * std::tan(theta)) / n;
}

double sine_integral(double x) {
  if (!std::isfinite(x)) throw std::domain_error("sine_integral: non-finite argument");
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x <= 4.0) {
    // sum_k (-1)^k x^{2k+1} / ((2k+1) (2k+1)!)
    double term = x;
    double sum = x;
    for (int k = 1; k < 100; ++k) {
      term *= -x * x / (double(2 * k) * double(2 * k + 1));
      const double add = term / double(2 * k + 1);
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return sum;
  }
  // E1(i x) by modified Lentz on its continued fraction; Si = pi/2 + Im E1(i x).
  constexpr double tiny = 1e-300;
  Complex b{1.0, x};
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -double((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  h *= Complex(std::cos(x), -std::sin(x));
  return pi / 2 + h.imag();
}

double harmonic_number(std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = n; k >= 1; --k) sum += 1.0 / double(k);
  return sum;
}

double generalized_harmonic_half(std::size_t m) {
  double sum = 0.0;
  for (std::size_t k = m; k >= 1; --k) sum += 1.0 / std::sqrt(double(k));
  return sum;
}

LambdaMaxEstimate lambda_max_estimate(double theta, std::size_t clock_size) {
  require_open_angle(theta, "lambda_max_estimate");
  if (clock_size < 4 || clock_size % 2 != 0)
    throw std::domain_error("lambda_max_estimate: N must be even and at least 4");
  const double n = double(clock_size);
  const double t = std::tan(theta);
  const std::size_t m = clock_size / 2 - 1;
  double row = 0.0;
  for (std::size_t k = 1; k <= m; ++k)
    row += std::abs(std::cos(2.0 * double(k) * theta + pi / 4)) / std::sqrt(double(k));
  LambdaMaxEstimate out;
  out.finite_sum = (1.0 + std::sqrt(t / pi) * row) / n;
  out.harmonic = (1.0 + std::sqrt(t / (2 * pi)) * generalized_harmonic_half(m)) / n;
  out.closed = 1.0 / n + std::sqrt(t / (n * pi)) * (1.0 + zeta_half / std::sqrt(2 * n));
  return out;
}

AppendixSum appendix_f(std::size_t clock_size, double theta) {
  if (clock_size < 2) throw std::domain_error("appendix_f: N must be at least 2");
  require_open_angle(theta, "appendix_f");
  const double n = double(clock_size);
  AppendixSum out;
  out.eta = (clock_size - 1) / 2;

  std::vector<double> terms;
  terms.reserve(out.eta);
  for (std::size_t k = 1; k <= out.eta; ++k) {
    const double c = std::cos(2.0 * double(k) * theta + pi / 4);
    terms.push_back(2.0 * (1.0 / double(k) - 2.0 / n) * c * c);
  }
  out.direct = pairwise_sum(terms);

  // 2 cos^2(2 k theta + pi/4) = 1 - sin(4 k theta), so with z = exp(4 i theta)
  // F = H(eta) - 2 eta / N - Im sum_{k<=eta} z^k / k + (2/N) Im sum_{k<=eta} z^k,
  // and sum_{k<=eta} z^k / k = -log(1 - z) - z^eta L(z, eta).
  const Complex z = std::polar(1.0, 4.0 * theta);
  const double eta = double(out.eta);
  out.harmonic = harmonic_number(out.eta);
  out.lerch_tail = lerch_abel_limit(z, out.eta);
  const Complex z_eta = std::polar(1.0, 4.0 * theta * eta);
  const Complex log_part = -std::log(1.0 - z) - z_eta * out.lerch_tail;
  const Complex geometric = z * (1.0 - z_eta) / (1.0 - z);
  out.decomposed = out.harmonic - 2.0 * eta / n - log_part.imag() + 2.0 / n * geometric.imag();
  return out;
}

double appendix_e2(std::size_t clock_size, double theta) {
  const auto f = appendix_f(clock_size, theta);
  return 1.0 - (1.0 + std::tan(theta) / pi * f.direct) / double(clock_size);
}

Complex lerch_series(Complex z, std::size_t eta, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("lerch_series: r must lie in [0, 1)");
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::domain_error("lerch_series: |z| must be 1");
  const double arg = std::arg(z);
  Complex sum = 0.0;
  double radius = 1.0;
  for (std::size_t k = 1;; ++k) {
    radius *= r;
    const double weight = radius / (double(k) + double(eta));
    if (weight < 1e-18) break;
    sum += std::polar(weight, double(k) * arg);
  }
  return sum;
}

Complex lerch_abel_limit(Complex z, std::size_t eta) {
  constexpr double h[4] = {0.1, 0.01, 0.001, 0.0001};
  Complex out = 0.0;
  for (int i = 0; i < 4; ++i) {
    double weight = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) weight *= h[j] / (h[j] - h[i]);
    out += weight * lerch_series(z, eta, 1.0 - h[i]);
  }
  return out;
}

}  // namespace qwh
