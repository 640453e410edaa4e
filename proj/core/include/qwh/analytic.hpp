#pragma once

// Closed forms for walk overlaps and quadratic system-time entanglement.
// These are the second route against which the simulation is checked, so
// nothing here calls into history.hpp.

#include <cstddef>
#include <span>
#include <vector>

#include "qwh/numerics.hpp"
#include "qwh/walk.hpp"

namespace qwh {

inline constexpr double zeta_half = -1.4603545088095868;

/// |c_k|^2 and omega_k on the k-grid of a configuration.
struct MomentumProfile {
  std::vector<double> c_abs2;
  std::vector<double> omega;
};

MomentumProfile momentum_profile(const WalkConfig& config);
/// Flat |c_k|^2 = 1/M profile of a localized particle.
MomentumProfile localized_profile(std::size_t lattice_size, double theta);

/// <Psi_0|Psi_n> from the momentum eigensystem, any input state.
Complex overlap_momentum(const WalkConfig& config, long n);
/// <Psi_0|Psi_n> for n = 0..count-1.
std::vector<Complex> overlap_series(const WalkConfig& config, std::size_t count);

/// Overlap for real, parity-definite inputs: sum_k |c_k|^2 cos(n omega_k)
/// for even n and 0 for odd n. Requires |c_{-k}| = |c_k| and sum |c_k|^2 = 1.
double overlap_parity(std::span<const double> c_abs2, std::span<const double> omega, long n);

/// P_n(u) = sum_j (-1)^j C(n,j) C(n+j-1,j) u^j, evaluated through the
/// three-term recurrence of the Jacobi polynomial P_n^{(0,-1)}(1 - 2u).
double jacobi_overlap(int n, double u);
/// The same polynomial summed term by term (accurate only for small n).
double jacobi_overlap_series(int n, double u);
/// The same polynomial as 2F1(-n, n; 1; u) via the term-ratio recurrence.
double jacobi_overlap_hypergeometric(int n, double u);

/// Leading large-n form (-1)^n sqrt(tan(theta) / (n pi)) cos(2 n theta + pi/4)
/// of <Psi_0|Psi_2n>. theta must lie strictly inside (0, pi/2).
double overlap_asymptotic(int n, double theta);

/// Exact quadratic entropy for parity-definite real inputs from the
/// k-double sum with the Fejer-type kernel.
double e2_closed_parity(std::span<const double> c_abs2, std::span<const double> omega, std::size_t clock_size);

/// Exact quadratic entropy for a localized particle.
double e2_closed_localized(double theta, std::size_t clock_size);

/// Large-N form 1 - [1 + (2/pi)(ln(N/2) + Si(4 theta) - 1 - pi/2) tan(theta)] / N.
double e2_asymptotic(double theta, std::size_t clock_size);

/// Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

double harmonic_number(std::size_t n);
/// H_{1/2}(m) = sum_{n=1}^m n^{-1/2}.
double generalized_harmonic_half(std::size_t m);

/// Three successively coarser estimates of the largest entanglement
/// eigenvalue near the Gershgorin bound (even N >= 4, theta in (0, pi/2)).
struct LambdaMaxEstimate {
  double finite_sum;  // row sum with the asymptotic overlaps
  double harmonic;    // |cos| replaced by its rms value, H_{1/2}
  double closed;      // H_{1/2}(m) ~ 2 sqrt(m) + zeta(1/2)
};

LambdaMaxEstimate lambda_max_estimate(double theta, std::size_t clock_size);

/// F(N, theta) = 2 sum_{n=1}^{eta} (1/n - 2/N) cos^2(2 n theta + pi/4),
/// eta = floor((N-1)/2), by direct summation and through the
/// harmonic-number / Lerch-tail decomposition.
struct AppendixSum {
  std::size_t eta = 0;
  double direct = 0.0;
  double decomposed = 0.0;       // uses the Abel-regularized Lerch tail
  double harmonic = 0.0;         // H(eta)
  Complex lerch_tail;            // L(e^{4 i theta}, eta), Abel limit
};

AppendixSum appendix_f(std::size_t clock_size, double theta);

/// 1 - [1 + (tan(theta)/pi) F(N, theta)] / N.
double appendix_e2(std::size_t clock_size, double theta);

/// L(r z, eta) = sum_{k>=1} (r z)^k / (k + eta) for r < 1.
Complex lerch_series(Complex z, std::size_t eta, double r);
/// Abel limit r -> 1- of lerch_series from r = 0.9, 0.99, 0.999, 0.9999
/// by polynomial (Richardson) extrapolation in 1 - r.
Complex lerch_abel_limit(Complex z, std::size_t eta);

}  // namespace qwh
