#pragma once

// One-dimensional discrete-time quantum walk on a cyclic lattice of M sites
// with a real traceless coin sigma_z cos(theta) + sigma_x sin(theta).
//
// System vectors have length 2M and are indexed 2 * site + spin, with
// spin 0 = up and 1 = down. In the momentum basis "site" is the momentum
// label k of |k> = M^{-1/2} sum_x exp(2 pi i x k / M) |x>.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qwh/numerics.hpp"

namespace qwh {

enum class Basis { position, momentum };

struct WalkConfig {
  double theta = 0.0;          // coin angle, [0, pi/2]
  std::size_t lattice_size = 0;  // M, even
  std::size_t clock_size = 1;    // N, number of clock times
  ComplexVector psi0;            // position amplitudes, length M
  Complex alpha{1.0, 0.0};       // spin-up amplitude
  Complex beta{0.0, 0.0};        // spin-down amplitude

  /// Particle at site x0 with spin alpha|up> + beta|down>.
  static WalkConfig localized(double theta, std::size_t lattice_size, std::size_t clock_size,
                              std::size_t x0, Complex alpha = 1.0, Complex beta = 0.0);

  /// Site of the single occupied amplitude, if psi0 is localized.
  std::optional<std::size_t> localized_site() const;

  /// Throws std::domain_error when any invariant is violated: theta outside
  /// [0, pi/2], odd or empty lattice, N < 1, non-normalized psi0 or spin, or
  /// a localized start with M <= 2N.
  void validate() const;
};

struct SystemState {
  Basis basis = Basis::position;
  ComplexVector amplitudes;  // length 2M

  std::size_t lattice_size() const noexcept { return amplitudes.size() / 2; }
};

/// Eigensystem of the 2x2 block U_k = diag(e^{-i phi}, e^{i phi}) sigma_theta.
struct MomentumMode {
  std::size_t k = 0;
  double phi = 0.0;     // 2 pi k / M
  double omega = 0.0;   // in [-pi/2, pi/2]
  Complex lambda_plus;  //  e^{-i omega}
  Complex lambda_minus; // -e^{+i omega}
  std::array<Complex, 2> s_plus;   // (alpha_k^+, beta_k^+)
  std::array<Complex, 2> s_minus;  // (alpha_k^-, beta_k^-)
};

/// sigma_z cos(theta) + sigma_x sin(theta).
ComplexMatrix coin_matrix(double theta);

/// One walk step in the position basis: coin, then spin-up moves right and
/// spin-down moves left (cyclically).
SystemState step_position(const SystemState& state, double theta);
/// Exact inverse of step_position.
SystemState step_position_inverse(const SystemState& state, double theta);

/// The block U_k built directly from its definition.
ComplexMatrix uk_matrix(std::size_t k, std::size_t lattice_size, double theta);

MomentumMode momentum_mode(std::size_t k, std::size_t lattice_size, double theta);
std::vector<MomentumMode> momentum_modes(std::size_t lattice_size, double theta);

/// U_k^n from the eigen-decomposition of U_k.
ComplexMatrix uk_power(const MomentumMode& mode, long n);
ComplexMatrix uk_power(std::size_t k, std::size_t lattice_size, double theta, long n);

SystemState initial_state(const WalkConfig& config);
SystemState to_momentum(const SystemState& state);
SystemState to_position(const SystemState& state);

/// |Psi_n> = sum_k c_k |k> (x) U_k^n |chi_0>, returned in the requested basis.
SystemState evolve(const WalkConfig& config, long n, Basis basis = Basis::position);
SystemState evolve(const WalkConfig& config, std::span<const MomentumMode> modes, long n,
                   Basis basis = Basis::position);

/// Position operator X (x) 1 on the 2M-dimensional system space.
ComplexMatrix position_observable(std::size_t lattice_size);
/// 1 (x) sigma_z.
ComplexMatrix spin_z_observable(std::size_t lattice_size);

}  // namespace qwh
