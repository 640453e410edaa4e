#include "qwh/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwh {

namespace {

constexpr double angle_slack = 1e-12;
constexpr double norm_tolerance = 1e-12;

double checked_theta(double theta) {
  if (!(theta >= -angle_slack && theta <= pi / 2 + angle_slack))
    throw std::domain_error("coin angle must lie in [0, pi/2], got " + std::to_string(theta));
  return std::clamp(theta, 0.0, pi / 2);
}

void require_basis(const SystemState& state, Basis basis, const char* what) {
  if (state.basis != basis) throw std::domain_error(std::string(what) + ": wrong basis");
  if (state.amplitudes.size() % 2 != 0 || state.amplitudes.empty())
    throw std::domain_error(std::string(what) + ": state length must be 2M");
}

}  // namespace

WalkConfig WalkConfig::localized(double theta, std::size_t lattice_size, std::size_t clock_size,
                                 std::size_t x0, Complex alpha, Complex beta) {
  if (x0 >= lattice_size) throw std::domain_error("localized: site outside the lattice");
  WalkConfig config;
  config.theta = theta;
  config.lattice_size = lattice_size;
  config.clock_size = clock_size;
  config.psi0.assign(lattice_size, Complex{});
  config.psi0[x0] = 1.0;
  config.alpha = alpha;
  config.beta = beta;
  return config;
}

std::optional<std::size_t> WalkConfig::localized_site() const {
  std::optional<std::size_t> site;
  for (std::size_t x = 0; x < psi0.size(); ++x) {
    if (psi0[x] == Complex{}) continue;
    if (site) return std::nullopt;
    site = x;
  }
  return site;
}

void WalkConfig::validate() const {
  checked_theta(theta);
  if (lattice_size < 2 || lattice_size % 2 != 0)
    throw std::domain_error("lattice size M must be even and at least 2");
  if (clock_size < 1) throw std::domain_error("clock size N must be at least 1");
  if (psi0.size() != lattice_size) throw std::domain_error("psi0 length must equal M");
  if (std::abs(norm(psi0) - 1.0) > norm_tolerance) throw std::domain_error("psi0 is not normalized");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > norm_tolerance)
    throw std::domain_error("spin state is not normalized");
  if (localized_site() && lattice_size <= 2 * clock_size)
    throw std::domain_error("localized start needs M > 2N to avoid wrap-around");
}

ComplexMatrix coin_matrix(double theta) {
  theta = checked_theta(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return ComplexMatrix(2, 2, {c, s, s, -c});
}

SystemState step_position(const SystemState& state, double theta) {
  require_basis(state, Basis::position, "step_position");
  const auto coin = coin_matrix(theta);
  const std::size_t sites = state.lattice_size();
  SystemState out{Basis::position, ComplexVector(state.amplitudes.size())};
  for (std::size_t x = 0; x < sites; ++x) {
    const Complex up = state.amplitudes[2 * x];
    const Complex down = state.amplitudes[2 * x + 1];
    out.amplitudes[2 * ((x + 1) % sites)] = coin(0, 0) * up + coin(0, 1) * down;
    out.amplitudes[2 * ((x + sites - 1) % sites) + 1] = coin(1, 0) * up + coin(1, 1) * down;
  }
  return out;
}

SystemState step_position_inverse(const SystemState& state, double theta) {
  require_basis(state, Basis::position, "step_position_inverse");
  const auto coin = coin_matrix(theta);
  const std::size_t sites = state.lattice_size();
  SystemState out{Basis::position, ComplexVector(state.amplitudes.size())};
  for (std::size_t x = 0; x < sites; ++x) {
    const Complex up = state.amplitudes[2 * ((x + 1) % sites)];
    const Complex down = state.amplitudes[2 * ((x + sites - 1) % sites) + 1];
    out.amplitudes[2 * x] = coin(0, 0) * up + coin(0, 1) * down;
    out.amplitudes[2 * x + 1] = coin(1, 0) * up + coin(1, 1) * down;
  }
  return out;
}

ComplexMatrix uk_matrix(std::size_t k, std::size_t lattice_size, double theta) {
  const double phi = 2.0 * pi * double(k) / double(lattice_size);
  const Complex left = std::polar(1.0, -phi);
  const Complex right = std::polar(1.0, phi);
  const auto coin = coin_matrix(theta);
  return ComplexMatrix(2, 2, {left * coin(0, 0), left * coin(0, 1), right * coin(1, 0), right * coin(1, 1)});
}

namespace {

std::array<Complex, 2> normalized_alpha_real(Complex a, Complex b) {
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  Complex phase = 1.0;
  if (std::abs(a) > 0.0) phase = std::conj(a) / std::abs(a);
  return {a * phase / nrm, b * phase / nrm};
}

// Eigenvector of U_k for eigenvalue lambda at sin(theta) != 0. The two rows of
// (U_k - lambda) give beta/alpha = r1 / sin(theta) and alpha/beta =
// r2 / sin(theta) with r1 r2 = sin^2(theta); the larger of r1, r2 suffers
// the least cancellation.
std::array<Complex, 2> eigenvector(double phi, double theta, Complex lambda) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex r1 = std::polar(1.0, phi) * lambda - c;
  const Complex r2 = std::polar(1.0, -phi) * lambda + c;
  if (std::abs(r1) >= std::abs(r2)) return normalized_alpha_real(s, r1);
  return normalized_alpha_real(r2, s);
}

}  // namespace

MomentumMode momentum_mode(std::size_t k, std::size_t lattice_size, double theta) {
  if (lattice_size == 0 || k >= lattice_size) throw std::domain_error("momentum_mode: k outside [0, M)");
  theta = checked_theta(theta);
  MomentumMode mode;
  mode.k = k;
  mode.phi = 2.0 * pi * double(k) / double(lattice_size);
  const double c = std::cos(theta);
  const double sin_phi = std::sin(mode.phi);
  const double root = std::sqrt(std::max(0.0, 1.0 - c * c * sin_phi * sin_phi));
  mode.omega = std::atan2(c * sin_phi, root);
  mode.lambda_plus = std::polar(1.0, -mode.omega);
  mode.lambda_minus = -std::polar(1.0, mode.omega);

  if (std::sin(theta) == 0.0) {
    // U_k = diag(e^{-i phi}, -e^{i phi}); pick the sigma_z state that carries lambda_plus.
    const Complex up_value = std::polar(1.0, -mode.phi);
    const Complex down_value = -std::polar(1.0, mode.phi);
    const bool up_is_plus = std::abs(mode.lambda_plus - up_value) <= std::abs(mode.lambda_plus - down_value);
    const std::array<Complex, 2> up{1.0, 0.0};
    const std::array<Complex, 2> down{0.0, 1.0};
    mode.s_plus = up_is_plus ? up : down;
    mode.s_minus = up_is_plus ? down : up;
  } else {
    mode.s_plus = eigenvector(mode.phi, theta, mode.lambda_plus);
    mode.s_minus = eigenvector(mode.phi, theta, mode.lambda_minus);
  }
  return mode;
}

std::vector<MomentumMode> momentum_modes(std::size_t lattice_size, double theta) {
  std::vector<MomentumMode> modes;
  modes.reserve(lattice_size);
  for (std::size_t k = 0; k < lattice_size; ++k) modes.push_back(momentum_mode(k, lattice_size, theta));
  return modes;
}

ComplexMatrix uk_power(const MomentumMode& mode, long n) {
  if (n < 0) throw std::domain_error("uk_power: negative exponent");
  const Complex plus = std::polar(1.0, -double(n) * mode.omega);
  const Complex minus = (n % 2 == 0 ? 1.0 : -1.0) * std::polar(1.0, double(n) * mode.omega);
  ComplexMatrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      out(i, j) = plus * mode.s_plus[i] * std::conj(mode.s_plus[j]) +
                  minus * mode.s_minus[i] * std::conj(mode.s_minus[j]);
  return out;
}

ComplexMatrix uk_power(std::size_t k, std::size_t lattice_size, double theta, long n) {
  return uk_power(momentum_mode(k, lattice_size, theta), n);
}

SystemState initial_state(const WalkConfig& config) {
  SystemState state{Basis::position, ComplexVector(2 * config.psi0.size())};
  for (std::size_t x = 0; x < config.psi0.size(); ++x) {
    state.amplitudes[2 * x] = config.psi0[x] * config.alpha;
    state.amplitudes[2 * x + 1] = config.psi0[x] * config.beta;
  }
  return state;
}

namespace {

SystemState transform(const SystemState& state, Basis target) {
  const std::size_t sites = state.lattice_size();
  ComplexVector up(sites), down(sites);
  for (std::size_t x = 0; x < sites; ++x) {
    up[x] = state.amplitudes[2 * x];
    down[x] = state.amplitudes[2 * x + 1];
  }
  const bool forward = target == Basis::momentum;
  const auto up_t = forward ? dft_coefficients(up) : inverse_dft(up);
  const auto down_t = forward ? dft_coefficients(down) : inverse_dft(down);
  SystemState out{target, ComplexVector(state.amplitudes.size())};
  for (std::size_t i = 0; i < sites; ++i) {
    out.amplitudes[2 * i] = up_t[i];
    out.amplitudes[2 * i + 1] = down_t[i];
  }
  return out;
}

}  // namespace

SystemState to_momentum(const SystemState& state) {
  require_basis(state, Basis::position, "to_momentum");
  return transform(state, Basis::momentum);
}

SystemState to_position(const SystemState& state) {
  require_basis(state, Basis::momentum, "to_position");
  return transform(state, Basis::position);
}

SystemState evolve(const WalkConfig& config, long n, Basis basis) {
  config.validate();
  const auto modes = momentum_modes(config.lattice_size, config.theta);
  return evolve(config, modes, n, basis);
}

SystemState evolve(const WalkConfig& config, std::span<const MomentumMode> modes, long n, Basis basis) {
  if (n < 0) throw std::domain_error("evolve: negative step count");
  if (modes.size() != config.lattice_size) throw std::invalid_argument("evolve: mode table size mismatch");
  const auto c = dft_coefficients(config.psi0);
  SystemState state{Basis::momentum, ComplexVector(2 * config.lattice_size)};
  const std::array<Complex, 2> chi{config.alpha, config.beta};
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& mode = modes[k];
    const Complex plus = std::polar(1.0, -double(n) * mode.omega) *
                         (std::conj(mode.s_plus[0]) * chi[0] + std::conj(mode.s_plus[1]) * chi[1]);
    const Complex minus = (n % 2 == 0 ? 1.0 : -1.0) * std::polar(1.0, double(n) * mode.omega) *
                          (std::conj(mode.s_minus[0]) * chi[0] + std::conj(mode.s_minus[1]) * chi[1]);
    for (std::size_t s = 0; s < 2; ++s)
      state.amplitudes[2 * k + s] = c[k] * (plus * mode.s_plus[s] + minus * mode.s_minus[s]);
  }
  return basis == Basis::momentum ? state : to_position(state);
}

ComplexMatrix position_observable(std::size_t lattice_size) {
  ComplexMatrix x(2 * lattice_size, 2 * lattice_size);
  for (std::size_t site = 0; site < lattice_size; ++site) {
    x(2 * site, 2 * site) = double(site);
    x(2 * site + 1, 2 * site + 1) = double(site);
  }
  return x;
}

ComplexMatrix spin_z_observable(std::size_t lattice_size) {
  ComplexMatrix z(2 * lattice_size, 2 * lattice_size);
  for (std::size_t site = 0; site < lattice_size; ++site) {
    z(2 * site, 2 * site) = 1.0;
    z(2 * site + 1, 2 * site + 1) = -1.0;
  }
  return z;
}

}  // namespace qwh
