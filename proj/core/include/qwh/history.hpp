#pragma once

// History states |Psi> = N^{-1/2} sum_n |Psi_n> (x) |n> of a walk and their
// system-clock entanglement.

#include <cstddef>
#include <optional>
#include <vector>

#include "qwh/numerics.hpp"
#include "qwh/walk.hpp"

namespace qwh {

class HistoryState {
 public:
  /// Takes position-basis states of equal length, each of unit norm within
  /// 1e-12. theta is recorded when the states come from a walk.
  /// Throws std::domain_error otherwise.
  HistoryState(std::vector<SystemState> states, std::optional<double> theta = std::nullopt);

  std::size_t clock_size() const noexcept { return states_.size(); }
  std::size_t lattice_size() const noexcept { return states_.front().lattice_size(); }
  std::size_t system_dim() const noexcept { return states_.front().amplitudes.size(); }
  const std::vector<SystemState>& states() const noexcept { return states_; }
  const SystemState& operator[](std::size_t n) const noexcept { return states_[n]; }
  std::optional<double> theta() const noexcept { return theta_; }

  /// First n clock times as a history of its own.
  HistoryState prefix(std::size_t n) const;

  /// Full state, entry i * N + n = Psi_n(i) / sqrt(N).
  ComplexVector flattened() const;

 private:
  std::vector<SystemState> states_;
  std::optional<double> theta_;
};

/// |Psi_n> for n = 0..N-1 by repeated position-space steps.
HistoryState build_history(const WalkConfig& config);

/// || U_sys-clock |Psi> - |Psi> || for the cyclic clock generator
/// sum_n U |n+1><n| with the closing block (U^{N-1})^dag from N-1 back to 0.
double generator_check(const HistoryState& history, double theta);

/// (1/N) sum_n <Psi_n|O|Psi_n>. Throws std::domain_error if O is not Hermitian.
double time_average(const HistoryState& history, const ComplexMatrix& observable);

/// rho_S = (1/N) sum_n |Psi_n><Psi_n|.
ComplexMatrix reduced_system_density(const HistoryState& history);

/// G(n', n) = <Psi_n'|Psi_n>.
struct GramMatrix {
  ComplexMatrix entries;
  std::size_t size() const noexcept { return entries.rows(); }
};

GramMatrix gram_matrix(const HistoryState& history);

enum class SpectrumRoute { dense, parity_blocks };

/// Eigenvalues of G/N. Throws std::domain_error when G is not Hermitian
/// (1e-10), lacks a unit diagonal, has eigenvalues below -1e-9, or, for the
/// parity route, couples even and odd times.
SchmidtSpectrum entanglement_spectrum(const GramMatrix& gram, SpectrumRoute route = SpectrumRoute::dense);

double system_time_entanglement(const HistoryState& history, EntropyKind kind);

struct SchmidtModes {
  SchmidtSpectrum spectrum;
  std::vector<ComplexVector> system_modes;  // position basis, length 2M
  std::vector<ComplexVector> clock_modes;   // length N
  std::size_t rank = 0;                     // values above 1e-12
};

/// Schmidt decomposition from the SVD of <k, s_k^nu|Psi_n> / sqrt(N) when the
/// walk angle is known, otherwise of the position amplitudes.
SchmidtModes schmidt_modes(const HistoryState& history);

/// 1 - sum_{n,n'} |G(n',n)|^2 / N^2.
double e2_double_sum(const GramMatrix& gram);
/// 1 - [1 + 2 sum_{d>=1} (1 - d/N) |G(0,d)|^2] / N, valid when |G| depends
/// only on |n - n'|.
double e2_partial_sum(const GramMatrix& gram);

}  // namespace qwh
