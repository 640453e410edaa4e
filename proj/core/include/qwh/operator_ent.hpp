#pragma once

// Operator entanglement of bipartite unitaries through their Choi vectors:
// operator Schmidt decompositions, the controlled history generator W, the
// spin history operators U^n and W_s, and Monte-Carlo entangling power.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwh/numerics.hpp"
#include "qwh/walk.hpp"

namespace qwh {

/// Dense operator on H_S (x) H_T, basis index a * dim_t + b.
struct BipartiteOperator {
  std::size_t dim_s = 0;
  std::size_t dim_t = 0;
  ComplexMatrix matrix;
  std::string label_s = "S";
  std::string label_t = "T";
  bool unitary = true;

  /// Throws std::domain_error on a shape mismatch or, when flagged unitary,
  /// a unitarity defect above 1e-10.
  void validate() const;
};

/// sum_c |c><c| (x) B_c with all blocks of one size.
struct ControlledOperator {
  std::vector<ComplexMatrix> blocks;
  bool control_first = true;  // tensor order of the dense form
  std::string control_label = "C";
  std::string target_label = "B";

  std::size_t control_dim() const noexcept { return blocks.size(); }
  std::size_t target_dim() const noexcept { return blocks.empty() ? 0 : blocks.front().rows(); }

  void validate() const;
  BipartiteOperator to_dense() const;
  /// Applies the operator to a vector in the dense ordering.
  ComplexVector apply(std::span<const Complex> v) const;
};

/// op = sum_m sqrt(lambda_m) A_m (x) B_m with Tr[A^dag A] and Tr[B^dag B]
/// equal to the dimension of their factor. For a controlled operator the
/// first factors act on the control and are diagonal.
struct OperatorSchmidt {
  SchmidtSpectrum spectrum;
  std::size_t rank = 0;                 // values above 1e-12
  std::vector<double> singular_values;  // before normalization of the weights
  std::vector<ComplexMatrix> first_factors;
  std::vector<ComplexMatrix> second_factors;
};

/// (U (x) 1)|1> with |1> = d^{-1/2} sum_i |i>|i>; entry i * d + j = U_ij / sqrt(d).
ComplexVector choi_vectorize(const ComplexMatrix& op);
ComplexVector choi_vectorize(const BipartiteOperator& op);

/// Reshuffle the operator into the coefficient matrix on the normalized
/// matrix-unit bases and take its SVD. Weights are normalized to sum to one.
OperatorSchmidt operator_schmidt(const BipartiteOperator& op);
/// Same decomposition using only the blocks; the control-side factors are diagonal.
OperatorSchmidt operator_schmidt(const ControlledOperator& op);

/// <B_c|B_c'> = Tr[B_c^dag B_c'] / d_B.
ComplexMatrix block_gram(const ControlledOperator& op);
/// Eigenvalues of block_gram / d_C, the spectrum of a controlled operator
/// without any SVD.
SchmidtSpectrum controlled_spectrum_gram(const ControlledOperator& op);

/// unit: entropy as defined; spin_rescaled: quadratic entropy 2 (1 - sum l^2),
/// the convention used for spin sectors. spin_rescaled with any other kind
/// throws std::invalid_argument.
enum class EntropyScale { unit, spin_rescaled };

double scaled_entropy(const SchmidtSpectrum& spectrum, EntropyKind kind, EntropyScale scale);

/// Throw std::domain_error if the operator is not unitary.
double op_entanglement(const BipartiteOperator& op, EntropyKind kind, EntropyScale scale = EntropyScale::unit);
double op_entanglement(const ControlledOperator& op, EntropyKind kind, EntropyScale scale = EntropyScale::unit);

/// sum_n U^n (x) |n><n| with U^n in the position basis, system first.
ControlledOperator build_W(const WalkConfig& config);

/// sum_k |k><k| (x) U_k^n, momentum first.
ControlledOperator un_operator(double theta, std::size_t lattice_size, long n);

/// (cos phi / cos omega) sigma_theta + (sin phi sin theta / cos omega) sigma_y.
/// Throws DegenerateMode when |cos omega| <= 1e-9.
struct DegenerateMode : std::domain_error {
  using std::domain_error::domain_error;
};
ComplexMatrix sigma_k_matrix(std::size_t k, std::size_t lattice_size, double theta);

/// sum_{k,n} |k n><k n| (x) U_k^n with the composite clock (k, n) first.
ControlledOperator build_Ws(double theta, std::size_t lattice_size, std::size_t clock_size);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double closed_form = 0.0;
  std::size_t samples = 0;
};

/// Haar average over target states psi of the control-target quadratic
/// entanglement of d_C^{-1/2} sum_c |c> (x) B_c |psi>, against
/// d_B / (d_B + 1) E_2(op). Both sides carry the requested scale.
MonteCarloEstimate entangling_power(const ControlledOperator& op, std::size_t samples, std::uint64_t seed,
                                    EntropyScale scale = EntropyScale::unit);

/// entangling_power of build_W(config): random system states, clock as control.
MonteCarloEstimate entangling_power_check(const WalkConfig& config, std::size_t samples, std::uint64_t seed);

/// Rescaled quadratic spin-position entanglement 2 (1 - Tr rho_spin^2) of
/// |Psi_n>. Requires a localized psi0.
double spin_position_entanglement(const WalkConfig& config, long n);

/// Haar average of spin_position_entanglement over the initial spin, by
/// simulation, against (2/3) E_2(U^n) rescaled. The particle starts at x0.
MonteCarloEstimate spin_average_entanglement(double theta, std::size_t lattice_size, std::size_t x0, long n,
                                             std::size_t samples, std::uint64_t seed);

}  // namespace qwh
