#pragma once

// Gate-list rendering of the history-state preparation circuit and a
// statevector simulator to check it.
//
// Qubit layout: position q0..q(m'-1) with q0 the most significant bit,
// spin q(m'), clock q(m'+1)..q(m'+m). The basis index of the whole register
// is then (2 k + s) N + n, the ordering of HistoryState::flattened.
//
// Gates:
//   H        one qubit
//   FT       |x> -> M^{-1/2} sum_k exp(-2 pi i x k / M) |k> on the listed qubits
//   CU_WALK  qubits = clock, position, spin; applies U^n = sum_k |k><k| (x) U_k^n
//            to (position, spin) when the clock reads n. params theta, n.
//
// After the FT the position register holds momentum labels, so the circuit
// output is the history state in the momentum basis.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwh/numerics.hpp"
#include "qwh/walk.hpp"

namespace qwh::cli {

struct Gate {
  std::string name;
  std::vector<std::size_t> qubits;
  std::vector<std::pair<std::string, std::string>> params;

  std::optional<std::string> param(std::string_view key) const;
};

struct Circuit {
  std::size_t position_qubits = 0;  // m', M = 2^m'
  std::size_t clock_qubits = 0;     // m, N = 2^m
  std::vector<Gate> gates;

  std::size_t qubit_count() const noexcept { return position_qubits + 1 + clock_qubits; }
  std::size_t spin_qubit() const noexcept { return position_qubits; }
  std::size_t clock_qubit(std::size_t j) const noexcept { return position_qubits + 1 + j; }
  std::size_t count(std::string_view name) const;
};

/// log2 of a power of two; throws std::domain_error otherwise.
std::size_t exact_log2(std::size_t value, const char* what);

/// Hadamards on the position register when c_k is flat (particle at x = 0),
/// the FT gate otherwise; Hadamards on the clock; one CU_WALK per n >= 1.
/// N and M must be powers of two (std::domain_error).
Circuit emit_circuit(const WalkConfig& config);

void write_circuit(std::ostream& os, const Circuit& circuit);
/// Throws std::runtime_error on malformed text.
Circuit parse_circuit(std::istream& is);
/// OpenQASM 2.0 with FT and CU_WALK as opaque gates.
void write_qasm(std::ostream& os, const Circuit& circuit);

/// |psi_0>|chi_0>|0> in the circuit layout.
ComplexVector circuit_input(const WalkConfig& config);
ComplexVector simulate_circuit(const Circuit& circuit, std::span<const Complex> input);

/// |<circuit output | history state in the momentum basis>|.
double circuit_fidelity(const Circuit& circuit, const WalkConfig& config);

}  // namespace qwh::cli
