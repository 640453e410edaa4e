#pragma once

// Table producers behind the qwh subcommands. Each returns the CSV and sets
// `invariant_ok` to false when a built-in cross-check misses its tolerance.

#include <string>

#include "qwh_cli/circuit.hpp"
#include "qwh_cli/csv.hpp"
#include "qwh_cli/run_spec.hpp"

namespace qwh::cli {

enum ExitCode : int { exit_ok = 0, exit_invariant = 1, exit_usage = 2 };

/// theta, n, mean_x, var_x, mean_sz, overlap_re, overlap_im, norm for
/// n = 0..N-1 (positions measured from x0).
CsvTable walk_table(const RunSpec& spec, bool& invariant_ok);

/// theta, N, entropy (requested kind), e2, e2_closed, generator_residual.
/// Fails the invariant when e2 and e2_closed differ by more than 1e-9 or
/// the residual exceeds 1e-10.
CsvTable history_table(const RunSpec& spec, bool& invariant_ok);

/// theta, lambda_1..lambda_N from the Gram matrix.
CsvTable spectrum_table(const RunSpec& spec, bool& invariant_ok);

/// Operator entanglement of un (U^n, N = n), w (history generator) or ws
/// (spin history operator). With samples > 0 adds Monte-Carlo columns, and
/// fails the invariant when the mean is more than 3 standard errors off.
CsvTable opent_table(const RunSpec& spec, bool& invariant_ok);

struct CircuitOptions {
  bool localized = false;  // particle at x = 0 and Hadamards instead of FT
  std::string qasm_path;
  bool check = false;      // re-simulate and compare with the history state
};

/// Walk configuration a circuit is emitted for: x0 = 0 when localized,
/// otherwise the RunSpec's x0 (default M / 2). N and M are required.
WalkConfig circuit_config(const RunSpec& spec, const CircuitOptions& options);

/// Writes `path`, or the stream when path is "-" or empty. Throws
/// std::runtime_error when the file cannot be opened.
void write_output(const std::string& path, const CsvTable& table, std::ostream& fallback);

}  // namespace qwh::cli
