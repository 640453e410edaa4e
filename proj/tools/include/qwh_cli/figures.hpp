#pragma once

// Data behind figures 2-7 as CSV tables.
//
//   fig2  E(S,T) against N for a set of coin angles (localized start)
//   fig3  E(S,T) against theta for N = 2, 10, 20, ..., 100
//   fig4  history entanglement spectrum against theta, N = 40
//   fig5  operator Schmidt spectrum of U^n against theta, n odd and even
//   fig6  Haar-averaged spin-position entropy (2/3) E_2(U^n)
//   fig7  spin-rest entropy (2/3) E_2(W_s) and the spectrum of W_s, N = 20

#include <string>
#include <string_view>
#include <vector>

#include "qwh_cli/csv.hpp"
#include "qwh_cli/run_spec.hpp"

namespace qwh::cli {

enum class FigureId { fig2, fig3, fig4, fig5, fig6, fig7 };

/// Throws std::invalid_argument for an unknown id.
FigureId parse_figure_id(std::string_view text);
std::string_view to_string(FigureId id) noexcept;

struct FigureSchema {
  std::vector<std::string> columns;
  std::vector<std::string> grid;  // lexicographically non-decreasing
};

/// Columns for the given overrides (fig4 has one column per eigenvalue).
FigureSchema figure_schema(FigureId id, const RunSpec& overrides);

/// Default coin-angle grid of a figure.
std::vector<double> default_thetas(FigureId id);

/// theta and n-max (RunSpec::clock_size) override the figure defaults;
/// fig5-fig7 also honor M.
CsvTable run_figure(FigureId id, const RunSpec& overrides);

/// Runs fn(i) for i < count on up to `workers` threads. The first exception
/// thrown is rethrown after all threads have joined.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn);

}  // namespace qwh::cli

#include "qwh_cli/parallel.ipp"
