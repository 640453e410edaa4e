#include "qwh_cli/figures.hpp"

#include <algorithm>
#include <stdexcept>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"
#include "qwh/operator_ent.hpp"
#include "qwh_cli/angles.hpp"

namespace qwh::cli {
namespace {

constexpr double spin_bound = 8.0 / 9.0;

std::size_t n_max_of(FigureId id, const RunSpec& spec) {
  if (spec.clock_size) return *spec.clock_size;
  switch (id) {
    case FigureId::fig2:
    case FigureId::fig3: return 100;
    case FigureId::fig4: return 40;
    case FigureId::fig5:
    case FigureId::fig6: return 10;
    case FigureId::fig7: return 20;
  }
  return 0;
}

std::size_t operator_lattice(const RunSpec& spec) {
  const auto m = spec.lattice_size.value_or(64);
  if (m < 4) throw std::invalid_argument("operator figures need M >= 4");
  return m;
}

std::vector<std::size_t> fig3_clock_sizes(std::size_t n_max) {
  std::vector<std::size_t> out;
  if (n_max >= 2) out.push_back(2);
  for (std::size_t n = 10; n <= n_max; n += 10) out.push_back(n);
  return out;
}

std::vector<long> fig5_powers(std::size_t n_max) {
  if (n_max <= 1) return {long(n_max)};
  return {long(n_max) - 1, long(n_max)};
}

GramMatrix leading_block(const GramMatrix& g, std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = g.entries(i, j);
  return {std::move(out)};
}

/// Gram matrix of the localized walk up to n_max clock times. Any shorter
/// history is its leading block since the walk never wraps.
GramMatrix full_gram(const RunSpec& spec, double theta, std::size_t n_max) {
  return gram_matrix(build_history(make_config(spec, theta, n_max)));
}

std::vector<double> thetas_of(FigureId id, const RunSpec& spec) {
  if (spec.theta.empty()) return default_thetas(id);
  auto t = spec.theta;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

void header(CsvTable& table, FigureId id, const RunSpec& spec, const FigureSchema& schema) {
  table.metadata.emplace_back("qwh", QWH_VERSION);
  table.metadata.emplace_back("figure", std::string(to_string(id)));
  for (auto& kv : spec.echo()) table.metadata.push_back(std::move(kv));
  std::string grid;
  for (std::size_t i = 0; i < schema.grid.size(); ++i) grid += (i ? ";" : "") + schema.grid[i];
  table.metadata.emplace_back("grid", grid);
  table.columns = schema.columns;
}

using Row = std::vector<std::string>;

}  // namespace

FigureId parse_figure_id(std::string_view text) {
  for (auto id : {FigureId::fig2, FigureId::fig3, FigureId::fig4, FigureId::fig5, FigureId::fig6, FigureId::fig7})
    if (text == to_string(id)) return id;
  throw std::invalid_argument("unknown figure '" + std::string(text) + "' (expected fig2..fig7)");
}

std::string_view to_string(FigureId id) noexcept {
  switch (id) {
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    case FigureId::fig5: return "fig5";
    case FigureId::fig6: return "fig6";
    case FigureId::fig7: return "fig7";
  }
  return "?";
}

std::vector<double> default_thetas(FigureId id) {
  return linspace(0.0, pi / 2, id == FigureId::fig2 ? 10 : 40);
}

FigureSchema figure_schema(FigureId id, const RunSpec& spec) {
  switch (id) {
    case FigureId::fig2: return {{"theta", "N", "e_vn", "e_quad", "e2_closed"}, {"theta", "N"}};
    case FigureId::fig3: return {{"N", "theta", "e_vn", "e_quad", "e2_closed"}, {"N", "theta"}};
    case FigureId::fig4: {
      FigureSchema s{{"theta"}, {"theta"}};
      for (std::size_t i = 1; i <= n_max_of(id, spec); ++i) s.columns.push_back("lambda_" + std::to_string(i));
      return s;
    }
    case FigureId::fig5: return {{"n", "theta", "lambda_1", "lambda_2", "lambda_3", "rank"}, {"n", "theta"}};
    case FigureId::fig6: return {{"n", "theta", "e2_un", "average", "bound"}, {"n", "theta"}};
    case FigureId::fig7:
      return {{"theta", "lambda_1", "lambda_2", "lambda_3", "e2_ws", "average", "bound"}, {"theta"}};
  }
  return {};
}

CsvTable run_figure(FigureId id, const RunSpec& spec) {
  spec.validate();
  const auto schema = figure_schema(id, spec);
  const auto thetas = thetas_of(id, spec);
  if (thetas.empty()) throw std::invalid_argument("empty theta list");
  const auto n_max = n_max_of(id, spec);
  if (n_max == 0) throw std::invalid_argument("n-max must be positive");
  const auto workers = worker_count(spec, thetas.size());

  CsvTable table;
  header(table, id, spec, schema);

  switch (id) {
    case FigureId::fig2:
    case FigureId::fig3: {
      std::vector<std::size_t> sizes;
      if (id == FigureId::fig2)
        for (std::size_t n = 1; n <= n_max; ++n) sizes.push_back(n);
      else
        sizes = fig3_clock_sizes(n_max);
      if (sizes.empty()) throw std::invalid_argument("fig3 needs n-max >= 2");
      const auto top = sizes.back();
      table.metadata.emplace_back("M_used", format_count(make_config(spec, thetas.front(), top).lattice_size));
      std::vector<std::vector<Row>> cells(thetas.size(), std::vector<Row>(sizes.size()));
      parallel_for(thetas.size(), workers, [&](std::size_t t) {
        const double theta = thetas[t];
        const auto gram = full_gram(spec, theta, top);
        for (std::size_t i = 0; i < sizes.size(); ++i) {
          const auto n = sizes[i];
          const auto sp = entanglement_spectrum(leading_block(gram, n), SpectrumRoute::parity_blocks);
          const auto e_vn = entropy(sp, EntropyKind::von_neumann);
          const auto e_quad = entropy(sp, EntropyKind::quadratic);
          const auto closed = e2_closed_localized(theta, n);
          Row lead = id == FigureId::fig2 ? Row{format_double(theta), format_count(n)}
                                          : Row{format_count(n), format_double(theta)};
          lead.insert(lead.end(), {format_double(e_vn), format_double(e_quad), format_double(closed)});
          cells[t][i] = std::move(lead);
        }
      });
      if (id == FigureId::fig2) {
        for (auto& per_theta : cells)
          for (auto& row : per_theta) table.add_row(std::move(row));
      } else {
        for (std::size_t i = 0; i < sizes.size(); ++i)
          for (std::size_t t = 0; t < thetas.size(); ++t) table.add_row(std::move(cells[t][i]));
      }
      break;
    }
    case FigureId::fig4: {
      table.metadata.emplace_back("M_used", format_count(make_config(spec, thetas.front(), n_max).lattice_size));
      std::vector<Row> rows(thetas.size());
      parallel_for(thetas.size(), workers, [&](std::size_t t) {
        const auto sp = entanglement_spectrum(full_gram(spec, thetas[t], n_max), SpectrumRoute::parity_blocks);
        Row row{format_double(thetas[t])};
        for (std::size_t i = 0; i < n_max; ++i) row.push_back(format_double(sp[i]));
        rows[t] = std::move(row);
      });
      for (auto& r : rows) table.add_row(std::move(r));
      break;
    }
    case FigureId::fig5:
    case FigureId::fig6: {
      const auto m = operator_lattice(spec);
      table.metadata.emplace_back("M_used", format_count(m));
      const auto powers = fig5_powers(n_max);
      std::vector<Row> rows(powers.size() * thetas.size());
      parallel_for(rows.size(), worker_count(spec, rows.size()), [&](std::size_t idx) {
        const auto n = powers[idx / thetas.size()];
        const double theta = thetas[idx % thetas.size()];
        const auto os = operator_schmidt(un_operator(theta, m, n));
        Row row{std::to_string(n), format_double(theta)};
        if (id == FigureId::fig5) {
          for (std::size_t i = 0; i < 3; ++i) row.push_back(format_double(os.spectrum[i]));
          row.push_back(format_count(os.rank));
        } else {
          const auto e2 = scaled_entropy(os.spectrum, EntropyKind::quadratic, EntropyScale::spin_rescaled);
          row.insert(row.end(), {format_double(e2), format_double(2.0 * e2 / 3.0), format_double(spin_bound)});
        }
        rows[idx] = std::move(row);
      });
      for (auto& r : rows) table.add_row(std::move(r));
      break;
    }
    case FigureId::fig7: {
      const auto m = operator_lattice(spec);
      table.metadata.emplace_back("M_used", format_count(m));
      std::vector<Row> rows(thetas.size());
      parallel_for(thetas.size(), workers, [&](std::size_t t) {
        const auto os = operator_schmidt(build_Ws(thetas[t], m, n_max));
        const auto e2 = scaled_entropy(os.spectrum, EntropyKind::quadratic, EntropyScale::spin_rescaled);
        Row row{format_double(thetas[t])};
        for (std::size_t i = 0; i < 3; ++i) row.push_back(format_double(os.spectrum[i]));
        row.insert(row.end(), {format_double(e2), format_double(2.0 * e2 / 3.0), format_double(spin_bound)});
        rows[t] = std::move(row);
      });
      for (auto& r : rows) table.add_row(std::move(r));
      break;
    }
  }
  return table;
}

}  // namespace qwh::cli
