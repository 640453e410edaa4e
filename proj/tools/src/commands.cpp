#include "qwh_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"
#include "qwh/operator_ent.hpp"

namespace qwh::cli {
namespace {

std::vector<double> thetas_or(const RunSpec& spec, double fallback) {
  return spec.theta.empty() ? std::vector<double>{fallback} : spec.theta;
}

void stamp(CsvTable& t, const RunSpec& spec) {
  t.metadata.emplace_back("qwh", QWH_VERSION);
  for (auto& kv : spec.echo()) t.metadata.push_back(std::move(kv));
}

}  // namespace

CsvTable walk_table(const RunSpec& spec, bool& invariant_ok) {
  spec.validate();
  const auto n = spec.clock_size.value_or(20);
  CsvTable t;
  stamp(t, spec);
  t.columns = {"theta", "n", "mean_x", "var_x", "mean_sz", "overlap_re", "overlap_im", "norm"};
  for (const double theta : thetas_or(spec, pi / 4)) {
    const auto config = make_config(spec, theta, n);
    const auto m = config.lattice_size;
    const auto x0 = *config.localized_site();
    const auto start = initial_state(config);
    const auto modes = momentum_modes(m, theta);
    for (std::size_t step = 0; step < n; ++step) {
      const auto s = evolve(config, modes, long(step));
      double mx = 0.0, mx2 = 0.0, sz = 0.0;
      for (std::size_t x = 0; x < m; ++x) {
        const double p_up = std::norm(s.amplitudes[2 * x]), p_down = std::norm(s.amplitudes[2 * x + 1]);
        long d = long((x + m - x0) % m);
        if (d > long(m / 2)) d -= long(m);
        mx += double(d) * (p_up + p_down);
        mx2 += double(d) * double(d) * (p_up + p_down);
        sz += p_up - p_down;
      }
      const auto ov = inner(start.amplitudes, s.amplitudes);
      const double nrm = norm(s.amplitudes);
      if (std::abs(nrm - 1.0) > 1e-12) invariant_ok = false;
      t.add_row({format_double(theta), format_count(step), format_double(mx), format_double(mx2 - mx * mx),
                 format_double(sz), format_double(ov.real()), format_double(ov.imag()), format_double(nrm)});
    }
  }
  return t;
}

CsvTable history_table(const RunSpec& spec, bool& invariant_ok) {
  spec.validate();
  const auto n = spec.clock_size.value_or(16);
  CsvTable t;
  stamp(t, spec);
  t.columns = {"theta", "N", "entropy", "e2", "e2_closed", "generator_residual"};
  for (const double theta : thetas_or(spec, pi / 4)) {
    const auto h = build_history(make_config(spec, theta, n));
    const auto sp = entanglement_spectrum(gram_matrix(h));
    const double e2 = entropy(sp, EntropyKind::quadratic);
    const double closed = e2_closed_localized(theta, n);
    const double residual = generator_check(h, theta);
    if (std::abs(e2 - closed) > 1e-9 || residual > 1e-10) invariant_ok = false;
    t.add_row({format_double(theta), format_count(n), format_double(entropy(sp, spec.entropy)), format_double(e2),
               format_double(closed), format_double(residual)});
  }
  return t;
}

CsvTable spectrum_table(const RunSpec& spec, bool&) {
  spec.validate();
  const auto n = spec.clock_size.value_or(40);
  CsvTable t;
  stamp(t, spec);
  t.columns = {"theta"};
  for (std::size_t i = 1; i <= n; ++i) t.columns.push_back("lambda_" + std::to_string(i));
  for (const double theta : thetas_or(spec, pi / 4)) {
    const auto sp = entanglement_spectrum(gram_matrix(build_history(make_config(spec, theta, n))));
    std::vector<std::string> row{format_double(theta)};
    for (std::size_t i = 0; i < n; ++i) row.push_back(format_double(sp[i]));
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable opent_table(const RunSpec& spec, bool& invariant_ok) {
  spec.validate();
  const std::string which = spec.target.empty() ? "un" : spec.target;
  if (which != "un" && which != "w" && which != "ws")
    throw std::invalid_argument("operator must be un, w or ws, got '" + which + "'");
  const auto n = spec.clock_size.value_or(8);
  const bool spin_target = which != "w";
  const std::size_t shown = spin_target ? 3 : n;

  CsvTable t;
  stamp(t, spec);
  t.columns = {"theta", "rank", "e_vn", "e_quad", "e_renyi2"};
  if (spin_target) t.columns.push_back("e2_rescaled");
  for (std::size_t i = 1; i <= shown; ++i) t.columns.push_back("lambda_" + std::to_string(i));
  if (spec.samples) t.columns.insert(t.columns.end(), {"mc_mean", "mc_stderr", "mc_closed"});

  for (const double theta : thetas_or(spec, pi / 4)) {
    ControlledOperator op;
    std::size_t m = 0;
    if (which == "w") {
      const auto config = make_config(spec, theta, n);
      m = config.lattice_size;
      op = build_W(config);
    } else {
      m = spec.lattice_size.value_or(64);
      op = which == "un" ? un_operator(theta, m, long(n)) : build_Ws(theta, m, n);
    }
    const auto os = operator_schmidt(op);
    std::vector<std::string> row{format_double(theta), format_count(os.rank)};
    for (auto kind : {EntropyKind::von_neumann, EntropyKind::quadratic, EntropyKind::renyi2})
      row.push_back(format_double(entropy(os.spectrum, kind)));
    if (spin_target)
      row.push_back(format_double(scaled_entropy(os.spectrum, EntropyKind::quadratic, EntropyScale::spin_rescaled)));
    for (std::size_t i = 0; i < shown; ++i) row.push_back(format_double(i < os.spectrum.size() ? os.spectrum[i] : 0.0));
    if (spec.samples) {
      MonteCarloEstimate mc;
      if (which == "w") mc = entangling_power_check(make_config(spec, theta, n), spec.samples, spec.seed);
      else if (which == "un") mc = spin_average_entanglement(theta, m, spec.x0.value_or(m / 2), long(n), spec.samples, spec.seed);
      else mc = entangling_power(op, spec.samples, spec.seed, EntropyScale::spin_rescaled);
      if (std::abs(mc.mean - mc.closed_form) > 3.0 * mc.standard_error + 1e-12) invariant_ok = false;
      row.insert(row.end(), {format_double(mc.mean), format_double(mc.standard_error), format_double(mc.closed_form)});
    }
    t.add_row(std::move(row));
  }
  return t;
}

WalkConfig circuit_config(const RunSpec& spec, const CircuitOptions& options) {
  if (!spec.clock_size || !spec.lattice_size) throw std::invalid_argument("circuit needs --n and --m");
  const double theta = spec.theta.empty() ? pi / 4 : spec.theta.front();
  if (spec.theta.size() > 1) throw std::invalid_argument("circuit takes a single theta");
  const auto m = *spec.lattice_size;
  const auto x0 = options.localized ? 0 : spec.x0.value_or(m / 2);
  if (x0 >= m) throw std::invalid_argument("x0 must be below M");
  const auto [a, b] = normalized_spin(spec.alpha, spec.beta);
  return WalkConfig::localized(theta, m, *spec.clock_size, x0, a, b);
}

void write_output(const std::string& path, const CsvTable& table, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    write_csv(fallback, table);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, table);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qwh::cli
