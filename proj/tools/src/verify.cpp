#include "qwh_cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"
#include "qwh/operator_ent.hpp"
#include "qwh/walk.hpp"
#include "qwh_cli/angles.hpp"

namespace qwh::cli {
namespace {

const double thetas[] = {pi / 8, pi / 4, 3 * pi / 8};

ComplexMatrix sigma_y() { return ComplexMatrix(2, 2, {0.0, -imag_unit, imag_unit, 0.0}); }

WalkConfig localized_walk(double theta, std::size_t n, double a = 1.0, double b = 0.0) {
  std::size_t m = 4;
  while (m <= 2 * n + 2) m *= 2;
  return WalkConfig::localized(theta, m, n, m / 2, a, b);
}

ComplexVector random_state(std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed);
  return haar_random_state(dim, rng);
}

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed);
  ComplexMatrix a(dim, dim);
  for (auto& z : a.entries()) z = rng.complex_normal();
  return a + a.adjoint();
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  const auto es = hermitian_eig(random_hermitian(dim, seed));
  std::vector<Complex> phases;
  for (const double v : es.values) phases.push_back(std::polar(1.0, v));
  return es.vectors * ComplexMatrix::diagonal(phases) * es.vectors.adjoint();
}

GramMatrix checked_gram(const HistoryState& h, const VerifyOptions& o) {
  auto g = gram_matrix(h);
  if (o.gram_perturbation != 0.0 && g.size() > 1) g.entries(0, 1) += o.gram_perturbation;
  return g;
}

// walk --------------------------------------------------------------------

double uk_reflection(const VerifyOptions&) {
  double r = 0.0;
  const std::size_t m = 16;
  for (const double theta : {0.3, pi / 4, 1.2})
    for (std::size_t k = 0; k < m; ++k) {
      const auto lhs = uk_matrix((m - k) % m, m, theta);
      const auto rhs = Complex(-1.0) * (sigma_y() * uk_matrix(k, m, theta) * sigma_y());
      r = std::max(r, (lhs - rhs).max_abs());
    }
  return r;
}

double uk_half_shift(const VerifyOptions&) {
  double r = 0.0;
  const std::size_t m = 16;
  for (const double theta : {0.3, pi / 4, 1.2})
    for (std::size_t k = 0; k < m; ++k)
      r = std::max(r, (uk_matrix((k + m / 2) % m, m, theta) + uk_matrix(k, m, theta)).max_abs());
  return r;
}

double mode_conjugation(const VerifyOptions&) {
  double r = 0.0;
  const std::size_t m = 20;
  for (const double theta : {0.3, 0.9, 1.4})
    for (std::size_t k = 1; k < m; ++k) {
      const auto a = momentum_mode(k, m, theta), b = momentum_mode(m - k, m, theta);
      r = std::max({r, std::abs(b.lambda_plus - std::conj(a.lambda_plus)),
                    std::abs(b.lambda_minus - std::conj(a.lambda_minus))});
      for (int i = 0; i < 2; ++i)
        r = std::max({r, std::abs(b.s_plus[i] - std::conj(a.s_plus[i])),
                      std::abs(b.s_minus[i] - std::conj(a.s_minus[i]))});
    }
  return r;
}

double det_minus_one(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : {0.0, 0.4, pi / 2})
    for (std::size_t k = 0; k < 12; ++k) {
      const auto u = uk_matrix(k, 12, theta);
      r = std::max(r, std::abs(u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0) + 1.0));
    }
  return r;
}

double norm_preservation(const VerifyOptions&) {
  WalkConfig c;
  c.theta = 0.7;
  c.lattice_size = 32;
  c.psi0 = random_state(32, 5);
  c.alpha = std::sqrt(0.3);
  c.beta = Complex(0.0, std::sqrt(0.7));
  double r = 0.0;
  for (long n = 0; n <= 60; n += 3) r = std::max(r, std::abs(norm(evolve(c, n).amplitudes) - 1.0));
  return r;
}

double odd_overlaps(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas) {
    const auto g = gram_matrix(build_history(localized_walk(theta, 30)));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); j += 2) r = std::max(r, std::abs(g.entries(i, j)));
  }
  return r;
}

double momentum_vs_position(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas) {
    const auto c = localized_walk(theta, 24, 0.6, 0.8);
    auto s = initial_state(c);
    for (long n = 1; n < 24; ++n) {
      s = step_position(s, theta);
      r = std::max(r, max_abs_difference(s.amplitudes, evolve(c, n).amplitudes));
    }
  }
  return r;
}

// history -----------------------------------------------------------------

double gram_hermiticity(const VerifyOptions& o) {
  double r = 0.0;
  for (const double theta : thetas) r = std::max(r, hermiticity_defect(checked_gram(build_history(localized_walk(theta, 16)), o).entries));
  return r;
}

double dual_route_spectra(const VerifyOptions& o) {
  double r = 0.0;
  for (const double theta : thetas) {
    const auto h = build_history(localized_walk(theta, 12, 0.6, 0.8));
    const auto clock_side = entanglement_spectrum(checked_gram(h, o));
    const auto system_side = schmidt_modes(h).spectrum;
    for (std::size_t i = 0; i < clock_side.size(); ++i) r = std::max(r, std::abs(clock_side[i] - system_side[i]));
  }
  return r;
}

double matrix_element_identity(const VerifyOptions&) {
  const auto h = build_history(localized_walk(0.5, 6, 0.6, 0.8));
  const auto n = h.clock_size();
  const auto o = random_hermitian(h.system_dim(), 17);
  const auto psi = h.flattened();
  double r = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Complex lhs = 0.0;
      for (std::size_t i = 0; i < h.system_dim(); ++i)
        for (std::size_t j = 0; j < h.system_dim(); ++j)
          lhs += std::conj(psi[i * n + a]) * o(i, j) * psi[j * n + b];
      const Complex rhs = inner(h[a].amplitudes, o * h[b].amplitudes);
      r = std::max(r, std::abs(double(n) * lhs - rhs));
    }
  return r;
}

double partial_sum_form(const VerifyOptions& o) {
  double r = 0.0;
  for (const double theta : thetas)
    for (const std::size_t n : {5u, 20u}) {
      const auto g = checked_gram(build_history(localized_walk(theta, n)), o);
      r = std::max(r, std::abs(e2_double_sum(g) - e2_partial_sum(g)));
    }
  return r;
}

double theta_monotonicity(const VerifyOptions&) {
  double r = 0.0;
  for (const std::size_t n : {10u, 20u}) {
    double previous = std::numeric_limits<double>::infinity();
    for (const double theta : linspace(0.0, pi / 2, 10)) {
      const auto e = system_time_entanglement(build_history(localized_walk(theta, n)), EntropyKind::quadratic);
      r = std::max(r, e - previous);
      previous = e;
    }
  }
  return std::max(r, 0.0);
}

double half_pi_cap(const VerifyOptions&) {
  double r = 0.0;
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto h = build_history(localized_walk(pi / 2, n));
    r = std::max({r, system_time_entanglement(h, EntropyKind::von_neumann) - 1.0,
                  system_time_entanglement(h, EntropyKind::quadratic) - 0.5});
  }
  return std::max(r, 0.0);
}

double timeless_equation(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas)
    for (const std::size_t n : {4u, 16u}) r = std::max(r, generator_check(build_history(localized_walk(theta, n)), theta));
  return r;
}

// analytic ----------------------------------------------------------------

double route_equivalence(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas) {
    const auto c = WalkConfig::localized(theta, 256, 1, 128);
    const double u = std::cos(theta) * std::cos(theta);
    for (int n = 0; n <= 50; ++n)
      r = std::max(r, std::abs(overlap_momentum(c, 2 * n) - jacobi_overlap(n, u)));
  }
  return r;
}

double spin_independence(const VerifyOptions&) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::pair<double, double> spins[] = {{1, 0}, {0, 1}, {s, s}, {std::cos(1.0), std::sin(1.0)}};
  double r = 0.0;
  for (const double theta : thetas) {
    std::vector<std::vector<double>> rows;
    for (const auto& [a, b] : spins) {
      const auto c = localized_walk(theta, 16, a, b);
      std::vector<double> row;
      for (long n = 0; n < 16; ++n) {
        const auto z = overlap_momentum(c, n);
        row.push_back(z.real());
        row.push_back(z.imag());
      }
      const auto h = build_history(c);
      for (auto kind : {EntropyKind::von_neumann, EntropyKind::quadratic, EntropyKind::renyi2})
        row.push_back(system_time_entanglement(h, kind));
      rows.push_back(std::move(row));
    }
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i) r = std::max(r, std::abs(row[i] - rows.front()[i]));
  }
  return r;
}

double trace_identity(const VerifyOptions&) {
  const std::size_t m = 8;
  double r = 0.0;
  for (const double theta : {0.6, pi / 4}) {
    ComplexMatrix u(2 * m, 2 * m);
    for (std::size_t j = 0; j < 2 * m; ++j) {
      SystemState e{Basis::position, ComplexVector(2 * m)};
      e.amplitudes[j] = 1.0;
      const auto col = step_position(e, theta);
      for (std::size_t i = 0; i < 2 * m; ++i) u(i, j) = col.amplitudes[i];
    }
    const auto c = WalkConfig::localized(theta, m, 1, 0);
    auto power = ComplexMatrix::identity(2 * m);
    for (long n = 0; n <= 12; ++n) {
      r = std::max(r, std::abs(power.trace() / double(2 * m) - overlap_momentum(c, n)));
      power = u * power;
    }
  }
  return r;
}

// Both sides sum alternating terms of size up to C(n,j) C(n+j-1,j) u^j, so
// the grid stays where that is small enough for 1e-12 to be meaningful.
double hypergeometric_identity(const VerifyOptions&) {
  double r = 0.0;
  for (int n = 0; n <= 12; ++n)
    for (const double u : linspace(0.0, n <= 6 ? 1.0 : 0.25, 8))
      r = std::max(r, std::abs(jacobi_overlap_hypergeometric(n, u) - jacobi_overlap_series(n, u)));
  return r;
}

double parity_vs_localized(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas) {
    const auto p = localized_profile(256, theta);
    for (const std::size_t n : {10u, 50u})
      r = std::max(r, std::abs(e2_closed_parity(p.c_abs2, p.omega, n) - e2_closed_localized(theta, n)));
  }
  return r;
}

// opent -------------------------------------------------------------------

double local_unitary_invariance(const VerifyOptions&) {
  const std::size_t ds = 3, dt = 2;
  BipartiteOperator op{ds, dt, random_unitary(ds * dt, 3)};
  const auto dressed = kron(random_unitary(ds, 4), random_unitary(dt, 5)) * op.matrix *
                       kron(random_unitary(ds, 6), random_unitary(dt, 7));
  const auto a = operator_schmidt(op).spectrum;
  const auto b = operator_schmidt(BipartiteOperator{ds, dt, dressed}).spectrum;
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

double weight_normalization(const VerifyOptions&) {
  auto defect = [](const OperatorSchmidt& s) {
    double sum = 0.0;
    for (const double v : s.singular_values) sum += v * v;
    return std::abs(sum - 1.0);
  };
  double r = 0.0;
  for (const double theta : thetas) {
    r = std::max(r, defect(operator_schmidt(un_operator(theta, 16, 7))));
    r = std::max(r, defect(operator_schmidt(build_Ws(theta, 16, 8))));
    r = std::max(r, defect(operator_schmidt(build_W(localized_walk(theta, 4)))));
  }
  return r;
}

double rank_three_span(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : linspace(0.0, pi / 2, 10)) {
    for (long n = 0; n <= 40; ++n) r = std::max(r, operator_schmidt(un_operator(theta, 16, n)).singular_values[3]);
    for (const std::size_t n : {8u, 40u}) r = std::max(r, operator_schmidt(build_Ws(theta, 16, n)).singular_values[3]);
  }
  return r;
}

double w_matches_history(const VerifyOptions&) {
  double r = 0.0;
  for (const double theta : thetas)
    for (const std::size_t n : {4u, 8u, 16u}) {
      const auto c = localized_walk(theta, n);
      const auto w = build_W(c);
      const auto h = build_history(c);
      for (auto kind : {EntropyKind::von_neumann, EntropyKind::quadratic, EntropyKind::renyi2})
        r = std::max(r, std::abs(op_entanglement(w, kind) - system_time_entanglement(h, kind)));
    }
  return r;
}

double haar_bloch_mean(const VerifyOptions&) {
  CounterRng rng(2024);
  double x = 0.0, y = 0.0, z = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto s = haar_random_state(2, rng);
    const Complex c = std::conj(s[0]) * s[1];
    x += 2 * c.real();
    y += 2 * c.imag();
    z += std::norm(s[0]) - std::norm(s[1]);
  }
  return std::sqrt(x * x + y * y + z * z) / n;
}

}  // namespace

const std::vector<RegisteredCheck>& check_registry() {
  static const std::vector<RegisteredCheck> registry = {
      {"walk", "uk_reflection", 1e-12, uk_reflection},
      {"walk", "uk_half_shift", 1e-12, uk_half_shift},
      {"walk", "mode_conjugation", 1e-12, mode_conjugation},
      {"walk", "det_minus_one", 1e-12, det_minus_one},
      {"walk", "norm_preservation", 1e-12, norm_preservation},
      {"walk", "odd_overlaps_vanish", 1e-12, odd_overlaps},
      {"walk", "momentum_vs_position", 1e-10, momentum_vs_position},
      {"history", "gram_hermiticity", 1e-10, gram_hermiticity},
      {"history", "dual_route_spectra", 1e-10, dual_route_spectra},
      {"history", "matrix_element_identity", 1e-10, matrix_element_identity},
      {"history", "partial_sum_form", 1e-10, partial_sum_form},
      {"history", "theta_monotonicity", 1e-12, theta_monotonicity},
      {"history", "half_pi_cap", 1e-12, half_pi_cap},
      {"history", "timeless_equation", 1e-10, timeless_equation},
      {"analytic", "route_equivalence", 1e-9, route_equivalence},
      {"analytic", "spin_independence", 1e-10, spin_independence},
      {"analytic", "trace_identity", 1e-10, trace_identity},
      {"analytic", "hypergeometric_identity", 1e-12, hypergeometric_identity},
      {"analytic", "parity_vs_localized", 1e-10, parity_vs_localized},
      {"opent", "local_unitary_invariance", 1e-10, local_unitary_invariance},
      {"opent", "weight_normalization", 1e-10, weight_normalization},
      {"opent", "rank_three_span", 1e-10, rank_three_span},
      {"opent", "w_matches_history", 1e-9, w_matches_history},
      {"opent", "haar_bloch_mean", 0.05, haar_bloch_mean},
  };
  return registry;
}

std::vector<std::string> verify_suites() { return {"walk", "history", "analytic", "opent"}; }

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  const auto suites = verify_suites();
  if (options.suite != "all" && std::find(suites.begin(), suites.end(), options.suite) == suites.end())
    throw std::invalid_argument("unknown suite '" + options.suite + "'");
  for (const auto& [name, value] : options.tolerances) {
    const auto& reg = check_registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const RegisteredCheck& c) { return c.name == name; }))
      throw std::invalid_argument("no check named '" + name + "'");
    if (!(value >= 0.0)) throw std::invalid_argument("tolerance for '" + name + "' must be non-negative");
  }

  std::vector<CheckResult> out;
  for (const auto& check : check_registry()) {
    if (options.suite != "all" && check.suite != options.suite) continue;
    CheckResult r{check.suite, check.name, 0.0, check.tolerance, false};
    if (const auto it = options.tolerances.find(check.name); it != options.tolerances.end()) r.tolerance = it->second;
    try {
      r.residual = check.residual(options);
    } catch (const std::exception&) {
      r.residual = std::numeric_limits<double>::infinity();
    }
    r.passed = std::isfinite(r.residual) && r.residual <= r.tolerance;
    out.push_back(std::move(r));
  }
  return out;
}

CsvTable verify_report(const std::vector<CheckResult>& results, const VerifyOptions& options) {
  CsvTable t;
  t.metadata.emplace_back("qwh", QWH_VERSION);
  t.metadata.emplace_back("subcommand", "verify");
  t.metadata.emplace_back("suite", options.suite);
  t.metadata.emplace_back("gram_perturbation", format_double(options.gram_perturbation));
  for (const auto& [name, value] : options.tolerances) t.metadata.emplace_back("tolerance." + name, format_double(value));
  t.columns = {"suite", "check", "residual", "tolerance", "status"};
  for (const auto& r : results)
    t.add_row({r.suite, r.name, r.residual == std::numeric_limits<double>::infinity() ? "inf" : format_double(r.residual),
               format_double(r.tolerance), r.passed ? "pass" : "fail"});
  return t;
}

}  // namespace qwh::cli
