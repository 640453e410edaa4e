#include "qwh_cli/run_spec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qwh_cli/csv.hpp"

namespace qwh::cli {

std::string_view to_string(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::walk: return "walk";
    case Subcommand::history: return "history";
    case Subcommand::spectrum: return "spectrum";
    case Subcommand::opent: return "opent";
    case Subcommand::figure: return "figure";
    case Subcommand::circuit: return "circuit";
    case Subcommand::verify: return "verify";
  }
  return "?";
}

void RunSpec::validate() const {
  for (const double t : theta)
    if (!(t >= 0.0 && t <= pi / 2 + 1e-15)) throw std::invalid_argument("theta must lie in [0, pi/2]");
  if (clock_size && *clock_size == 0) throw std::invalid_argument("N must be at least 1");
  if (lattice_size && (*lattice_size < 2 || *lattice_size % 2 != 0))
    throw std::invalid_argument("M must be even and at least 2");
  if (x0 && lattice_size && *x0 >= *lattice_size) throw std::invalid_argument("x0 must be below M");
  normalized_spin(alpha, beta);
  if (samples != 0 && samples < 100) throw std::invalid_argument("samples must be 0 or at least 100");
}

std::vector<std::pair<std::string, std::string>> RunSpec::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("subcommand", std::string(to_string(subcommand)));
  if (!target.empty()) out.emplace_back("target", target);
  std::string th;
  for (std::size_t i = 0; i < theta.size(); ++i) th += (i ? ";" : "") + format_double(theta[i]);
  out.emplace_back("theta", theta.empty() ? "default" : th);
  if (!theta_text.empty()) out.emplace_back("theta_text", theta_text);
  out.emplace_back("N", clock_size ? format_count(*clock_size) : "default");
  out.emplace_back("M", lattice_size ? format_count(*lattice_size) : "default");
  out.emplace_back("x0", x0 ? format_count(*x0) : "default");
  out.emplace_back("spin", format_double(alpha) + ";" + format_double(beta));
  out.emplace_back("entropy", std::string(qwh::to_string(entropy)));
  out.emplace_back("seed", std::to_string(seed));
  out.emplace_back("samples", format_count(samples));
  return out;
}

std::size_t default_lattice_size(std::size_t clock_size) {
  std::size_t m = 2;
  while (m <= 2 * clock_size + 2) m *= 2;
  return m;
}

std::pair<double, double> normalized_spin(double alpha, double beta) {
  const double r = std::hypot(alpha, beta);
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("spin (a, b) must be finite and nonzero");
  return {alpha / r, beta / r};
}

WalkConfig make_config(const RunSpec& spec, double theta, std::size_t clock_size) {
  const auto m = spec.lattice_size.value_or(default_lattice_size(clock_size));
  const auto x0 = spec.x0.value_or(m / 2);
  if (x0 >= m) throw std::invalid_argument("x0 must be below M");
  const auto [a, b] = normalized_spin(spec.alpha, spec.beta);
  auto config = WalkConfig::localized(theta, m, clock_size, x0, a, b);
  config.validate();
  return config;
}

std::size_t worker_count(const RunSpec& spec, std::size_t tasks) {
  std::size_t n = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

}  // namespace qwh::cli
