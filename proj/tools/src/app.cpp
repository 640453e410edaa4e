#include "qwh_cli/app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "qwh_cli/angles.hpp"
#include "qwh_cli/circuit.hpp"
#include "qwh_cli/commands.hpp"
#include "qwh_cli/figures.hpp"
#include "qwh_cli/verify.hpp"

namespace qwh::cli {
namespace {

struct RawOptions {
  std::string theta;
  std::size_t n = 0, m = 0, x0 = 0;
  std::string spin;
  std::string entropy = "quad";
  std::string out;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::size_t threads = 0;
  std::string target;
};

struct Bound {
  CLI::Option* n = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* x0 = nullptr;
};

Bound add_walk_options(CLI::App* sub, RawOptions& raw, const char* n_flag, const char* n_help) {
  Bound b;
  sub->add_option("--theta", raw.theta, "coin angle(s): pi/4, 0,pi/8 or 0:pi/20:pi/2");
  b.n = sub->add_option(n_flag, raw.n, n_help)->check(CLI::PositiveNumber);
  b.m = sub->add_option("--m", raw.m, "lattice size M (default: smallest power of two above 2N+2)");
  b.x0 = sub->add_option("--x0", raw.x0, "initial site (default M/2)");
  sub->add_option("--spin", raw.spin, "real initial spin a,b (normalized), default 1,0");
  sub->add_option("--out", raw.out, "output path, '-' for stdout");
  return b;
}

RunSpec to_spec(Subcommand sub, const RawOptions& raw, const Bound& b) {
  RunSpec s;
  s.subcommand = sub;
  if (!raw.theta.empty()) {
    s.theta = parse_angle_list(raw.theta);
    s.theta_text = raw.theta;
  }
  if (b.n && b.n->count()) s.clock_size = raw.n;
  if (b.m && b.m->count()) s.lattice_size = raw.m;
  if (b.x0 && b.x0->count()) s.x0 = raw.x0;
  if (!raw.spin.empty()) {
    const auto comma = raw.spin.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--spin expects a,b");
    s.alpha = std::stod(raw.spin.substr(0, comma));
    s.beta = std::stod(raw.spin.substr(comma + 1));
  }
  s.entropy = parse_entropy_kind(raw.entropy);
  s.out = raw.out;
  s.seed = raw.seed;
  s.samples = raw.samples;
  s.threads = raw.threads;
  s.target = raw.target;
  s.validate();
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum walk history states: simulation, closed forms and entanglement"};
  app.set_version_flag("--version", QWH_VERSION);
  app.require_subcommand(1);

  RawOptions raw;
  CircuitOptions circuit_opts;
  VerifyOptions verify_opts;
  std::vector<std::string> tolerance_pairs;
  std::string qasm_path;

  auto* walk = app.add_subcommand("walk", "moments of |Psi_n> for n < N");
  const auto walk_b = add_walk_options(walk, raw, "--steps", "number of clock times N (default 20)");

  auto* history = app.add_subcommand("history", "system-time entanglement of the history state");
  const auto history_b = add_walk_options(history, raw, "--steps", "number of clock times N (default 16)");
  history->add_option("--entropy", raw.entropy, "vn, quad or renyi2")->check(CLI::IsMember({"vn", "quad", "renyi2"}));

  auto* spectrum = app.add_subcommand("spectrum", "entanglement spectrum of the history state");
  const auto spectrum_b = add_walk_options(spectrum, raw, "--steps", "number of clock times N (default 40)");

  auto* opent = app.add_subcommand("opent", "operator entanglement of U^n, W or W_s");
  const auto opent_b = add_walk_options(opent, raw, "--n", "power n for un, clock size N for w and ws (default 8)");
  opent->add_option("--operator", raw.target, "un, w or ws")->check(CLI::IsMember({"un", "w", "ws"}));
  opent->add_option("--samples", raw.samples, "Haar samples for the entangling-power check (0: skip)");
  opent->add_option("--seed", raw.seed, "random seed");

  auto* figure = app.add_subcommand("figure", "figure data as CSV");
  figure->add_option("id", raw.target, "fig2 .. fig7")->required();
  const auto figure_b = add_walk_options(figure, raw, "--n-max", "largest N (fig2, fig3, fig4, fig7) or n (fig5, fig6)");
  figure->add_option("--threads", raw.threads, "worker threads (default: all cores)");

  auto* circuit = app.add_subcommand("circuit", "gate list preparing the history state");
  Bound circuit_b;
  circuit->add_option("--theta", raw.theta, "coin angle (default pi/4)");
  circuit_b.n = circuit->add_option("--n", raw.n, "clock size N, a power of two")->required();
  circuit_b.m = circuit->add_option("--m", raw.m, "lattice size M, a power of two")->required();
  circuit_b.x0 = circuit->add_option("--x0", raw.x0, "initial site when not --localized (default M/2)");
  circuit->add_option("--spin", raw.spin, "real initial spin a,b");
  circuit->add_flag("--localized", circuit_opts.localized, "particle at x = 0, Hadamards instead of FT");
  circuit->add_option("--out", raw.out, "gate list path, '-' for stdout")->required();
  circuit->add_option("--qasm", circuit_opts.qasm_path, "also write OpenQASM 2.0");
  circuit->add_flag("--check", circuit_opts.check, "re-simulate and report the fidelity");

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("--suite", verify_opts.suite, "all, walk, history, analytic or opent")
      ->check(CLI::IsMember({"all", "walk", "history", "analytic", "opent"}));
  verify->add_option("--inject-gram-perturbation", verify_opts.gram_perturbation, "add this to G(0,1) in Gram checks");
  verify->add_option("--tolerance", tolerance_pairs, "override a tolerance, check=value (repeatable)");
  verify->add_option("--out", raw.out, "report path, '-' for stdout");

  std::vector<std::string> storage{"qwh"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    bool ok = true;
    if (walk->parsed()) {
      write_output(raw.out, walk_table(to_spec(Subcommand::walk, raw, walk_b), ok), out);
    } else if (history->parsed()) {
      write_output(raw.out, history_table(to_spec(Subcommand::history, raw, history_b), ok), out);
    } else if (spectrum->parsed()) {
      write_output(raw.out, spectrum_table(to_spec(Subcommand::spectrum, raw, spectrum_b), ok), out);
    } else if (opent->parsed()) {
      write_output(raw.out, opent_table(to_spec(Subcommand::opent, raw, opent_b), ok), out);
    } else if (figure->parsed()) {
      const auto id = parse_figure_id(raw.target);
      write_output(raw.out, run_figure(id, to_spec(Subcommand::figure, raw, figure_b)), out);
    } else if (circuit->parsed()) {
      const auto spec = to_spec(Subcommand::circuit, raw, circuit_b);
      const auto config = circuit_config(spec, circuit_opts);
      const auto c = emit_circuit(config);
      if (raw.out == "-") {
        write_circuit(out, c);
      } else {
        std::ofstream os(raw.out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + raw.out + "' for writing");
        write_circuit(os, c);
      }
      if (!circuit_opts.qasm_path.empty()) {
        std::ofstream os(circuit_opts.qasm_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + circuit_opts.qasm_path + "' for writing");
        write_qasm(os, c);
      }
      if (circuit_opts.check) {
        const double f = circuit_fidelity(c, config);
        err << "fidelity " << format_double(f) << '\n';
        if (!(f > 1.0 - 1e-9)) ok = false;
      }
    } else if (verify->parsed()) {
      for (const auto& pair : tolerance_pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--tolerance expects check=value");
        verify_opts.tolerances[pair.substr(0, eq)] = std::stod(pair.substr(eq + 1));
      }
      const auto results = run_verify(verify_opts);
      write_output(raw.out, verify_report(results, verify_opts), out);
      for (const auto& r : results)
        if (!r.passed) ok = false;
    }
    return ok ? exit_ok : exit_invariant;
  } catch (const std::invalid_argument& e) {
    err << "qwh: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << "qwh: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::runtime_error& e) {
    err << "qwh: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "qwh: internal error: " << e.what() << '\n';
    return exit_invariant;
  }
}

}  // namespace qwh::cli
