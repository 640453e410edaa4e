#include "qwh_cli/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qwh/history.hpp"
#include "qwh_cli/csv.hpp"

namespace qwh::cli {
namespace {

// "a0,a1" for formal arguments, "q[0],q[1]" for register operands
std::string join_qubits(const std::vector<std::size_t>& qs, bool formal) {
  std::string out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) out += ',';
    out += formal ? "a" + std::to_string(qs[i]) : "q[" + std::to_string(qs[i]) + "]";
  }
  return out;
}

/// Calls fn(sub) for every assignment of the qubits outside `qubits`, where
/// sub holds the full-register indices of the 2^|qubits| sub-basis states
/// (first listed qubit most significant).
template <class Fn>
void for_each_slice(std::size_t qubit_count, const std::vector<std::size_t>& qubits, Fn&& fn) {
  const std::size_t dim = std::size_t(1) << qubit_count;
  const std::size_t sub_dim = std::size_t(1) << qubits.size();
  std::vector<std::size_t> offset(sub_dim, 0);
  std::size_t mask = 0;
  for (std::size_t j = 0; j < sub_dim; ++j)
    for (std::size_t b = 0; b < qubits.size(); ++b)
      if (j >> (qubits.size() - 1 - b) & 1) offset[j] |= std::size_t(1) << (qubit_count - 1 - qubits[b]);
  for (const auto q : qubits) mask |= std::size_t(1) << (qubit_count - 1 - q);
  std::vector<std::size_t> sub(sub_dim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t j = 0; j < sub_dim; ++j) sub[j] = base | offset[j];
    fn(sub);
  }
}

double number_param(const Gate& g, std::string_view key) {
  const auto v = g.param(key);
  if (!v) throw std::runtime_error(g.name + ": missing parameter " + std::string(key));
  std::size_t used = 0;
  const double x = std::stod(*v, &used);
  if (used != v->size()) throw std::runtime_error(g.name + ": bad parameter " + std::string(key));
  return x;
}

void apply_gate(const Circuit& c, const Gate& g, ComplexVector& psi) {
  const auto q = c.qubit_count();
  for (const auto b : g.qubits)
    if (b >= q) throw std::runtime_error(g.name + ": qubit " + std::to_string(b) + " out of range");
  if (g.name == "H") {
    if (g.qubits.size() != 1) throw std::runtime_error("H takes one qubit");
    const double r = 1.0 / std::sqrt(2.0);
    for_each_slice(q, g.qubits, [&](const std::vector<std::size_t>& s) {
      const Complex a = psi[s[0]], b = psi[s[1]];
      psi[s[0]] = r * (a + b);
      psi[s[1]] = r * (a - b);
    });
  } else if (g.name == "FT") {
    ComplexVector buf(std::size_t(1) << g.qubits.size());
    for_each_slice(q, g.qubits, [&](const std::vector<std::size_t>& s) {
      for (std::size_t j = 0; j < s.size(); ++j) buf[j] = psi[s[j]];
      const auto out = dft_coefficients(buf);
      for (std::size_t j = 0; j < s.size(); ++j) psi[s[j]] = out[j];
    });
  } else if (g.name == "CU_WALK") {
    const double theta = number_param(g, "theta");
    const auto n = static_cast<long>(number_param(g, "n"));
    const auto m = static_cast<std::size_t>(number_param(g, "controls"));
    if (g.qubits.size() < m + 2) throw std::runtime_error("CU_WALK: too few qubits");
    const std::size_t pos_bits = g.qubits.size() - m - 1;
    const std::size_t lattice = std::size_t(1) << pos_bits;
    if (n < 0 || std::size_t(n) >= (std::size_t(1) << m)) throw std::runtime_error("CU_WALK: n outside the clock range");
    std::vector<ComplexMatrix> blocks;
    for (std::size_t k = 0; k < lattice; ++k) blocks.push_back(uk_power(k, lattice, theta, n));
    const std::size_t stride = 2 * lattice;
    for_each_slice(q, g.qubits, [&](const std::vector<std::size_t>& s) {
      const std::size_t first = std::size_t(n) * stride;
      for (std::size_t k = 0; k < lattice; ++k) {
        const auto i0 = s[first + 2 * k], i1 = s[first + 2 * k + 1];
        const Complex a = psi[i0], b = psi[i1];
        const auto& u = blocks[k];
        psi[i0] = u(0, 0) * a + u(0, 1) * b;
        psi[i1] = u(1, 0) * a + u(1, 1) * b;
      }
    });
  } else {
    throw std::runtime_error("unknown gate " + g.name);
  }
}

}  // namespace

std::optional<std::string> Gate::param(std::string_view key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

std::size_t Circuit::count(std::string_view name) const {
  return std::size_t(std::count_if(gates.begin(), gates.end(), [&](const Gate& g) { return g.name == name; }));
}

std::size_t exact_log2(std::size_t value, const char* what) {
  if (value == 0 || (value & (value - 1)) != 0)
    throw std::domain_error(std::string(what) + " must be a power of two, got " + std::to_string(value));
  std::size_t bits = 0;
  while ((std::size_t(1) << bits) < value) ++bits;
  return bits;
}

Circuit emit_circuit(const WalkConfig& config) {
  Circuit c;
  c.clock_qubits = exact_log2(config.clock_size, "N");
  c.position_qubits = exact_log2(config.lattice_size, "M");
  if (config.psi0.size() != config.lattice_size) throw std::domain_error("psi0 length differs from M");

  const auto ck = dft_coefficients(config.psi0);
  const double flat = 1.0 / std::sqrt(double(config.lattice_size));
  const bool uniform = std::all_of(ck.begin(), ck.end(), [&](Complex z) { return std::abs(z - flat) < 1e-12; });

  std::vector<std::size_t> position, clock;
  for (std::size_t j = 0; j < c.position_qubits; ++j) position.push_back(j);
  for (std::size_t j = 0; j < c.clock_qubits; ++j) clock.push_back(c.clock_qubit(j));

  if (uniform) {
    for (const auto p : position) c.gates.push_back({"H", {p}, {}});
  } else if (!position.empty()) {
    c.gates.push_back({"FT", position, {}});
  }
  for (const auto t : clock) c.gates.push_back({"H", {t}, {}});

  std::vector<std::size_t> operands = clock;
  operands.insert(operands.end(), position.begin(), position.end());
  operands.push_back(c.spin_qubit());
  for (std::size_t n = 1; n < config.clock_size; ++n)
    c.gates.push_back({"CU_WALK",
                       operands,
                       {{"theta", format_double(config.theta)},
                        {"n", std::to_string(n)},
                        {"controls", std::to_string(c.clock_qubits)}}});
  return c;
}

void write_circuit(std::ostream& os, const Circuit& c) {
  os << "# qwh " << QWH_VERSION << " history-state circuit\n";
  os << "# registers position=" << c.position_qubits << " spin=1 clock=" << c.clock_qubits << '\n';
  os << "# output is the history state in the momentum basis\n";
  for (const auto& g : c.gates) {
    os << "GATE " << g.name;
    for (const auto q : g.qubits) os << ' ' << q;
    for (const auto& [k, v] : g.params) os << ' ' << k << '=' << v;
    os << '\n';
  }
}

Circuit parse_circuit(std::istream& is) {
  Circuit c;
  bool registers = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto where = "line " + std::to_string(lineno) + ": ";
    std::istringstream in(line);
    std::string word;
    if (!(in >> word)) continue;
    if (word == "#") {
      std::string tag;
      if (in >> tag && tag == "registers") {
        std::string field;
        while (in >> field) {
          const auto eq = field.find('=');
          if (eq == std::string::npos) throw std::runtime_error(where + "bad register field " + field);
          const auto key = field.substr(0, eq);
          const auto value = std::stoul(field.substr(eq + 1));
          if (key == "position") c.position_qubits = value;
          else if (key == "clock") c.clock_qubits = value;
          else if (key == "spin" && value != 1) throw std::runtime_error(where + "spin register must be one qubit");
        }
        registers = true;
      }
      continue;
    }
    if (word.front() == '#') continue;
    if (word != "GATE") throw std::runtime_error(where + "expected GATE");
    Gate g;
    if (!(in >> g.name)) throw std::runtime_error(where + "missing gate name");
    while (in >> word) {
      const auto eq = word.find('=');
      if (eq != std::string::npos) {
        g.params.emplace_back(word.substr(0, eq), word.substr(eq + 1));
      } else {
        if (!g.params.empty()) throw std::runtime_error(where + "qubit after parameters");
        if (word.find_first_not_of("0123456789") != std::string::npos)
          throw std::runtime_error(where + "bad qubit " + word);
        g.qubits.push_back(std::stoul(word));
      }
    }
    c.gates.push_back(std::move(g));
  }
  if (!registers) throw std::runtime_error("missing '# registers' line");
  return c;
}

void write_qasm(std::ostream& os, const Circuit& c) {
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "// q[0] is the most significant position bit; q[" << c.spin_qubit() << "] is the spin\n";
  if (c.count("FT")) {
    std::vector<std::size_t> args(c.position_qubits);
    for (std::size_t i = 0; i < args.size(); ++i) args[i] = i;
    os << "// |x> -> M^-1/2 sum_k exp(-2 pi i x k / M) |k>\n";
    os << "opaque ft " << join_qubits(args, true) << ";\n";
  }
  if (c.count("CU_WALK")) {
    std::vector<std::size_t> args(c.qubit_count());
    for (std::size_t i = 0; i < args.size(); ++i) args[i] = i;
    os << "// U^n on (position, spin) when the clock register reads n\n";
    os << "opaque cu_walk(theta, n) " << join_qubits(args, true) << ";\n";
  }
  os << "qreg q[" << c.qubit_count() << "];\n";
  for (const auto& g : c.gates) {
    if (g.name == "H") {
      os << "h q[" << g.qubits.at(0) << "];\n";
    } else if (g.name == "FT") {
      os << "ft " << join_qubits(g.qubits, false) << ";\n";
    } else if (g.name == "CU_WALK") {
      os << "cu_walk(" << g.param("theta").value_or("0") << ", " << g.param("n").value_or("0") << ") "
         << join_qubits(g.qubits, false) << ";\n";
    } else {
      throw std::runtime_error("no QASM form for gate " + g.name);
    }
  }
}

ComplexVector circuit_input(const WalkConfig& config) {
  const auto s = initial_state(config);
  const auto n = config.clock_size;
  ComplexVector out(s.amplitudes.size() * n);
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i) out[i * n] = s.amplitudes[i];
  return out;
}

ComplexVector simulate_circuit(const Circuit& circuit, std::span<const Complex> input) {
  if (input.size() != std::size_t(1) << circuit.qubit_count())
    throw std::invalid_argument("input length does not match the register");
  ComplexVector psi(input.begin(), input.end());
  for (const auto& g : circuit.gates) apply_gate(circuit, g, psi);
  return psi;
}

double circuit_fidelity(const Circuit& circuit, const WalkConfig& config) {
  const auto out = simulate_circuit(circuit, circuit_input(config));
  const auto history = build_history(config);
  const auto n = history.clock_size();
  ComplexVector expected(out.size());
  for (std::size_t t = 0; t < n; ++t) {
    const auto mom = to_momentum(history[t]);
    for (std::size_t i = 0; i < mom.amplitudes.size(); ++i)
      expected[i * n + t] = mom.amplitudes[i] / std::sqrt(double(n));
  }
  return std::abs(inner(expected, out));
}

}  // namespace qwh::cli
