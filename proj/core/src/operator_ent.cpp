#include "qwh/operator_ent.hpp"

#include <algorithm>
#include <cmath>

namespace qwh {

namespace {

constexpr double unitary_tolerance = 1e-10;
constexpr double rank_threshold = 1e-12;

double squared_sum(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v * v;
  return total;
}

// Turns singular values of the normalized coefficient matrix into weights.
SchmidtSpectrum weights_from(const std::vector<double>& singular_values) {
  const double total = squared_sum(singular_values);
  if (!(total > 0.0)) throw std::domain_error("operator Schmidt: zero operator");
  std::vector<double> weights;
  for (double s : singular_values) weights.push_back(s * s / total);
  return SchmidtSpectrum::from_values(std::move(weights));
}

}  // namespace

void BipartiteOperator::validate() const {
  const std::size_t dim = dim_s * dim_t;
  if (dim == 0 || matrix.rows() != dim || matrix.cols() != dim)
    throw std::domain_error("bipartite operator: matrix does not match dim_s * dim_t");
  if (unitary && unitarity_defect(matrix) > unitary_tolerance)
    throw std::domain_error("bipartite operator: flagged unitary but is not");
}

void ControlledOperator::validate() const {
  if (blocks.empty()) throw std::domain_error("controlled operator: no blocks");
  const std::size_t d = target_dim();
  for (const auto& block : blocks)
    if (block.rows() != d || block.cols() != d) throw std::domain_error("controlled operator: blocks differ in size");
}

BipartiteOperator ControlledOperator::to_dense() const {
  validate();
  const std::size_t dc = control_dim();
  const std::size_t db = target_dim();
  BipartiteOperator out;
  out.dim_s = control_first ? dc : db;
  out.dim_t = control_first ? db : dc;
  out.label_s = control_first ? control_label : target_label;
  out.label_t = control_first ? target_label : control_label;
  out.matrix = ComplexMatrix(dc * db, dc * db);
  for (std::size_t c = 0; c < dc; ++c)
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) {
        const std::size_t row = control_first ? c * db + i : i * dc + c;
        const std::size_t col = control_first ? c * db + j : j * dc + c;
        out.matrix(row, col) = blocks[c](i, j);
      }
  out.unitary = unitarity_defect(out.matrix) <= unitary_tolerance;
  return out;
}

ComplexVector ControlledOperator::apply(std::span<const Complex> v) const {
  validate();
  const std::size_t dc = control_dim();
  const std::size_t db = target_dim();
  if (v.size() != dc * db) throw std::invalid_argument("controlled operator: vector length mismatch");
  ComplexVector out(v.size());
  ComplexVector slice(db);
  for (std::size_t c = 0; c < dc; ++c) {
    for (std::size_t j = 0; j < db; ++j) slice[j] = v[control_first ? c * db + j : j * dc + c];
    const auto image = blocks[c] * std::span<const Complex>(slice);
    for (std::size_t i = 0; i < db; ++i) out[control_first ? c * db + i : i * dc + c] = image[i];
  }
  return out;
}

ComplexVector choi_vectorize(const ComplexMatrix& op) {
  if (!op.is_square() || op.empty()) throw std::domain_error("choi_vectorize: operator must be square");
  const double scale = 1.0 / std::sqrt(double(op.rows()));
  ComplexVector out(op.entries().begin(), op.entries().end());
  for (auto& z : out) z *= scale;
  return out;
}

ComplexVector choi_vectorize(const BipartiteOperator& op) { return choi_vectorize(op.matrix); }

OperatorSchmidt operator_schmidt(const BipartiteOperator& op) {
  const std::size_t ds = op.dim_s;
  const std::size_t dt = op.dim_t;
  if (ds * dt == 0 || op.matrix.rows() != ds * dt || op.matrix.cols() != ds * dt)
    throw std::domain_error("operator_schmidt: matrix does not match dim_s * dim_t");

  const double scale = 1.0 / std::sqrt(double(ds * dt));
  ComplexMatrix reshuffled(ds * ds, dt * dt);
  for (std::size_t a = 0; a < ds; ++a)
    for (std::size_t b = 0; b < dt; ++b)
      for (std::size_t a2 = 0; a2 < ds; ++a2)
        for (std::size_t b2 = 0; b2 < dt; ++b2)
          reshuffled(a * ds + a2, b * dt + b2) = scale * op.matrix(a * dt + b, a2 * dt + b2);

  const auto decomposition = svd(reshuffled);
  OperatorSchmidt out{weights_from(decomposition.values), 0, decomposition.values, {}, {}};
  out.rank = out.spectrum.rank(rank_threshold);
  for (std::size_t m = 0; m < decomposition.values.size(); ++m) {
    ComplexMatrix first(ds, ds);
    ComplexMatrix second(dt, dt);
    for (std::size_t a = 0; a < ds; ++a)
      for (std::size_t a2 = 0; a2 < ds; ++a2) first(a, a2) = std::sqrt(double(ds)) * decomposition.left(a * ds + a2, m);
    for (std::size_t b = 0; b < dt; ++b)
      for (std::size_t b2 = 0; b2 < dt; ++b2)
        second(b, b2) = std::sqrt(double(dt)) * std::conj(decomposition.right(b * dt + b2, m));
    out.first_factors.push_back(std::move(first));
    out.second_factors.push_back(std::move(second));
  }
  return out;
}

OperatorSchmidt operator_schmidt(const ControlledOperator& op) {
  op.validate();
  const std::size_t dc = op.control_dim();
  const std::size_t db = op.target_dim();
  const double scale = 1.0 / std::sqrt(double(dc * db));
  ComplexMatrix coefficients(dc, db * db);
  for (std::size_t c = 0; c < dc; ++c)
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) coefficients(c, i * db + j) = scale * op.blocks[c](i, j);

  const auto decomposition = svd(coefficients);
  OperatorSchmidt out{weights_from(decomposition.values), 0, decomposition.values, {}, {}};
  out.rank = out.spectrum.rank(rank_threshold);
  for (std::size_t m = 0; m < decomposition.values.size(); ++m) {
    ComplexMatrix first(dc, dc);
    ComplexMatrix second(db, db);
    for (std::size_t c = 0; c < dc; ++c) first(c, c) = std::sqrt(double(dc)) * decomposition.left(c, m);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j)
        second(i, j) = std::sqrt(double(db)) * std::conj(decomposition.right(i * db + j, m));
    out.first_factors.push_back(std::move(first));
    out.second_factors.push_back(std::move(second));
  }
  return out;
}

ComplexMatrix block_gram(const ControlledOperator& op) {
  op.validate();
  const std::size_t dc = op.control_dim();
  const double db = double(op.target_dim());
  ComplexMatrix g(dc, dc);
  for (std::size_t a = 0; a < dc; ++a)
    for (std::size_t b = a; b < dc; ++b) {
      const auto x = op.blocks[a].entries();
      const auto y = op.blocks[b].entries();
      Complex total = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) total += std::conj(x[i]) * y[i];
      g(a, b) = total / db;
      g(b, a) = std::conj(g(a, b));
    }
  return g;
}

SchmidtSpectrum controlled_spectrum_gram(const ControlledOperator& op) {
  auto g = block_gram(op);
  const double total = g.trace().real();
  if (!(total > 0.0)) throw std::domain_error("controlled_spectrum_gram: zero operator");
  return SchmidtSpectrum::from_values(hermitian_eig((1.0 / total) * g).values, 1e-9);
}

double scaled_entropy(const SchmidtSpectrum& spectrum, EntropyKind kind, EntropyScale scale) {
  if (scale == EntropyScale::unit) return entropy(spectrum, kind);
  if (kind != EntropyKind::quadratic) throw std::invalid_argument("spin rescaling applies to the quadratic entropy only");
  return 2.0 * entropy(spectrum, kind);
}

double op_entanglement(const BipartiteOperator& op, EntropyKind kind, EntropyScale scale) {
  if (!op.unitary || unitarity_defect(op.matrix) > unitary_tolerance)
    throw std::domain_error("op_entanglement: operator is not unitary");
  return scaled_entropy(operator_schmidt(op).spectrum, kind, scale);
}

double op_entanglement(const ControlledOperator& op, EntropyKind kind, EntropyScale scale) {
  op.validate();
  for (const auto& block : op.blocks)
    if (unitarity_defect(block) > unitary_tolerance) throw std::domain_error("op_entanglement: block is not unitary");
  return scaled_entropy(operator_schmidt(op).spectrum, kind, scale);
}

ControlledOperator build_W(const WalkConfig& config) {
  config.validate();
  const std::size_t dim = 2 * config.lattice_size;
  std::vector<SystemState> columns;
  columns.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    SystemState e{Basis::position, ComplexVector(dim)};
    e.amplitudes[j] = 1.0;
    columns.push_back(std::move(e));
  }
  ControlledOperator out;
  out.control_first = false;
  out.control_label = "clock";
  out.target_label = "system";
  for (std::size_t n = 0; n < config.clock_size; ++n) {
    if (n > 0)
      for (auto& column : columns) column = step_position(column, config.theta);
    ComplexMatrix block(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) block.set_column(j, columns[j].amplitudes);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

ControlledOperator un_operator(double theta, std::size_t lattice_size, long n) {
  if (lattice_size < 4) throw std::domain_error("un_operator: M must be at least 4");
  if (n < 0) throw std::domain_error("un_operator: negative power");
  ControlledOperator out;
  out.control_label = "momentum";
  out.target_label = "spin";
  for (const auto& mode : momentum_modes(lattice_size, theta)) out.blocks.push_back(uk_power(mode, n));
  return out;
}

ComplexMatrix sigma_k_matrix(std::size_t k, std::size_t lattice_size, double theta) {
  const auto mode = momentum_mode(k, lattice_size, theta);
  const double cos_omega = std::cos(mode.omega);
  if (std::abs(cos_omega) <= 1e-9) throw DegenerateMode("sigma_k_matrix: cos(omega_k) vanishes");
  const double a = std::cos(mode.phi) / cos_omega;
  const double b = std::sin(mode.phi) * std::sin(theta) / cos_omega;
  const auto coin = coin_matrix(theta);
  const ComplexMatrix sigma_y(2, 2, {0.0, -imag_unit, imag_unit, 0.0});
  return Complex(a) * coin + Complex(b) * sigma_y;
}

ControlledOperator build_Ws(double theta, std::size_t lattice_size, std::size_t clock_size) {
  if (lattice_size < 2 || lattice_size % 2 != 0) throw std::domain_error("build_Ws: M must be even and at least 2");
  if (clock_size < 1) throw std::domain_error("build_Ws: N must be at least 1");
  ControlledOperator out;
  out.control_label = "momentum-clock";
  out.target_label = "spin";
  for (const auto& mode : momentum_modes(lattice_size, theta))
    for (std::size_t n = 0; n < clock_size; ++n) out.blocks.push_back(uk_power(mode, long(n)));
  return out;
}

namespace {

MonteCarloEstimate summarize(const std::vector<double>& values, double closed_form) {
  MonteCarloEstimate out;
  out.samples = values.size();
  out.closed_form = closed_form;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / double(values.size());
  double spread = 0.0;
  for (double v : values) spread += (v - out.mean) * (v - out.mean);
  if (values.size() > 1) out.standard_error = std::sqrt(spread / double(values.size() - 1) / double(values.size()));
  return out;
}

}  // namespace

MonteCarloEstimate entangling_power(const ControlledOperator& op, std::size_t samples, std::uint64_t seed,
                                    EntropyScale scale) {
  if (samples < 2) throw std::domain_error("entangling_power: need at least two samples");
  op.validate();
  const std::size_t dc = op.control_dim();
  const std::size_t db = op.target_dim();
  const double factor = scale == EntropyScale::spin_rescaled ? 2.0 : 1.0;
  CounterRng rng(seed);
  std::vector<double> values;
  values.reserve(samples);
  std::vector<ComplexVector> images(dc);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto psi = haar_random_state(db, rng);
    for (std::size_t c = 0; c < dc; ++c) images[c] = op.blocks[c] * std::span<const Complex>(psi);
    double purity = 0.0;
    for (std::size_t a = 0; a < dc; ++a) {
      purity += std::pow(norm(images[a]), 4);
      for (std::size_t b = a + 1; b < dc; ++b) purity += 2.0 * std::norm(inner(images[a], images[b]));
    }
    values.push_back(factor * (1.0 - purity / double(dc * dc)));
  }
  const double closed = double(db) / double(db + 1) *
                        scaled_entropy(controlled_spectrum_gram(op), EntropyKind::quadratic, scale);
  return summarize(values, closed);
}

MonteCarloEstimate entangling_power_check(const WalkConfig& config, std::size_t samples, std::uint64_t seed) {
  return entangling_power(build_W(config), samples, seed);
}

namespace {

double spin_purity_deficit(const SystemState& state) {
  Complex uu = 0.0, ud = 0.0, dd = 0.0;
  for (std::size_t x = 0; x < state.lattice_size(); ++x) {
    const Complex up = state.amplitudes[2 * x];
    const Complex down = state.amplitudes[2 * x + 1];
    uu += up * std::conj(up);
    ud += up * std::conj(down);
    dd += down * std::conj(down);
  }
  const double purity = std::norm(uu) + std::norm(dd) + 2.0 * std::norm(ud);
  return 2.0 * (1.0 - purity);
}

}  // namespace

double spin_position_entanglement(const WalkConfig& config, long n) {
  if (!config.localized_site()) throw std::domain_error("spin_position_entanglement: psi0 must be localized");
  return spin_purity_deficit(evolve(config, n, Basis::momentum));
}

MonteCarloEstimate spin_average_entanglement(double theta, std::size_t lattice_size, std::size_t x0, long n,
                                             std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::domain_error("spin_average_entanglement: need at least two samples");
  auto config = WalkConfig::localized(theta, lattice_size, 1, x0);
  config.validate();
  const auto modes = momentum_modes(lattice_size, theta);
  CounterRng rng(seed);
  std::vector<double> values;
  values.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto spin = haar_random_state(2, rng);
    config.alpha = spin[0];
    config.beta = spin[1];
    values.push_back(spin_purity_deficit(evolve(config, modes, n, Basis::momentum)));
  }
  const double closed = 2.0 / 3.0 *
                        scaled_entropy(controlled_spectrum_gram(un_operator(theta, lattice_size, n)),
                                       EntropyKind::quadratic, EntropyScale::spin_rescaled);
  return summarize(values, closed);
}

}  // namespace qwh
