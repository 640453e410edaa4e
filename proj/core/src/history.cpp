#include "qwh/history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwh {

namespace {

constexpr double norm_tolerance = 1e-12;
constexpr double gram_tolerance = 1e-10;
constexpr double spectrum_negative_tolerance = 1e-9;
constexpr double parity_tolerance = 1e-12;

}  // namespace

HistoryState::HistoryState(std::vector<SystemState> states, std::optional<double> theta)
    : states_(std::move(states)), theta_(theta) {
  if (states_.empty()) throw std::domain_error("history: at least one clock time is required");
  const std::size_t dim = states_.front().amplitudes.size();
  if (dim == 0 || dim % 2 != 0) throw std::domain_error("history: state length must be 2M");
  for (const auto& state : states_) {
    if (state.basis != Basis::position) throw std::domain_error("history: states must be in the position basis");
    if (state.amplitudes.size() != dim) throw std::domain_error("history: states differ in length");
    if (std::abs(norm(state.amplitudes) - 1.0) > norm_tolerance)
      throw std::domain_error("history: state is not normalized");
  }
}

HistoryState HistoryState::prefix(std::size_t n) const {
  if (n < 1 || n > states_.size()) throw std::domain_error("history prefix: length out of range");
  return HistoryState({states_.begin(), states_.begin() + std::ptrdiff_t(n)}, theta_);
}

ComplexVector HistoryState::flattened() const {
  const std::size_t clock = clock_size();
  const std::size_t dim = system_dim();
  const double weight = 1.0 / std::sqrt(double(clock));
  ComplexVector out(dim * clock);
  for (std::size_t n = 0; n < clock; ++n)
    for (std::size_t i = 0; i < dim; ++i) out[i * clock + n] = weight * states_[n].amplitudes[i];
  return out;
}

HistoryState build_history(const WalkConfig& config) {
  config.validate();
  std::vector<SystemState> states;
  states.reserve(config.clock_size);
  states.push_back(initial_state(config));
  for (std::size_t n = 1; n < config.clock_size; ++n) states.push_back(step_position(states.back(), config.theta));
  return HistoryState(std::move(states), config.theta);
}

double generator_check(const HistoryState& history, double theta) {
  const std::size_t clock = history.clock_size();
  // Closing block: (U^{N-1})^dag applied to the last state.
  SystemState closing = history[clock - 1];
  for (std::size_t n = 1; n < clock; ++n) closing = step_position_inverse(closing, theta);

  double total = 0.0;
  ComplexVector diff(history.system_dim());
  auto accumulate = [&](const SystemState& image, const SystemState& target) {
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = image.amplitudes[i] - target.amplitudes[i];
    const double d = norm(diff);
    total += d * d;
  };
  accumulate(closing, history[0]);
  for (std::size_t n = 0; n + 1 < clock; ++n) accumulate(step_position(history[n], theta), history[n + 1]);
  return std::sqrt(total / double(clock));
}

double time_average(const HistoryState& history, const ComplexMatrix& observable) {
  if (!observable.is_square() || observable.rows() != history.system_dim())
    throw std::invalid_argument("time_average: observable dimension mismatch");
  if (hermiticity_defect(observable) > 1e-10 * std::max(1.0, observable.max_abs()))
    throw std::domain_error("time_average: observable is not Hermitian");
  double total = 0.0;
  for (const auto& state : history.states())
    total += inner(state.amplitudes, observable * std::span<const Complex>(state.amplitudes)).real();
  return total / double(history.clock_size());
}

ComplexMatrix reduced_system_density(const HistoryState& history) {
  const std::size_t dim = history.system_dim();
  const double weight = 1.0 / double(history.clock_size());
  ComplexMatrix rho(dim, dim);
  for (const auto& state : history.states())
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex left = weight * state.amplitudes[i];
      if (left == Complex{}) continue;
      for (std::size_t j = 0; j < dim; ++j) rho(i, j) += left * std::conj(state.amplitudes[j]);
    }
  return rho;
}

GramMatrix gram_matrix(const HistoryState& history) {
  const std::size_t clock = history.clock_size();
  ComplexMatrix g(clock, clock);
  for (std::size_t a = 0; a < clock; ++a) {
    g(a, a) = 1.0;
    for (std::size_t b = a + 1; b < clock; ++b) {
      g(a, b) = inner(history[a].amplitudes, history[b].amplitudes);
      g(b, a) = std::conj(g(a, b));
    }
  }
  return {std::move(g)};
}

namespace {

void validate_gram(const GramMatrix& gram) {
  const auto& g = gram.entries;
  if (!g.is_square() || g.rows() == 0) throw std::domain_error("gram: matrix must be square and non-empty");
  if (hermiticity_defect(g) > gram_tolerance) throw std::domain_error("gram: matrix is not Hermitian");
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (std::abs(g(i, i) - 1.0) > gram_tolerance) throw std::domain_error("gram: diagonal entries must be 1");
}

std::vector<double> block_eigenvalues(const ComplexMatrix& g, std::size_t parity, double scale) {
  std::vector<std::size_t> index;
  for (std::size_t i = parity; i < g.rows(); i += 2) index.push_back(i);
  if (index.empty()) return {};
  ComplexMatrix block(index.size(), index.size());
  for (std::size_t a = 0; a < index.size(); ++a)
    for (std::size_t b = 0; b < index.size(); ++b) block(a, b) = scale * g(index[a], index[b]);
  return hermitian_eig(block).values;
}

}  // namespace

SchmidtSpectrum entanglement_spectrum(const GramMatrix& gram, SpectrumRoute route) {
  validate_gram(gram);
  const auto& g = gram.entries;
  const double scale = 1.0 / double(g.rows());
  std::vector<double> values;
  if (route == SpectrumRoute::dense) {
    values = hermitian_eig(scale * g).values;
  } else {
    for (std::size_t a = 0; a < g.rows(); ++a)
      for (std::size_t b = a + 1; b < g.rows(); b += 2)
        if (std::abs(g(a, b)) > parity_tolerance)
          throw std::domain_error("gram: parity blocks are coupled");
    values = block_eigenvalues(g, 0, scale);
    const auto odd = block_eigenvalues(g, 1, scale);
    values.insert(values.end(), odd.begin(), odd.end());
  }
  return SchmidtSpectrum::from_values(std::move(values), spectrum_negative_tolerance);
}

double system_time_entanglement(const HistoryState& history, EntropyKind kind) {
  return entropy(entanglement_spectrum(gram_matrix(history)), kind);
}

SchmidtModes schmidt_modes(const HistoryState& history) {
  const std::size_t clock = history.clock_size();
  const std::size_t dim = history.system_dim();
  const std::size_t sites = history.lattice_size();
  const double weight = 1.0 / std::sqrt(double(clock));

  std::vector<MomentumMode> modes;
  if (history.theta()) modes = momentum_modes(sites, *history.theta());

  ComplexMatrix a(dim, clock);
  for (std::size_t n = 0; n < clock; ++n) {
    if (modes.empty()) {
      for (std::size_t i = 0; i < dim; ++i) a(i, n) = weight * history[n].amplitudes[i];
      continue;
    }
    const auto momentum = to_momentum(history[n]);
    for (const auto& mode : modes) {
      const Complex up = momentum.amplitudes[2 * mode.k];
      const Complex down = momentum.amplitudes[2 * mode.k + 1];
      a(2 * mode.k, n) = weight * (std::conj(mode.s_plus[0]) * up + std::conj(mode.s_plus[1]) * down);
      a(2 * mode.k + 1, n) = weight * (std::conj(mode.s_minus[0]) * up + std::conj(mode.s_minus[1]) * down);
    }
  }

  auto decomposition = svd(a);
  std::vector<double> lambda;
  for (double s : decomposition.values) lambda.push_back(s * s);

  SchmidtModes out{SchmidtSpectrum::from_values(lambda), {}, {}, 0};
  out.rank = out.spectrum.rank(1e-12);
  for (std::size_t m = 0; m < decomposition.values.size(); ++m) {
    auto system = decomposition.left.column(m);
    if (!modes.empty()) {
      SystemState state{Basis::momentum, ComplexVector(dim)};
      for (const auto& mode : modes)
        for (std::size_t s = 0; s < 2; ++s)
          state.amplitudes[2 * mode.k + s] =
              system[2 * mode.k] * mode.s_plus[s] + system[2 * mode.k + 1] * mode.s_minus[s];
      system = to_position(state).amplitudes;
    }
    ComplexVector clock_mode(clock);
    for (std::size_t n = 0; n < clock; ++n) clock_mode[n] = std::conj(decomposition.right(n, m));
    out.system_modes.push_back(std::move(system));
    out.clock_modes.push_back(std::move(clock_mode));
  }
  return out;
}

double e2_double_sum(const GramMatrix& gram) {
  const auto& g = gram.entries;
  const double n = double(g.rows());
  double total = 0.0;
  for (const auto& z : g.entries()) total += std::norm(z);
  return 1.0 - total / (n * n);
}

double e2_partial_sum(const GramMatrix& gram) {
  const auto& g = gram.entries;
  const std::size_t clock = g.rows();
  const double n = double(clock);
  double total = 0.0;
  for (std::size_t d = 1; d < clock; ++d) total += (1.0 - double(d) / n) * std::norm(g(0, d));
  return 1.0 - (1.0 + 2.0 * total) / n;
}

}  // namespace qwh
