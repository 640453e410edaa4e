#include <gtest/gtest.h>

#include <cmath>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"

using namespace qwh;

namespace {

constexpr EntropyKind all_kinds[] = {EntropyKind::von_neumann, EntropyKind::quadratic, EntropyKind::renyi2};

WalkConfig two_site(double theta, std::size_t m, std::size_t n, double alpha, double beta) {
  WalkConfig config;
  config.theta = theta;
  config.lattice_size = m;
  config.clock_size = n;
  config.psi0.assign(m, 0.0);
  config.psi0[m / 2 - 1] = config.psi0[m / 2 + 1] = 1.0 / std::sqrt(2.0);
  config.alpha = alpha;
  config.beta = beta;
  return config;
}

WalkConfig plane_wave(double theta, std::size_t m, std::size_t n, std::size_t k) {
  const auto mode = momentum_mode(k, m, theta);
  WalkConfig config;
  config.theta = theta;
  config.lattice_size = m;
  config.clock_size = n;
  for (std::size_t x = 0; x < m; ++x)
    config.psi0.push_back(std::polar(1.0 / std::sqrt(double(m)), 2 * pi * double(x * k) / double(m)));
  config.alpha = mode.s_plus[0];
  config.beta = mode.s_plus[1];
  return config;
}

// Tr rho_S^2 from the explicit 2M x 2M reduced density.
double purity_by_density(const HistoryState& h) {
  const auto rho = reduced_system_density(h);
  double total = 0.0;
  for (const auto& z : rho.entries()) total += std::norm(z);
  return total;
}

}  // namespace

TEST(History, SingleTime) {
  const auto h = build_history(WalkConfig::localized(0.4, 8, 1, 4));
  EXPECT_EQ(h.clock_size(), 1u);
  const auto s = entanglement_spectrum(gram_matrix(h));
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  for (auto kind : all_kinds) EXPECT_NEAR(system_time_entanglement(h, kind), 0.0, 1e-14);
}

TEST(History, FlattenedIsNormalized) {
  const auto h = build_history(WalkConfig::localized(0.4, 32, 9, 16));
  const auto v = h.flattened();
  EXPECT_EQ(v.size(), 64u * 9u);
  EXPECT_NEAR(norm(v), 1.0, 1e-13);
  EXPECT_EQ(v[2 * 16 * 9 + 0], Complex(1.0 / 3.0));
}

TEST(History, MatchesEvolve) {
  auto config = WalkConfig::localized(0.9, 32, 12, 16, 0.6, 0.8);
  const auto h = build_history(config);
  for (std::size_t n = 0; n < 12; ++n)
    EXPECT_LT(max_abs_difference(h[n].amplitudes, evolve(config, long(n)).amplitudes), 1e-10);
}

TEST(History, StationaryStateIsSeparable) {
  const auto h = build_history(plane_wave(0.7, 16, 6, 3));
  for (auto kind : all_kinds) EXPECT_NEAR(system_time_entanglement(h, kind), 0.0, 1e-10);
  EXPECT_EQ(schmidt_modes(h).rank, 1u);
}

TEST(History, RightMoverVisitsOrthogonalStates) {
  const std::size_t n = 10;
  const auto h = build_history(WalkConfig::localized(0.0, 32, n, 5));
  const auto g = gram_matrix(h);
  EXPECT_LT((g.entries - ComplexMatrix::identity(n)).max_abs(), 1e-14);
  EXPECT_NEAR(system_time_entanglement(h, EntropyKind::von_neumann), std::log2(double(n)), 1e-12);
  EXPECT_NEAR(system_time_entanglement(h, EntropyKind::quadratic), 1.0 - 1.0 / n, 1e-12);
}

TEST(History, RejectsBadStates) {
  EXPECT_THROW(HistoryState({}), std::domain_error);
  SystemState a{Basis::position, ComplexVector(4)};
  a.amplitudes[0] = 2.0;
  EXPECT_THROW(HistoryState({a}), std::domain_error);
}

TEST(Generator, ResidualOfWalkHistories) {
  for (double theta : {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2})
    for (std::size_t n : {1u, 2u, 4u, 16u}) {
      const auto h = build_history(WalkConfig::localized(theta, 64, n, 32, 0.6, 0.8));
      EXPECT_LT(generator_check(h, theta), 1e-10);
    }
  const auto two = build_history(WalkConfig::localized(0.3, 16, 2, 8));
  EXPECT_LT(generator_check(two, 0.3), 1e-12);
}

TEST(Generator, DetectsBrokenEvolution) {
  const auto h = build_history(WalkConfig::localized(pi / 4, 32, 6, 16));
  auto states = h.states();
  // Replace Psi_3 by a state orthogonal to it: the particle at an unreachable site.
  states[3] = SystemState{Basis::position, ComplexVector(64)};
  states[3].amplitudes[2 * 2] = 1.0;
  const HistoryState broken(states, pi / 4);
  EXPECT_GT(generator_check(broken, pi / 4), 0.1);
}

TEST(TimeAverage, Observables) {
  const std::size_t n = 7, x0 = 10;
  const auto right = build_history(WalkConfig::localized(0.0, 32, n, x0));
  EXPECT_NEAR(time_average(right, ComplexMatrix::identity(64)), 1.0, 1e-14);
  EXPECT_NEAR(time_average(right, position_observable(32)), x0 + (n - 1) / 2.0, 1e-12);

  const auto h = build_history(WalkConfig::localized(pi / 4, 32, 8, 16));
  const auto z = spin_z_observable(32);
  double per_step = 0.0;
  for (const auto& s : h.states())
    for (std::size_t x = 0; x < 32; ++x) per_step += std::norm(s.amplitudes[2 * x]) - std::norm(s.amplitudes[2 * x + 1]);
  EXPECT_NEAR(time_average(h, z), per_step / 8, 1e-12);
  // Tr(rho_S O)
  const auto rho = reduced_system_density(h);
  EXPECT_NEAR(time_average(h, z), (rho * z).trace().real(), 1e-12);

  auto bad = z;
  bad(0, 1) = 1.0;
  EXPECT_THROW(time_average(h, bad), std::domain_error);
}

TEST(TimeAverage, MatrixElementIdentity) {
  const auto h = build_history(WalkConfig::localized(0.8, 16, 5, 8, 0.6, 0.8));
  const std::size_t n = h.clock_size(), dim = h.system_dim();
  CounterRng rng(31);
  ComplexMatrix a(dim, dim);
  for (auto& z : a.entries()) z = rng.complex_normal();
  const auto o = a + a.adjoint();
  const auto psi = h.flattened();
  for (std::size_t np : {0u, 2u})
    for (std::size_t nn : {1u, 4u}) {
      // (O (x) |np><nn|) |Psi>
      ComplexVector image(psi.size());
      for (std::size_t i = 0; i < dim; ++i) {
        Complex v = 0.0;
        for (std::size_t j = 0; j < dim; ++j) v += o(i, j) * psi[j * n + nn];
        image[i * n + np] = v;
      }
      const Complex lhs = double(n) * inner(psi, image);
      const Complex rhs = inner(h[np].amplitudes, o * std::span<const Complex>(h[nn].amplitudes));
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
    }
}

TEST(Gram, StructureForLocalizedInput) {
  const double theta = 0.6;
  const auto g = gram_matrix(build_history(WalkConfig::localized(theta, 64, 20, 32)));
  const double u = std::cos(theta) * std::cos(theta);
  EXPECT_LT(hermiticity_defect(g.entries), 1e-12);
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = 0; b < 20; ++b) {
      const std::size_t d = a > b ? a - b : b - a;
      const double expected = d % 2 == 0 ? jacobi_overlap(int(d / 2), u) : 0.0;
      EXPECT_NEAR(std::abs(g.entries(a, b) - expected), 0.0, 1e-12) << a << " " << b;
    }
}

TEST(Gram, FlipCoinSpectra) {
  const auto odd = entanglement_spectrum(gram_matrix(build_history(WalkConfig::localized(pi / 2, 16, 3, 8))));
  EXPECT_NEAR(odd[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(odd[1], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(odd[2], 0.0, 1e-12);
  const auto even = entanglement_spectrum(gram_matrix(build_history(WalkConfig::localized(pi / 2, 32, 10, 16))));
  EXPECT_NEAR(even[0], 0.5, 1e-12);
  EXPECT_NEAR(even[1], 0.5, 1e-12);
  for (std::size_t i = 2; i < 10; ++i) EXPECT_NEAR(even[i], 0.0, 1e-12);
}

TEST(Spectrum, UniformForRightMover) {
  const auto s = entanglement_spectrum(gram_matrix(build_history(WalkConfig::localized(0.0, 32, 8, 0))));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(s[i], 1.0 / 8, 1e-14);
}

TEST(Spectrum, ParityRouteMatchesDense) {
  for (std::size_t n : {5u, 12u, 40u}) {
    const auto g = gram_matrix(build_history(WalkConfig::localized(pi / 8, 128, n, 64)));
    const auto dense = entanglement_spectrum(g);
    const auto blocks = entanglement_spectrum(g, SpectrumRoute::parity_blocks);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(dense[i], blocks[i], 1e-12);
  }
}

TEST(Spectrum, RejectsInvalidGram) {
  GramMatrix g{ComplexMatrix::identity(3)};
  g.entries(0, 1) = 1e-3;
  EXPECT_THROW(entanglement_spectrum(g), std::domain_error);
  // Hermitian with unit diagonal but indefinite.
  GramMatrix indefinite{ComplexMatrix(2, 2, {1.0, 2.0, 2.0, 1.0})};
  EXPECT_THROW(entanglement_spectrum(indefinite), std::domain_error);
  const auto coupled = gram_matrix(build_history(two_site(0.4, 32, 4, 1.0, 0.0)));
  auto odd = coupled;
  odd.entries(0, 1) = 0.1;
  odd.entries(1, 0) = 0.1;
  EXPECT_THROW(entanglement_spectrum(odd, SpectrumRoute::parity_blocks), std::domain_error);
}

TEST(Entanglement, HadamardFourStepsBruteForce) {
  const auto h = build_history(WalkConfig::localized(pi / 4, 16, 4, 8));
  EXPECT_NEAR(1.0 - purity_by_density(h), 11.0 / 16.0, 1e-12);
  EXPECT_NEAR(system_time_entanglement(h, EntropyKind::quadratic), 11.0 / 16.0, 1e-12);
  EXPECT_NEAR(system_time_entanglement(h, EntropyKind::quadratic), e2_closed_localized(pi / 4, 4), 1e-12);
}

TEST(Entanglement, SystemAndClockSidesAgree) {
  for (double theta : {0.3, pi / 4, 1.2}) {
    const auto h = build_history(WalkConfig::localized(theta, 32, 9, 16, 0.6, 0.8));
    EXPECT_NEAR(1.0 - purity_by_density(h), system_time_entanglement(h, EntropyKind::quadratic), 1e-10);
    const auto rho = reduced_system_density(h);
    const auto es = hermitian_eig(rho);
    const auto gram_side = entanglement_spectrum(gram_matrix(h));
    for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(es.values[i], gram_side[i], 1e-10);
    double vn = 0.0;
    for (double l : es.values)
      if (l > 1e-15) vn -= l * std::log2(l);
    EXPECT_NEAR(vn, system_time_entanglement(h, EntropyKind::von_neumann), 1e-9);
  }
}

TEST(Entanglement, SpinIndependence) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::pair<double, double> spins[] = {{1, 0}, {0, 1}, {r, r}, {std::cos(1.0), std::sin(1.0)}};
  for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
    for (bool localized : {true, false}) {
      for (auto kind : all_kinds) {
        double lo = 1e9, hi = -1e9;
        for (auto [a, b] : spins) {
          const auto config = localized ? WalkConfig::localized(theta, 64, 12, 32, a, b) : two_site(theta, 64, 12, a, b);
          const double e = system_time_entanglement(build_history(config), kind);
          lo = std::min(lo, e);
          hi = std::max(hi, e);
        }
        EXPECT_LT(hi - lo, 1e-10) << theta << " " << localized;
      }
    }
  }
}

TEST(Entanglement, TwoSiteMatchesParityKernel) {
  for (std::size_t n : {6u, 9u}) {
    const auto config = two_site(0.7, 64, n, 1.0, 0.0);
    const auto p = momentum_profile(config);
    EXPECT_NEAR(system_time_entanglement(build_history(config), EntropyKind::quadratic),
                e2_closed_parity(p.c_abs2, p.omega, n), 1e-10);
  }
}

TEST(Entanglement, MonotoneInAngle) {
  for (std::size_t n : {10u, 20u}) {
    double previous = 2.0;
    for (int j = 0; j <= 10; ++j) {
      const double theta = j * pi / 20;
      const double e = system_time_entanglement(build_history(WalkConfig::localized(theta, 64, n, 32)),
                                                EntropyKind::quadratic);
      EXPECT_LE(e, previous + 1e-12) << n << " " << j;
      previous = e;
    }
  }
}

TEST(Entanglement, FlipCoinCap) {
  for (std::size_t n : {2u, 5u, 8u, 13u}) {
    const auto h = build_history(WalkConfig::localized(pi / 2, 32, n, 16));
    EXPECT_LE(system_time_entanglement(h, EntropyKind::von_neumann), 1.0 + 1e-12);
    EXPECT_LE(system_time_entanglement(h, EntropyKind::quadratic), 0.5 + 1e-12);
  }
}

TEST(QuadraticSums, PartialEqualsDouble) {
  for (double theta : {0.2, pi / 4, 1.3}) {
    const auto g = gram_matrix(build_history(WalkConfig::localized(theta, 64, 17, 32)));
    EXPECT_NEAR(e2_partial_sum(g), e2_double_sum(g), 1e-12);
    EXPECT_NEAR(e2_double_sum(g), e2_closed_localized(theta, 17), 1e-10);
  }
}

TEST(SchmidtModes, RanksAndReconstruction) {
  const auto flip = schmidt_modes(build_history(WalkConfig::localized(pi / 2, 32, 8, 16)));
  EXPECT_EQ(flip.rank, 2u);

  const auto h = build_history(WalkConfig::localized(pi / 4, 32, 8, 16, 0.6, 0.8));
  const auto modes = schmidt_modes(h);
  const auto gram_side = entanglement_spectrum(gram_matrix(h));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(modes.spectrum[i], gram_side[i], 1e-10);

  const auto psi = h.flattened();
  ComplexVector rebuilt(psi.size());
  for (std::size_t m = 0; m < modes.system_modes.size(); ++m)
    for (std::size_t i = 0; i < h.system_dim(); ++i)
      for (std::size_t n = 0; n < 8; ++n)
        rebuilt[i * 8 + n] += std::sqrt(modes.spectrum[m]) * modes.system_modes[m][i] * modes.clock_modes[m][n];
  EXPECT_LT(max_abs_difference(rebuilt, psi), 1e-9);

  for (std::size_t a = 0; a < modes.clock_modes.size(); ++a)
    for (std::size_t b = 0; b < modes.clock_modes.size(); ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(inner(modes.clock_modes[a], modes.clock_modes[b]) - expected), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(inner(modes.system_modes[a], modes.system_modes[b]) - expected), 0.0, 1e-10);
    }
}

TEST(SchmidtModes, PositionRouteWithoutAngle) {
  const auto h = build_history(WalkConfig::localized(0.5, 32, 6, 16));
  const HistoryState anonymous(h.states());
  const auto a = schmidt_modes(h);
  const auto b = schmidt_modes(anonymous);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.spectrum[i], b.spectrum[i], 1e-12);
}

TEST(History, Prefix) {
  const auto h = build_history(WalkConfig::localized(0.5, 32, 10, 16));
  const auto p = h.prefix(4);
  EXPECT_EQ(p.clock_size(), 4u);
  EXPECT_NEAR(system_time_entanglement(p, EntropyKind::quadratic), e2_closed_localized(0.5, 4), 1e-12);
  EXPECT_THROW(h.prefix(11), std::domain_error);
}
