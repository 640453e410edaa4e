#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"
#include "qwh_cli/angles.hpp"
#include "qwh_cli/app.hpp"
#include "qwh_cli/circuit.hpp"
#include "qwh_cli/commands.hpp"
#include "qwh_cli/csv.hpp"
#include "qwh_cli/figures.hpp"
#include "qwh_cli/verify.hpp"

using namespace qwh;
using namespace qwh::cli;

namespace {

std::string to_text(const CsvTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

RunSpec figure_spec(std::vector<double> theta, std::size_t n_max, std::size_t threads = 1) {
  RunSpec s;
  s.subcommand = Subcommand::figure;
  s.theta = std::move(theta);
  s.clock_size = n_max;
  s.threads = threads;
  return s;
}

int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST(Angles, RationalMultiplesOfPi) {
  EXPECT_DOUBLE_EQ(parse_angle("pi/4"), pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("3pi/8"), 3 * pi / 8);
  EXPECT_DOUBLE_EQ(parse_angle("3*pi/8"), 3 * pi / 8);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi/2"), -pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle(" 0.25 "), 0.25);
  EXPECT_DOUBLE_EQ(parse_angle("1/4"), 0.25);
  for (const char* bad : {"", "pie", "pi/0", "x", "2pi3", "/4"}) EXPECT_THROW(parse_angle(bad), std::invalid_argument) << bad;
}

TEST(Angles, ListsAndRanges) {
  const auto list = parse_angle_list("0,pi/8,pi/4");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_DOUBLE_EQ(list[2], pi / 4);
  const auto range = parse_angle_list("0:pi/20:pi/2");
  ASSERT_EQ(range.size(), 11u);
  EXPECT_EQ(range.back(), pi / 2);
  EXPECT_DOUBLE_EQ(range[5], pi / 4);
  EXPECT_THROW(parse_angle_list("0:pi/3:pi/2"), std::invalid_argument);
  EXPECT_THROW(parse_angle_list("pi:pi/4:0"), std::invalid_argument);
  EXPECT_EQ(parse_count_list("2,10:10:30"), (std::vector<std::size_t>{2, 10, 20, 30}));
  EXPECT_THROW(parse_count_list("2,x"), std::invalid_argument);
}

TEST(Csv, RoundTripAndFormat) {
  CsvTable t;
  t.metadata = {{"qwh", "0"}, {"theta", "0.5"}};
  t.columns = {"a", "b"};
  t.add_row({format_double(0.1), format_double(-0.0)});
  t.add_row({format_double(1.0 / 3.0), format_count(7)});
  EXPECT_THROW(t.add_row({"1"}), std::logic_error);
  const auto text = to_text(t);
  EXPECT_EQ(text, "# qwh=0\n# theta=0.5\na,b\n0.10000000000000001,0\n0.33333333333333331,7\n");
  std::istringstream is(text);
  const auto back = read_csv(is);
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.number(1, "a"), 1.0 / 3.0);
}

TEST(Csv, SchemaProblems) {
  CsvTable t;
  t.columns = {"theta", "N", "v"};
  t.rows = {{"0", "1", "0.5"}, {"0", "2", "x"}, {"0", "1", "0.1"}, {"1", "1"}};
  const auto problems = schema_problems(t, {"theta", "N", "v"}, {"theta", "N"});
  EXPECT_EQ(problems.size(), 3u);  // non-numeric, out of order, ragged
  EXPECT_FALSE(schema_problems(t, {"theta", "v"}, {}).empty());
}

TEST(Figures, UnknownId) {
  EXPECT_EQ(parse_figure_id("fig5"), FigureId::fig5);
  EXPECT_THROW(parse_figure_id("fig1"), std::invalid_argument);
  EXPECT_THROW(parse_figure_id("fig8"), std::invalid_argument);
}

TEST(Figures, Fig2QuadraticColumnMatchesClosedForm) {
  const auto spec = figure_spec(parse_angle_list("0:pi/20:pi/2"), 30, 2);
  const auto t = run_figure(FigureId::fig2, spec);
  const auto schema = figure_schema(FigureId::fig2, spec);
  EXPECT_TRUE(schema_problems(t, schema.columns, schema.grid).empty());
  ASSERT_EQ(t.rows.size(), 11u * 30u);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double theta = t.number(r, "theta");
    const auto n = std::size_t(t.number(r, "N"));
    EXPECT_NEAR(t.number(r, "e_quad"), t.number(r, "e2_closed"), 1e-9);
    EXPECT_NEAR(t.number(r, "e2_closed"), e2_closed_localized(theta, n), 1e-15);
    if (theta == 0.0 && n == 10) EXPECT_NEAR(t.number(r, "e_quad"), 0.9, 1e-12);
  }
}

TEST(Figures, Fig3OrderingAndValues) {
  const auto spec = figure_spec({pi / 8, 0.0, pi / 4}, 20, 3);
  const auto t = run_figure(FigureId::fig3, spec);
  const auto schema = figure_schema(FigureId::fig3, spec);
  EXPECT_TRUE(schema_problems(t, schema.columns, schema.grid).empty());
  ASSERT_EQ(t.rows.size(), 3u * 3u);  // N = 2, 10, 20
  EXPECT_EQ(t.number(0, "N"), 2.0);
  EXPECT_EQ(t.number(0, "theta"), 0.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    EXPECT_NEAR(t.number(r, "e_quad"), e2_closed_localized(t.number(r, "theta"), std::size_t(t.number(r, "N"))), 1e-9);
}

TEST(Figures, Fig4FlipCoinSpectrum) {
  const auto spec = figure_spec({pi / 2}, 40);
  const auto t = run_figure(FigureId::fig4, spec);
  ASSERT_EQ(t.columns.size(), 41u);
  EXPECT_NEAR(t.number(0, "lambda_1"), 0.5, 1e-12);
  EXPECT_NEAR(t.number(0, "lambda_2"), 0.5, 1e-12);
  for (std::size_t i = 3; i <= 40; ++i) EXPECT_LT(std::abs(t.number(0, "lambda_" + std::to_string(i))), 1e-12);
}

TEST(Figures, OperatorFiguresStayBelowBound) {
  const auto spec = figure_spec({}, 0);
  RunSpec s5 = spec, s7 = spec;
  s5.clock_size.reset();
  s7.clock_size = 8;
  s7.lattice_size = 16;
  const auto f5 = run_figure(FigureId::fig5, s5);
  const auto f6 = run_figure(FigureId::fig6, s5);
  const auto f7 = run_figure(FigureId::fig7, s7);
  for (const auto* t : {&f5, &f6, &f7}) EXPECT_FALSE(t->rows.empty());
  for (std::size_t r = 0; r < f6.rows.size(); ++r) EXPECT_LE(f6.number(r, "average"), 8.0 / 9.0 + 1e-9);
  for (std::size_t r = 0; r < f7.rows.size(); ++r) EXPECT_LE(f7.number(r, "average"), 8.0 / 9.0 + 1e-9);
  // n = 9 and 10 at the default grid; theta = 0 has spectrum (1/2, 1/2, 0)
  EXPECT_EQ(f5.number(0, "n"), 9.0);
  EXPECT_NEAR(f5.number(0, "lambda_1"), 0.5, 1e-12);
  EXPECT_NEAR(f5.number(0, "lambda_3"), 0.0, 1e-12);
  for (const auto id : {FigureId::fig5, FigureId::fig6}) {
    const auto schema = figure_schema(id, s5);
    EXPECT_TRUE(schema_problems(run_figure(id, s5), schema.columns, schema.grid).empty());
  }
}

TEST(Figures, DeterministicAcrossThreadCounts) {
  const auto a = to_text(run_figure(FigureId::fig3, figure_spec({0.0, pi / 8, pi / 4, 3 * pi / 8}, 10, 1)));
  const auto b = to_text(run_figure(FigureId::fig3, figure_spec({0.0, pi / 8, pi / 4, 3 * pi / 8}, 10, 4)));
  EXPECT_EQ(a, b);
  const auto c = to_text(run_figure(FigureId::fig3, figure_spec({0.0, pi / 8, pi / 4, 3 * pi / 8}, 10, 1)));
  EXPECT_EQ(a, c);
}

TEST(Circuit, RegisterArithmetic) {
  const auto c = emit_circuit(WalkConfig::localized(pi / 4, 8, 4, 0));
  EXPECT_EQ(c.count("H"), 3u + 2u);
  EXPECT_EQ(c.count("FT"), 0u);
  EXPECT_EQ(c.count("CU_WALK"), 3u);  // n = 1, 2, 3; the identity block is left out
  EXPECT_EQ(c.qubit_count(), 6u);
  const auto general = emit_circuit(WalkConfig::localized(pi / 4, 8, 4, 3));
  EXPECT_EQ(general.count("FT"), 1u);
  EXPECT_EQ(general.count("H"), 2u);
}

TEST(Circuit, RejectsNonPowerOfTwo) {
  EXPECT_THROW(emit_circuit(WalkConfig::localized(pi / 4, 8, 3, 0)), std::domain_error);
  EXPECT_THROW(emit_circuit(WalkConfig::localized(pi / 4, 12, 4, 0)), std::domain_error);
}

TEST(Circuit, TextRoundTripAndQasm) {
  const auto c = emit_circuit(WalkConfig::localized(0.3, 16, 4, 5));
  std::stringstream ss;
  write_circuit(ss, c);
  const auto back = parse_circuit(ss);
  EXPECT_EQ(back.position_qubits, c.position_qubits);
  EXPECT_EQ(back.clock_qubits, c.clock_qubits);
  ASSERT_EQ(back.gates.size(), c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    EXPECT_EQ(back.gates[i].name, c.gates[i].name);
    EXPECT_EQ(back.gates[i].qubits, c.gates[i].qubits);
    EXPECT_EQ(back.gates[i].params, c.gates[i].params);
  }
  std::ostringstream q;
  write_qasm(q, c);
  EXPECT_NE(q.str().find("OPENQASM 2.0;"), std::string::npos);
  EXPECT_NE(q.str().find("ft q[0],q[1],q[2],q[3];"), std::string::npos);
  EXPECT_NE(q.str().find("cu_walk(0.29999999999999999, 3) q[5],q[6],q[0],q[1],q[2],q[3],q[4];"), std::string::npos);

  std::istringstream bad("GATE H 0\n");
  EXPECT_THROW(parse_circuit(bad), std::runtime_error);
}

TEST(Circuit, ResimulationMatchesHistory) {
  for (const std::size_t x0 : {0u, 5u, 16u}) {
    const auto config = WalkConfig::localized(pi / 4, 32, 8, x0, 0.6, 0.8);
    const auto c = emit_circuit(config);
    EXPECT_GT(circuit_fidelity(c, config), 1.0 - 1e-9) << x0;
  }
  // a non-localized start goes through the FT gate
  auto config = WalkConfig::localized(0.4, 16, 4, 0);
  CounterRng rng(3);
  config.psi0 = haar_random_state(16, rng);
  EXPECT_GT(circuit_fidelity(emit_circuit(config), config), 1.0 - 1e-9);
}

TEST(Circuit, SimulatorDetectsWrongAngle) {
  const auto config = WalkConfig::localized(pi / 4, 32, 8, 0);
  auto wrong = config;
  wrong.theta = pi / 5;
  EXPECT_LT(circuit_fidelity(emit_circuit(wrong), config), 0.99);
}

TEST(Verify, DefaultRunPasses) {
  const auto results = run_verify({});
  EXPECT_EQ(results.size(), check_registry().size());
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << " " << r.residual;
  const auto report = verify_report(results, {});
  EXPECT_EQ(report.rows.size(), check_registry().size());
  EXPECT_TRUE(schema_problems(report, {"suite", "check", "residual", "tolerance", "status"}, {},
                              {"suite", "check", "status"})
                  .empty());
}

TEST(Verify, GramPerturbationTripsHermiticity) {
  VerifyOptions o;
  o.suite = "history";
  o.gram_perturbation = 1e-3;
  const auto results = run_verify(o);
  const auto it = std::find_if(results.begin(), results.end(), [](const CheckResult& r) { return r.name == "gram_hermiticity"; });
  ASSERT_NE(it, results.end());
  EXPECT_FALSE(it->passed);
  EXPECT_NEAR(it->residual, 1e-3, 1e-12);
}

TEST(Verify, SuiteSelectionAndOverrides) {
  VerifyOptions o;
  o.suite = "walk";
  o.tolerances["uk_reflection"] = 0.0;
  const auto results = run_verify(o);
  for (const auto& r : results) EXPECT_EQ(r.suite, "walk");
  EXPECT_EQ(results.front().tolerance, 0.0);
  o.suite = "numbers";
  EXPECT_THROW(run_verify(o), std::invalid_argument);
  o.suite = "all";
  o.tolerances = {{"no_such_check", 1.0}};
  EXPECT_THROW(run_verify(o), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
  std::string out, err;
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"history", "--theta", "pi/4", "--steps", "8", "--entropy", "tsallis"}), 2);
  EXPECT_EQ(run({"history", "--theta", "2pi", "--steps", "8"}, nullptr, &err), 2);
  EXPECT_NE(err.find("theta"), std::string::npos);
  EXPECT_EQ(run({"figure", "fig9"}), 2);
  EXPECT_EQ(run({"circuit", "--n", "6", "--m", "16", "--out", "-"}), 2);
  EXPECT_EQ(run({"history", "--steps", "4", "--out", "/nonexistent-dir/x.csv"}), 2);
  EXPECT_EQ(run({"verify", "--suite", "history", "--inject-gram-perturbation", "1e-3"}, &out), 1);
  EXPECT_NE(out.find("gram_hermiticity"), std::string::npos);
  EXPECT_EQ(run({"--help"}, &out), 0);
}

TEST(Cli, HistoryCommand) {
  std::string out;
  ASSERT_EQ(run({"history", "--theta", "0,pi/4", "--steps", "10", "--spin", "0.6,0.8", "--entropy", "vn"}, &out), 0);
  std::istringstream is(out);
  const auto t = read_csv(is);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(t.number(0, "e2"), 0.9, 1e-12);
  EXPECT_NEAR(t.number(0, "entropy"), std::log2(10.0), 1e-12);
  EXPECT_NEAR(t.number(1, "e2"), e2_closed_localized(pi / 4, 10), 1e-9);
  bool echoed = false;
  for (const auto& [k, v] : t.metadata) echoed |= k == "spin" && v == "0.59999999999999998;0.80000000000000004";
  EXPECT_TRUE(echoed);
}

TEST(Cli, WalkSpectrumOpent) {
  std::string out;
  ASSERT_EQ(run({"walk", "--theta", "0", "--steps", "5"}, &out), 0);
  std::istringstream w(out);
  const auto walk = read_csv(w);
  EXPECT_EQ(walk.number(4, "mean_x"), 4.0);  // spin up moves right at theta = 0

  ASSERT_EQ(run({"spectrum", "--theta", "pi/2", "--steps", "6"}, &out), 0);
  std::istringstream s(out);
  const auto sp = read_csv(s);
  EXPECT_NEAR(sp.number(0, "lambda_1"), 0.5, 1e-12);

  ASSERT_EQ(run({"opent", "--operator", "un", "--n", "1", "--theta", "0.7", "--m", "16"}, &out), 0);
  std::istringstream o(out);
  const auto op = read_csv(o);
  EXPECT_EQ(op.number(0, "rank"), 2.0);
  EXPECT_NEAR(op.number(0, "lambda_1"), 0.5, 1e-12);

  ASSERT_EQ(run({"opent", "--operator", "ws", "--n", "4", "--theta", "pi/4", "--m", "8", "--samples", "2000", "--seed", "9"}, &out), 0);
  std::string again;
  ASSERT_EQ(run({"opent", "--operator", "ws", "--n", "4", "--theta", "pi/4", "--m", "8", "--samples", "2000", "--seed", "9"}, &again), 0);
  EXPECT_EQ(out, again);
}

TEST(Cli, FigureAndCircuitFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "qwh_cli_test";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "fig4.csv").string();
  ASSERT_EQ(run({"figure", "fig4", "--theta", "pi/8,pi/4", "--n-max", "12", "--out", csv}), 0);
  std::ifstream in(csv);
  const auto t = read_csv(in);
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.columns.size(), 13u);

  const auto gates = (dir / "c.txt").string(), qasm = (dir / "c.qasm").string();
  std::string err;
  ASSERT_EQ(run({"circuit", "--n", "8", "--m", "32", "--localized", "--out", gates, "--qasm", qasm, "--check"}, nullptr, &err), 0);
  EXPECT_NE(err.find("fidelity"), std::string::npos);
  std::ifstream g(gates);
  EXPECT_EQ(parse_circuit(g).count("H"), 5u + 3u);
  EXPECT_TRUE(std::filesystem::exists(qasm));
  std::filesystem::remove_all(dir);
}
