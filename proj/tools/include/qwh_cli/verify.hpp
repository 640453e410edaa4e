#pragma once

// Registry of invariant checks run by `qwh verify`. Each check returns a
// residual that must not exceed its tolerance.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qwh_cli/csv.hpp"

namespace qwh::cli {

struct VerifyOptions {
  std::string suite = "all";                // all, walk, history, analytic, opent
  double gram_perturbation = 0.0;           // added to G(0, 1) wherever a Gram matrix is checked
  std::map<std::string, double> tolerances; // per check name
};

struct RegisteredCheck {
  std::string suite;
  std::string name;
  double tolerance;
  std::function<double(const VerifyOptions&)> residual;
};

struct CheckResult {
  std::string suite;
  std::string name;
  double residual = 0.0;  // +inf when the check threw
  double tolerance = 0.0;
  bool passed = false;
};

const std::vector<RegisteredCheck>& check_registry();
std::vector<std::string> verify_suites();

/// Throws std::invalid_argument for an unknown suite or tolerance key.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

/// Columns suite, check, residual, tolerance, status.
CsvTable verify_report(const std::vector<CheckResult>& results, const VerifyOptions& options);

}  // namespace qwh::cli
