#pragma once

#include <string>
#include <vector>

#include "nlslab/model.hpp"

namespace nlslab {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> entries;

  int passed() const;
  int failed() const;
  bool all_pass() const { return failed() == 0; }
  std::string to_json() const;
  std::string to_table() const;

  void add(const std::string& name, double measured, double expected, double tol,
           const std::string& note = "");
  void add_bool(const std::string& name, bool ok, const std::string& note = "");
};

// The full identity suite for one generated model.
ValidationReport run_validation(const ModelConfig& cfg);

}  // namespace nlslab
