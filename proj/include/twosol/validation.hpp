#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace twosol {

struct CheckResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;  ///< measured values and the limits they were held to
  double seconds = 0.0;
};

struct Check {
  std::string id;
  std::string title;
  bool trivial = false;  ///< part of the quick suite
  double time_limit = 0.0;  ///< seconds, 0 for none; exceeding it fails the check
  /// Writes measured values to `detail` and returns pass/fail. May throw;
  /// run_checks turns exceptions into failures.
  std::function<bool(std::string& detail)> body;
};

/// The ten acceptance criteria, in order.
std::vector<Check> acceptance_checks();
/// Cheap plumbing and closed-form checks.
std::vector<Check> quick_checks();

CheckResult run_check(const Check& c);
/// Runs checks on `workers` threads. Results keep the input order; with a
/// non-empty `out_dir` each result also goes to <out_dir>/<id>.txt.
std::vector<CheckResult> run_checks(const std::vector<Check>& checks, unsigned workers,
                                    const std::filesystem::path& out_dir = {});

/// "[PASS] id  title: detail (t s)"
std::string format_result(const CheckResult& r);

}  // namespace twosol
