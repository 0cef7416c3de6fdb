#pragma once

// Running experiment configs into JSON reports and replaying reports.
//
// A report is {"header": ..., "body": ...}. The body is a pure function of
// the config text and ball cap; the header carries wall-clock data.

#include "qbns/cli/config.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbns::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitCapExceeded = 3, kExitVerifyFailed = 4 };

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportFormat = "qbns-report/1";

/// A report that is not shaped like one.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::optional<std::size_t> ball_cap;
  int threads = 0;  // 0 keeps the OpenMP default
};

struct RunResult {
  nlohmann::json report;
  int exit_code = kExitOk;
  std::string message;  // set when a probe stopped the run
};

/// Parses and validates every section (throwing ConfigError) before running any probe.
RunResult run_config(std::string_view config_text, const RunOptions& options);

/// The canonical serialization of the deterministic part.
std::string body_text(const nlohmann::json& report);

struct CertificateCheck {
  std::string probe;
  std::string certificate;
  bool passed = false;
  std::string detail;
};

/// Replays every certificate in the report. Throws ReportError on malformed input.
std::vector<CertificateCheck> verify_report(const nlohmann::json& report);

std::vector<std::string> probe_kinds();
/// Constants and formulas behind a probe kind; empty for unknown kinds.
std::optional<std::string> explain(std::string_view kind);

}  // namespace qbns::cli
