// qbns: run experiment configs, verify reports, explain probe kinds.

#include "qbns/cli/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qbns::cli;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cmd_run(const std::string& config_path, std::string out_path, int threads, std::optional<std::size_t> ball_cap) {
  const auto text = slurp(config_path);
  if (!text) {
    std::cerr << "qbns: cannot read " << config_path << "\n";
    return kExitUsage;
  }
  RunResult result;
  try {
    result = run_config(*text, RunOptions{ball_cap, threads});
  } catch (const ConfigError& e) {
    std::cerr << config_path << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kExitValidation;
  }
  if (out_path.empty()) {
    // An [output] report key is relative to the config file.
    const auto raw = parse_config(*text);
    for (const auto& s : raw.sections)
      if (s.kind == "output")
        if (const auto* e = s.find("report")) {
          const auto slash = config_path.rfind('/');
          out_path = (slash == std::string::npos ? std::string() : config_path.substr(0, slash + 1)) + e->value;
        }
  }
  const std::string doc = result.report.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << doc;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << doc)) {
      std::cerr << "qbns: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    std::cerr << "qbns: wrote " << out_path << "\n";
  }
  if (!result.message.empty()) std::cerr << "qbns: " << result.message << "\n";
  return result.exit_code;
}

int cmd_verify(const std::string& report_path) {
  const auto text = slurp(report_path);
  if (!text) {
    std::cerr << "qbns: cannot read " << report_path << "\n";
    return kExitUsage;
  }
  std::vector<CertificateCheck> checks;
  try {
    checks = verify_report(nlohmann::json::parse(*text));
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qbns: " << report_path << " is not JSON: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ReportError& e) {
    std::cerr << "qbns: " << e.what() << "\n";
    return kExitValidation;
  }
  std::size_t failed = 0;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.probe << "/" << c.certificate;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
    failed += !c.passed;
  }
  std::cout << checks.size() - failed << "/" << checks.size() << " certificates replayed\n";
  return failed ? kExitVerifyFailed : kExitOk;
}

int cmd_explain(const std::string& kind) {
  if (auto text = explain(kind)) {
    std::cout << *text;
    return kExitOk;
  }
  std::cerr << "qbns: unknown probe kind '" << kind << "'; known kinds:";
  for (const auto& k : probe_kinds()) std::cerr << " " << k;
  std::cerr << "\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-BNS probes: run configs, verify reports, explain probe kinds"};
  app.require_subcommand(1);

  std::string config, out;
  int threads = 0;
  std::optional<std::size_t> ball_cap;
  auto* run = app.add_subcommand("run", "Run every probe in a config and write a JSON report");
  run->add_option("config", config, "Experiment config file")->required();
  run->add_option("--out", out, "Report file ('-' for stdout)");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--ball-cap", ball_cap, "Largest ball radius any probe may enumerate");

  std::string report;
  auto* verify = app.add_subcommand("verify", "Replay every certificate in a report");
  verify->add_option("report", report, "Report file")->required();

  std::string kind;
  auto* expl = app.add_subcommand("explain", "Print the constants and formulas behind a probe kind");
  expl->add_option("probe-kind", kind, "Probe kind")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    if (*run) return cmd_run(config, out, threads, ball_cap);
    if (*verify) return cmd_verify(report);
    return cmd_explain(kind);
  } catch (const std::exception& e) {
    std::cerr << "qbns: " << e.what() << "\n";
    return kExitValidation;
  }
}
