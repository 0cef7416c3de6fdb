#include "qbns/cli/report.hpp"

#include "probes.hpp"
#include "qbns/kernels.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace qbns::cli {

using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Prepared {
  std::string name;
  std::string kind;
  std::unique_ptr<Probe> probe;
};

std::vector<Prepared> prepare_all(const RawConfig& raw, const Definitions& defs) {
  std::vector<Prepared> out;
  for (const auto& s : raw.sections)
    if (s.kind == "probe") {
      const auto* kind = s.find("kind");
      auto probe = make_probe(s, defs);
      out.push_back(Prepared{s.name, kind->value, std::move(probe)});
    }
  return out;
}

void check_output_section(const RawConfig& raw) {
  for (const auto& s : raw.sections)
    if (s.kind == "output") {
      SectionReader r(s);
      r.optional_text("report");
      r.finish();
    }
}

}  // namespace

RunResult run_config(std::string_view config_text, const RunOptions& options) {
  const RawConfig raw = parse_config(config_text);
  const Definitions defs = load_definitions(raw, options.ball_cap);
  check_output_section(raw);
  auto probes = prepare_all(raw, defs);
  if (probes.empty()) throw ConfigError("the configuration declares no [probe] sections", raw.sections.back().line, 1);

  if (options.threads > 0) kernels::set_thread_count(options.threads);
  RunResult result;
  json body{{"format", kReportFormat},
            {"config", render_config(raw)},
            {"group", defs.model.describe()},
            {"ball_cap", defs.model.ball_cap()},
            {"probes", json::array()},
            {"caps_hit", json::array()}};
  json header{{"tool", "qbns"}, {"version", kToolVersion}, {"generated_at", utc_now()},
              {"threads", kernels::thread_count()}, {"timing_ms", json::object()}};
  const auto start = std::chrono::steady_clock::now();
  bool stopped = false;
  for (auto& p : probes) {
    json entry{{"name", p.name}, {"kind", p.kind}, {"params", p.probe->params()}};
    if (stopped) {
      entry["status"] = "skipped";
      body["probes"].push_back(std::move(entry));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      entry["result"] = p.probe->run();
      entry["status"] = "ok";
    } catch (const CapExceeded& e) {
      entry["status"] = "cap-exceeded";
      entry["error"] = e.what();
      body["caps_hit"].push_back({{"probe", p.name}, {"message", e.what()}, {"requested", e.requested()}, {"cap", e.cap()}});
      result.exit_code = kExitCapExceeded;
      result.message = "probe '" + p.name + "': " + e.what();
      stopped = true;
    } catch (const std::invalid_argument& e) {
      // Preconditions that only show up while running (no scaling element, incomplete library, ...).
      entry["status"] = "error";
      entry["error"] = e.what();
      result.exit_code = kExitValidation;
      result.message = "probe '" + p.name + "': " + e.what();
      stopped = true;
    }
    header["timing_ms"][p.name] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    body["probes"].push_back(std::move(entry));
  }
  header["total_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  body["complete"] = !stopped;
  result.report = {{"header", std::move(header)}, {"body", std::move(body)}};
  return result;
}

std::string body_text(const json& report) { return report.at("body").dump(2) + "\n"; }

std::vector<CertificateCheck> verify_report(const json& report) {
  if (!report.is_object() || !report.contains("body")) throw ReportError("not a report: missing body");
  const json& body = report.at("body");
  if (body.value("format", "") != kReportFormat) throw ReportError("unsupported report format");
  std::vector<CertificateCheck> out;
  RawConfig raw;
  Definitions defs;
  std::vector<Prepared> probes;
  try {
    raw = parse_config(body.at("config").get<std::string>());
    // Replay is local, so it does not depend on the cap the report was produced with.
    defs = load_definitions(raw, std::numeric_limits<std::size_t>::max() / 2);
    probes = prepare_all(raw, defs);
  } catch (const ConfigError& e) {
    throw ReportError(std::string("embedded config does not validate: ") + e.what());
  } catch (const json::exception& e) {
    throw ReportError(std::string("malformed report: ") + e.what());
  }
  const auto& entries = body.at("probes");
  if (entries.size() != probes.size()) throw ReportError("probe list does not match the embedded config");
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const json& e = entries[i];
    Checks checks(probes[i].name, out);
    if (e.value("name", "") != probes[i].name || e.value("kind", "") != probes[i].kind) {
      checks.expect("identity", false, "probe entry does not match the embedded config");
      continue;
    }
    const std::string status = e.value("status", "");
    if (status != "ok") {
      checks.expect("status", status == "cap-exceeded" || status == "skipped" || status == "error",
                    "probe did not complete (" + status + "); nothing to replay");
      continue;
    }
    checks.attempt("params", [&] { return e.at("params") == probes[i].probe->params(); });
    try {
      probes[i].probe->verify(e.at("result"), checks);
    } catch (const std::exception& ex) {
      checks.expect("result", false, std::string("malformed result: ") + ex.what());
    }
  }
  return out;
}

std::vector<std::string> probe_kinds() {
  std::vector<std::string> out;
  for (const auto& k : probe_catalog()) out.push_back(k.kind);
  return out;
}

std::optional<std::string> explain(std::string_view kind) {
  for (const auto& k : probe_catalog())
    if (k.kind == kind) return k.kind + "\n" + k.explanation;
  return std::nullopt;
}

}  // namespace qbns::cli
