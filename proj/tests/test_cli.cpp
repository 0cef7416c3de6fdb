#include "doctest.h"

#include "qbns/cli/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace qbns::cli;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string corpus(const std::string& name) { return read_file(std::filesystem::path(QBNS_CONFIG_DIR) / name); }

const std::string kZ2Group = "[group]\nkind = free-times-abelian\nrank = 1\nabelian-rank = 1\nnames = ac\n\n"
                             "[phi hom]\ntype = hom\nvalues = 1, 1\n\n";

ConfigError config_error(const std::string& text) {
  try {
    run_config(text, {});
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, 0);
}

bool all_passed(const std::vector<CertificateCheck>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

int tool(const std::string& args) {
  const std::string cmd = std::string(QBNS_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config syntax errors carry line and column") {
  auto e = config_error("[group]\nkind free\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 6);
  e = config_error("kind = free\n");
  CHECK(e.line() == 1);
  e = config_error("[group]\nkind = free\nrank = 2\n[widget]\n");
  CHECK(e.line() == 4);
  CHECK(e.column() == 2);
  e = config_error("[group]\nkind = free\nkind = free\n");
  CHECK(e.line() == 3);
  e = config_error("[group]\nkind = free\nrank = 2\n[probe]\n");
  CHECK(e.message().find("need a name") != std::string::npos);
  e = config_error("[group]\nkind = free\nrank =\n");
  CHECK(e.message() == "empty value");
}

TEST_CASE("comments, blank lines and rendering round-trip") {
  const auto raw = parse_config("# header\n[group] ; trailing\n  kind = free   \n\nrank = 2 # two\n");
  REQUIRE(raw.sections.size() == 1);
  CHECK(raw.sections[0].entries.size() == 2);
  CHECK(raw.sections[0].entries[0].value == "free");
  CHECK(raw.sections[0].entries[0].column == 10);
  const auto again = parse_config(render_config(raw));
  CHECK(render_config(again) == render_config(raw));
}

TEST_CASE("validation names the violated precondition") {
  auto e = config_error(kZ2Group + "[probe p]\nkind = q-library\nphi = hom\ndefect = 1\nk-prime = 2\nc = c\nradius = 30\n");
  CHECK(e.line() == 15);
  CHECK(e.message().find("K' > 2D*") != std::string::npos);
  e = config_error(kZ2Group + "[probe p]\nkind = defect\nphi = nope\nradius = 2\n");
  CHECK(e.message().find("unknown quasimorphism") != std::string::npos);
  e = config_error(kZ2Group + "[probe p]\nkind = defect\nphi = hom\nradius = 2\ncolour = red\n");
  CHECK(e.message().find("unknown key 'colour'") != std::string::npos);
  e = config_error(kZ2Group + "[probe p]\nkind = teleport\n");
  CHECK(e.message().find("unknown probe kind") != std::string::npos);
  e = config_error(kZ2Group + "[probe p]\nkind = path-search\nphi = hom\nfrom = x\nto = 1\nk = 1\nradius = 2\n");
  CHECK(e.line() == 14);
  e = config_error("[group]\nkind = free\nrank = 2\n[phi h]\ntype = hom\nvalues = 1\n");
  CHECK(e.message().find("expected 2 values") != std::string::npos);
  e = config_error(kZ2Group + "[probe p]\nkind = novikov-solve\nphi = hom\ndefect = 0\na = 1\nb = a\nc = c\nwindow = 0\n");
  CHECK(e.message().find("window") != std::string::npos);
  e = config_error(kZ2Group);
  CHECK(e.message().find("no [probe]") != std::string::npos);
}

TEST_CASE("a homomorphism has defect exactly zero") {
  const auto r = run_config(corpus("defect_hom.cfg"), {});
  CHECK(r.exit_code == kExitOk);
  const auto& res = r.report["body"]["probes"][0]["result"];
  CHECK(res["lower"] == "0");
  CHECK(res["upper"] == "0");
}

TEST_CASE("the F2 x Z example stays within [-3, 3]") {
  const auto r = run_config(corpus("f2z_example.cfg"), {});
  const auto& res = r.report["body"]["probes"][0]["result"];
  CHECK(res["within_bound"] == true);
  CHECK(res["pairs"].size() == 100);
  CHECK(all_passed(verify_report(r.report)));
}

TEST_CASE("free group Novikov probes are UNSAT") {
  const auto r = run_config(corpus("f2_novikov.cfg"), {});
  for (const auto& p : r.report["body"]["probes"]) {
    CHECK(p["result"]["outcome"] == "unsat");
    CHECK(p["result"]["columns"] == 0);
  }
  CHECK(all_passed(verify_report(r.report)));
}

TEST_CASE("fresh reports verify; tampered ones fail by name") {
  const auto r = run_config(corpus("z2_peaks.cfg"), {});
  REQUIRE(all_passed(verify_report(r.report)));

  json bad = r.report;
  auto& path = bad["body"]["probes"][2]["result"]["path"];
  REQUIRE(path.size() == 3);
  path[1] = "C";
  bool named = false;
  for (const auto& c : verify_report(bad))
    if (!c.passed) named = named || (c.probe == "lattice-search" && c.certificate == "path-witness");
  CHECK(named);

  json bad_trace = r.report;
  bad_trace["body"]["probes"][1]["result"]["traces"][3]["reduced"]["max"] = "-7";
  bool trace_named = false;
  for (const auto& c : verify_report(bad_trace))
    if (!c.passed) trace_named = trace_named || c.certificate == "trace[3]";
  CHECK(trace_named);

  json bad_lib = r.report;
  bad_lib["body"]["probes"][0]["result"]["library"]["entries"][5]["q"][4] = "aaaa";
  bool lib_named = false;
  for (const auto& c : verify_report(bad_lib))
    if (!c.passed) lib_named = lib_named || c.certificate.starts_with("q[");
  CHECK(lib_named);

  json bad_solver = run_config(corpus("z2_novikov.cfg"), {}).report;
  bad_solver["body"]["probes"][0]["result"]["y"][0][1] = "5";
  CHECK_FALSE(all_passed(verify_report(bad_solver)));

  json bad_obstruction = run_config(corpus("f2_novikov.cfg"), {}).report;
  bad_obstruction["body"]["probes"][1]["result"]["obstruction"]["pairing"] = "3";
  CHECK_FALSE(all_passed(verify_report(bad_obstruction)));

  CHECK_THROWS_AS(verify_report(json::object()), ReportError);
}

TEST_CASE("verification does not depend on the ball cap") {
  const auto r = run_config(corpus("f2_brooks.cfg"), RunOptions{12, 0});
  CHECK(r.report["body"]["ball_cap"] == 12);
  CHECK(all_passed(verify_report(r.report)));
}

TEST_CASE("a cap hit yields a partial report") {
  const auto r = run_config(corpus("f2_brooks.cfg"), RunOptions{5, 0});
  CHECK(r.exit_code == kExitCapExceeded);
  const auto& body = r.report["body"];
  CHECK(body["complete"] == false);
  REQUIRE(body["caps_hit"].size() == 1);
  CHECK(body["caps_hit"][0]["probe"] == "dipping-geodesic");
  CHECK(body["probes"][4]["status"] == "cap-exceeded");
  CHECK(body["probes"][5]["status"] == "skipped");
  CHECK(body["probes"][0]["status"] == "ok");
  // The completed part still replays.
  CHECK(all_passed(verify_report(r.report)));
}

TEST_CASE("report bodies are deterministic across runs and thread counts") {
  for (const auto& entry : std::filesystem::directory_iterator(QBNS_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    const std::string text = read_file(entry.path());
    const auto a = run_config(text, RunOptions{std::nullopt, 1});
    const auto b = run_config(text, RunOptions{std::nullopt, 8});
    const auto c = run_config(text, RunOptions{std::nullopt, 3});
    CHECK_MESSAGE(body_text(a.report) == body_text(b.report), entry.path().filename().string());
    CHECK(body_text(a.report) == body_text(c.report));
    CHECK(a.report["header"].contains("generated_at"));
    CHECK_FALSE(a.report["body"].contains("threads"));
  }
}

TEST_CASE("explain covers every probe kind") {
  const auto kinds = probe_kinds();
  CHECK(kinds.size() == 10);
  for (const auto& k : kinds) {
    const auto text = explain(k);
    REQUIRE(text);
    CHECK(text->find("keys:") != std::string::npos);
  }
  CHECK(explain("q-library")->find("M = 3D* + max |phi-bar(s)|") != std::string::npos);
  CHECK_FALSE(explain("nope"));
}

TEST_CASE("tool exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "qbns_cli_test";
  std::filesystem::create_directories(dir);
  const std::string cfg = std::string(QBNS_CONFIG_DIR) + "/f2_brooks.cfg";
  const std::string out = (dir / "r.json").string();
  CHECK(tool("") == kExitUsage);
  CHECK(tool("frobnicate") == kExitUsage);
  CHECK(tool("explain q-library") == kExitOk);
  CHECK(tool("explain nope") == kExitUsage);
  CHECK(tool("run " + cfg + " --out " + out + " --threads 2") == kExitOk);
  CHECK(tool("verify " + out) == kExitOk);
  CHECK(tool("run " + cfg + " --out " + out + " --ball-cap 5") == kExitCapExceeded);

  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "[group]\nkind = free\nrank = 0\n";
  }
  CHECK(tool("run " + (dir / "bad.cfg").string() + " --out " + out) == kExitValidation);

  CHECK(tool("run " + cfg + " --out " + out) == kExitOk);
  json report = json::parse(read_file(out));
  report["body"]["probes"][0]["result"]["witness"]["value"] = "5";
  {
    std::ofstream tampered(dir / "tampered.json");
    tampered << report.dump();
  }
  CHECK(tool("verify " + (dir / "tampered.json").string()) == kExitVerifyFailed);
  {
    std::ofstream junk(dir / "junk.json");
    junk << "{ not json";
  }
  CHECK(tool("verify " + (dir / "junk.json").string()) == kExitValidation);
  std::filesystem::remove_all(dir);
}
