#pragma once

#include "qbns/cli/config.hpp"
#include "qbns/cli/report.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qbns::cli {

/// Collects certificate outcomes for one probe; exceptions count as failures.
class Checks {
 public:
  Checks(std::string probe, std::vector<CertificateCheck>& out) : probe_(std::move(probe)), out_(out) {}

  void expect(const std::string& certificate, bool ok, const std::string& detail = {});
  /// Runs f; a false return or any exception fails the certificate.
  void attempt(const std::string& certificate, const std::function<bool()>& f, const std::string& detail = {});

 private:
  std::string probe_;
  std::vector<CertificateCheck>& out_;
};

class Probe {
 public:
  virtual ~Probe() = default;
  /// The validated parameters, normalized.
  virtual nlohmann::json params() const = 0;
  virtual nlohmann::json run() const = 0;
  /// Replays the certificates in a result produced by run().
  virtual void verify(const nlohmann::json& result, Checks& checks) const = 0;
};

/// Validates a [probe] section against its kind; throws ConfigError.
std::unique_ptr<Probe> make_probe(const ConfigSection& section, const Definitions& defs);

struct ProbeKind {
  std::string kind;
  std::string explanation;
};
const std::vector<ProbeKind>& probe_catalog();

}  // namespace qbns::cli
