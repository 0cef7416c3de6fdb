#pragma once

// Experiment configuration files.
//
// Grammar (one construct per line, '#' or ';' starts a comment):
//
//   file    := (blank | comment | header | entry)*
//   header  := '[' kind (' ' name)? ']'        kind in {group, phi, probe, output}
//   entry   := key '=' value                     key is [a-z0-9-]+, value runs to end of line
//
// A [group] section comes first; [phi NAME] and [probe NAME] sections may
// repeat; [output] is optional. Values are trimmed; nothing is quoted.

#include "qbns/group.hpp"
#include "qbns/quasimorphism.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbns::cli {

/// A malformed file (line/column) or a violated precondition (naming the key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // of the value
};

struct ConfigSection {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view key) const;
};

struct RawConfig {
  std::vector<ConfigSection> sections;
};

/// Syntax only; throws ConfigError with the position of the first problem.
RawConfig parse_config(std::string_view text);
/// The canonical text of a parsed file (parse_config(render(c)) == c up to positions).
std::string render_config(const RawConfig& config);

/// Typed access to one section's entries; every key must be consumed.
class SectionReader {
 public:
  explicit SectionReader(const ConfigSection& section);

  bool has(std::string_view key) const;
  std::string text(std::string_view key);
  std::optional<std::string> optional_text(std::string_view key);
  std::int64_t integer(std::string_view key);
  std::int64_t integer(std::string_view key, std::int64_t fallback);
  ExactReal exact(std::string_view key);
  std::optional<ExactReal> optional_exact(std::string_view key);
  bool boolean(std::string_view key, bool fallback);
  std::vector<std::string> list(std::string_view key);

  /// ConfigError at the entry for `key` (or at the section header).
  [[noreturn]] void fail(std::string_view key, const std::string& message) const;
  /// Rejects keys that were never read.
  void finish() const;

  const ConfigSection& section() const { return section_; }

 private:
  const ConfigEntry& entry(std::string_view key);
  const ConfigSection& section_;
  std::map<std::string, bool, std::less<>> used_;
};

/// Group and quasimorphism definitions shared by every probe.
struct Definitions {
  GroupModel model = GroupModel::free_group(1);
  std::map<std::string, Quasimorphism, std::less<>> phis;
};

/// Builds the [group] and [phi ...] sections; ball_cap overrides the file.
Definitions load_definitions(const RawConfig& config, std::optional<std::size_t> ball_cap);

}  // namespace qbns::cli
