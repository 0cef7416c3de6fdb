#include "qbns/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace qbns::cli {

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

const ConfigEntry* ConfigSection::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

namespace {

constexpr std::string_view kSectionKinds[] = {"group", "phi", "probe", "output"};

bool is_key_char(char ch) {
  return std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '-';
}

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

std::size_t trim_end(std::string_view s, std::size_t end) {
  while (end > 0 && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return end;
}

}  // namespace

RawConfig parse_config(std::string_view text) {
  RawConfig out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    // Comments run to end of line.
    if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    const std::size_t begin = skip_space(line, 0);
    const std::size_t end = trim_end(line, line.size());
    if (begin >= end) continue;
    const auto col = [&](std::size_t i) { return i + 1; };

    if (line[begin] == '[') {
      if (line[end - 1] != ']') throw ConfigError("section header must end with ']'", line_no, col(end - 1));
      const std::string_view inner = line.substr(begin + 1, end - begin - 2);
      const std::size_t ib = skip_space(inner, 0);
      std::size_t ie = ib;
      while (ie < inner.size() && is_key_char(inner[ie])) ++ie;
      ConfigSection section;
      section.kind = std::string(inner.substr(ib, ie - ib));
      section.line = line_no;
      if (std::find(std::begin(kSectionKinds), std::end(kSectionKinds), section.kind) == std::end(kSectionKinds))
        throw ConfigError("unknown section '" + section.kind + "' (expected group, phi, probe or output)", line_no,
                          col(begin + 1 + ib));
      const std::size_t nb = skip_space(inner, ie);
      const std::size_t ne = trim_end(inner, inner.size());
      if (nb < ne) {
        if (nb == ie) throw ConfigError("expected a space before the section name", line_no, col(begin + 1 + ie));
        section.name = std::string(inner.substr(nb, ne - nb));
        for (std::size_t k = 0; k < section.name.size(); ++k)
          if (!is_key_char(section.name[k]) && !std::isupper(static_cast<unsigned char>(section.name[k])) &&
              section.name[k] != '_')
            throw ConfigError("invalid character in section name", line_no, col(begin + 1 + nb + k));
      }
      const bool named = section.kind == "phi" || section.kind == "probe";
      if (named && section.name.empty())
        throw ConfigError("[" + section.kind + "] sections need a name", line_no, col(begin));
      if (!named && !section.name.empty())
        throw ConfigError("[" + section.kind + "] sections take no name", line_no, col(begin + 1 + nb));
      if (section.kind == "group" && !out.sections.empty())
        throw ConfigError("[group] must be the first section", line_no, col(begin));
      if (section.kind != "group" && out.sections.empty())
        throw ConfigError("the file must start with a [group] section", line_no, col(begin));
      for (const auto& s : out.sections)
        if (s.kind == section.kind && s.name == section.name)
          throw ConfigError("duplicate section [" + section.kind + (section.name.empty() ? "" : " " + section.name) +
                                "] (first at line " + std::to_string(s.line) + ")",
                            line_no, col(begin));
      out.sections.push_back(std::move(section));
      continue;
    }

    std::size_t ke = begin;
    while (ke < end && is_key_char(line[ke])) ++ke;
    if (ke == begin) throw ConfigError("expected a key or a section header", line_no, col(begin));
    const std::size_t eq = skip_space(line, ke);
    if (eq >= end || line[eq] != '=') throw ConfigError("expected '=' after the key", line_no, col(eq));
    if (out.sections.empty()) throw ConfigError("entry outside any section", line_no, col(begin));
    const std::size_t vb = skip_space(line, eq + 1);
    if (vb >= end) throw ConfigError("empty value", line_no, col(eq + 1));
    ConfigEntry entry{std::string(line.substr(begin, ke - begin)), std::string(line.substr(vb, end - vb)), line_no,
                      col(vb)};
    auto& section = out.sections.back();
    if (const auto* prev = section.find(entry.key))
      throw ConfigError("duplicate key '" + entry.key + "' (first at line " + std::to_string(prev->line) + ")",
                        line_no, col(begin));
    section.entries.push_back(std::move(entry));
  }
  if (out.sections.empty()) throw ConfigError("empty configuration: a [group] section is required", line_no, 1);
  return out;
}

std::string render_config(const RawConfig& config) {
  std::ostringstream os;
  for (std::size_t i = 0; i < config.sections.size(); ++i) {
    const auto& s = config.sections[i];
    if (i) os << '\n';
    os << '[' << s.kind << (s.name.empty() ? "" : " " + s.name) << "]\n";
    for (const auto& e : s.entries) os << e.key << " = " << e.value << '\n';
  }
  return os.str();
}

SectionReader::SectionReader(const ConfigSection& section) : section_(section) {
  for (const auto& e : section.entries) used_.emplace(e.key, false);
}

bool SectionReader::has(std::string_view key) const { return section_.find(key) != nullptr; }

void SectionReader::fail(std::string_view key, const std::string& message) const {
  const std::string where = "[" + section_.kind + (section_.name.empty() ? "" : " " + section_.name) + "] ";
  if (const auto* e = section_.find(key)) throw ConfigError(where + std::string(key) + ": " + message, e->line, e->column);
  throw ConfigError(where + message, section_.line, 1);
}

const ConfigEntry& SectionReader::entry(std::string_view key) {
  const auto* e = section_.find(key);
  if (!e) fail(key, "missing required key '" + std::string(key) + "'");
  used_.find(key)->second = true;
  return *e;
}

std::string SectionReader::text(std::string_view key) { return entry(key).value; }

std::optional<std::string> SectionReader::optional_text(std::string_view key) {
  if (!has(key)) return std::nullopt;
  return text(key);
}

std::int64_t SectionReader::integer(std::string_view key) {
  const std::string& v = entry(key).value;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
  return out;
}

std::int64_t SectionReader::integer(std::string_view key, std::int64_t fallback) {
  return has(key) ? integer(key) : fallback;
}

ExactReal SectionReader::exact(std::string_view key) {
  const std::string& v = entry(key).value;
  try {
    return ExactReal::parse(v);
  } catch (const std::exception& e) {
    fail(key, "expected an exact number like 3/2 or 1/2+1*sqrt(2), got '" + v + "'");
  }
}

std::optional<ExactReal> SectionReader::optional_exact(std::string_view key) {
  if (!has(key)) return std::nullopt;
  return exact(key);
}

bool SectionReader::boolean(std::string_view key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string& v = entry(key).value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

std::vector<std::string> SectionReader::list(std::string_view key) {
  const std::string& v = entry(key).value;
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.find(',', start);
    std::string_view item = std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t b = skip_space(item, 0);
    const std::size_t e = trim_end(item, item.size());
    if (b >= e) fail(key, "empty list item");
    out.emplace_back(item.substr(b, e - b));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void SectionReader::finish() const {
  for (const auto& e : section_.entries)
    if (!used_.find(e.key)->second)
      throw ConfigError("[" + section_.kind + (section_.name.empty() ? "" : " " + section_.name) + "] unknown key '" +
                            e.key + "'",
                        e.line, e.column);
}

namespace {

GroupModel load_group(const ConfigSection& section, std::optional<std::size_t> ball_cap) {
  SectionReader r(section);
  const std::string kind = r.text("kind");
  const std::int64_t rank = r.integer("rank");
  if (rank < 1 || rank > 26) r.fail("rank", "rank must be between 1 and 26");
  std::int64_t abelian = 0;
  if (kind == "free-times-abelian") {
    abelian = r.integer("abelian-rank");
    if (abelian < 1 || rank + abelian > 26) r.fail("abelian-rank", "abelian rank must be >= 1 with rank + abelian rank <= 26");
  } else if (kind != "free") {
    r.fail("kind", "expected 'free' or 'free-times-abelian', got '" + kind + "'");
  }
  const std::string names = r.optional_text("names").value_or("");
  const std::int64_t cap = r.integer("ball-cap", static_cast<std::int64_t>(GroupModel::kDefaultBallCap));
  if (cap < 0) r.fail("ball-cap", "ball cap must be >= 0");
  r.finish();
  try {
    GroupModel m = abelian == 0 ? GroupModel::free_group(static_cast<int>(rank), names)
                                : GroupModel::free_times_abelian(static_cast<int>(rank), static_cast<int>(abelian), names);
    return m.with_ball_cap(ball_cap.value_or(static_cast<std::size_t>(cap)));
  } catch (const std::invalid_argument& e) {
    r.fail("names", e.what());
  }
}

Quasimorphism load_phi(const GroupModel& model, const ConfigSection& section,
                       const std::map<std::string, Quasimorphism, std::less<>>& known) {
  SectionReader r(section);
  const std::string type = r.text("type");
  auto lookup = [&](std::string_view key, const std::string& name) -> const Quasimorphism& {
    auto it = known.find(name);
    if (it == known.end()) r.fail(key, "unknown quasimorphism '" + name + "' (define it in an earlier [phi] section)");
    return it->second;
  };
  std::optional<Quasimorphism> phi;
  if (type == "hom") {
    std::vector<ExactReal> values;
    for (const auto& item : r.list("values")) {
      try {
        values.push_back(ExactReal::parse(item));
      } catch (const std::exception&) {
        r.fail("values", "expected exact numbers, got '" + item + "'");
      }
    }
    if (static_cast<int>(values.size()) != model.generator_count())
      r.fail("values", "expected " + std::to_string(model.generator_count()) + " values, one per generator");
    phi = Quasimorphism::homomorphism(std::move(values));
  } else if (type == "brooks") {
    const std::string word = r.text("word");
    try {
      phi = Quasimorphism::brooks(model.parse_word(word));
    } catch (const std::exception& e) {
      r.fail("word", e.what());
    }
  } else if (type == "combination") {
    // terms = 2 psi, -1/2 chi
    std::vector<std::pair<ExactReal, Quasimorphism>> terms;
    for (const auto& item : r.list("terms")) {
      const auto space = item.find(' ');
      if (space == std::string::npos) r.fail("terms", "expected 'coefficient name', got '" + item + "'");
      ExactReal coeff;
      try {
        coeff = ExactReal::parse(item.substr(0, space));
      } catch (const std::exception&) {
        r.fail("terms", "bad coefficient in '" + item + "'");
      }
      std::string name = item.substr(item.find_first_not_of(' ', space));
      terms.emplace_back(coeff, lookup("terms", name));
    }
    phi = Quasimorphism::combination(std::move(terms));
  } else if (type == "homogenized") {
    phi = Quasimorphism::homogenized(lookup("base", r.text("base")));
  } else {
    r.fail("type", "expected hom, brooks, combination or homogenized, got '" + type + "'");
  }
  r.finish();
  try {
    phi->validate(model);
  } catch (const std::exception& e) {
    r.fail("type", e.what());
  }
  return *phi;
}

}  // namespace

Definitions load_definitions(const RawConfig& config, std::optional<std::size_t> ball_cap) {
  Definitions defs;
  defs.model = load_group(config.sections.front(), ball_cap);
  for (const auto& s : config.sections)
    if (s.kind == "phi") defs.phis.emplace(s.name, load_phi(defs.model, s, defs.phis));
  return defs;
}

}  // namespace qbns::cli
