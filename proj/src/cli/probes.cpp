#include "probes.hpp"

#include "qbns/kernels.hpp"
#include "qbns/novikov.hpp"
#include "qbns/path.hpp"
#include "qbns/rips.hpp"
#include "qbns/sigma.hpp"

#include <algorithm>
#include <random>

namespace qbns::cli {

using nlohmann::json;

void Checks::expect(const std::string& certificate, bool ok, const std::string& detail) {
  out_.push_back(CertificateCheck{probe_, certificate, ok, detail});
}

void Checks::attempt(const std::string& certificate, const std::function<bool()>& f, const std::string& detail) {
  try {
    expect(certificate, f(), detail);
  } catch (const std::exception& e) {
    expect(certificate, false, e.what());
  }
}

namespace {

// ---- serialization -------------------------------------------------------

std::string jx(const ExactReal& x) { return x.to_string(); }
ExactReal px(const json& j) { return ExactReal::parse(j.get<std::string>()); }
std::string ji(const Integer& i) { return i.str(); }
Integer pi(const json& j) { return Integer(j.get<std::string>()); }

json jel(const GroupModel& m, const GroupElement& g) { return m.format(g); }
GroupElement pel(const GroupModel& m, const json& j) { return m.parse(j.get<std::string>()); }

json jpath(const GroupModel& m, const Path& p) {
  json out = json::array();
  for (const auto& v : p.vertices()) out.push_back(m.format(v));
  return out;
}

Path ppath(const GroupModel& m, const json& j) {
  std::vector<GroupElement> v;
  for (const auto& x : j) v.push_back(pel(m, x));
  if (v.empty()) throw ReportError("empty path");
  return Path(m, std::move(v));
}

json jgen(const GroupModel& m, Generator s) { return std::string(1, m.letter(s)); }

Generator pgen(const GroupModel& m, const std::string& text) {
  const auto w = m.parse_word(text);
  if (w.size() != 1) throw PreconditionError("expected a single generator letter, got '" + text + "'");
  return w.front();
}

std::uint16_t positive_index(const GroupModel& m, char letter) {
  const Generator s = pgen(m, std::string(1, letter));
  if (s.inverse) throw ReportError(std::string("cell letters must be positive generators, got ") + letter);
  return s.index;
}

template <class Cell>
json jchain(const CayleyTwoComplex& cx, const WindowedChain<Cell>& chain) {
  json out = json::array();
  for (const auto& [cell, k] : chain.terms) out.push_back(json::array({cx.format(cell), ji(k)}));
  return out;
}

std::pair<GroupElement, std::string> split_cell(const GroupModel& m, const std::string& text) {
  const auto bar = text.rfind('|');
  if (bar == std::string::npos) throw ReportError("malformed cell '" + text + "'");
  return {m.parse(text.substr(0, bar)), text.substr(bar + 1)};
}

EdgeCell pedge(const GroupModel& m, const std::string& text) {
  auto [g, letters] = split_cell(m, text);
  if (letters.size() != 1) throw ReportError("malformed edge '" + text + "'");
  return EdgeCell{std::move(g), positive_index(m, letters[0])};
}

SquareCell psquare(const GroupModel& m, const std::string& text) {
  auto [g, letters] = split_cell(m, text);
  if (letters.size() != 2) throw ReportError("malformed square '" + text + "'");
  return SquareCell{std::move(g), positive_index(m, letters[0]), positive_index(m, letters[1])};
}

Chain1 pchain1(const GroupModel& m, const json& j, const Window& w) {
  Chain1 out{{}, w};
  for (const auto& t : j) out.add(pedge(m, t.at(0).get<std::string>()), pi(t.at(1)));
  return out;
}

Chain2 pchain2(const GroupModel& m, const json& j, const Window& w) {
  Chain2 out{{}, w};
  for (const auto& t : j) out.add(psquare(m, t.at(0).get<std::string>()), pi(t.at(1)));
  return out;
}

json jbundle(const ConstantsBundle& b) {
  return {{"defect", jx(b.defect)}, {"k_prime", jx(b.k_prime)},       {"n", ji(b.n)},
          {"N", jx(b.big_n)},       {"M", jx(b.m)},                    {"C", b.c_length},
          {"max_phi_st", jx(b.max_phi_st)}, {"max_abs_phi_s", jx(b.max_abs_phi_s)}};
}

json jlibrary(const GroupModel& m, const QLibrary& lib) {
  json entries = json::array();
  for (const auto& e : lib.entries) {
    json j{{"s", jgen(m, e.s)}, {"t", jgen(m, e.t)}, {"verified", e.verified}};
    if (e.q) {
      j["q"] = jpath(m, *e.q);
      j["q_inner"] = jpath(m, *e.q_inner);
      j["min_phi"] = jx(e.min_phi);
      j["max_essential_phi"] = jx(e.max_essential_phi);
    }
    if (!e.failure.empty()) j["failure"] = e.failure;
    entries.push_back(std::move(j));
  }
  return {{"c", jel(m, lib.c)}, {"n", ji(lib.n)}, {"radius", lib.radius}, {"complete", lib.complete()},
          {"entries", std::move(entries)}};
}

/// Rebuilds a library from a report and checks every entry without searching.
QLibrary replay_library(const GroupModel& m, const Quasimorphism& phi, const ExactReal& defect, const GroupElement& c,
                        const Integer& n, const json& j, Checks& checks) {
  QLibrary lib{c, n, defect, j.at("radius").get<std::size_t>(), {}};
  checks.expect("library-parameters", pel(m, j.at("c")) == c && pi(j.at("n")) == n);
  const auto& gens = m.symmetric_generators();
  std::size_t k = 0;
  for (const auto& e : j.at("entries")) {
    QLibraryEntry entry{pgen(m, e.at("s").get<std::string>()), pgen(m, e.at("t").get<std::string>()), {}, {}, {}, {}, false, {}};
    const std::string name = "q[" + e.at("s").get<std::string>() + e.at("t").get<std::string>() + "]";
    const bool in_order = k < gens.size() * gens.size() && entry.s == gens[k / gens.size()] && entry.t == gens[k % gens.size()];
    ++k;
    if (e.contains("q")) {
      checks.attempt(name, [&] {
        entry.q = ppath(m, e.at("q"));
        entry.q_inner = ppath(m, e.at("q_inner"));
        entry.min_phi = phi_extrema(m, phi, *entry.q).min;
        entry.max_essential_phi = px(e.at("max_essential_phi"));
        entry.verified = verify_q_entry(m, phi, lib, entry);
        return in_order && entry.verified == e.at("verified").get<bool>() && entry.min_phi == px(e.at("min_phi"));
      });
    } else {
      entry.failure = e.value("failure", "missing");
      checks.expect(name, in_order && !e.at("verified").get<bool>(), "no path recorded: " + entry.failure);
    }
    lib.entries.push_back(std::move(entry));
  }
  checks.expect("library-size", lib.entries.size() == gens.size() * gens.size());
  checks.expect("library-complete", lib.complete() == j.at("complete").get<bool>());
  return lib;
}

// ---- parameter reading -----------------------------------------------------

struct Context {
  GroupModel model;
  Quasimorphism phi;
};

Quasimorphism read_phi(SectionReader& r, const Definitions& defs, bool need_homogeneous = true) {
  const std::string name = r.text("phi");
  auto it = defs.phis.find(name);
  if (it == defs.phis.end()) r.fail("phi", "unknown quasimorphism '" + name + "'");
  if (need_homogeneous && !it->second.has_exact_homogenization())
    r.fail("phi", "this probe needs phi-bar exactly; '" + name + "' has no exact homogenization");
  return it->second;
}

GroupElement read_element(SectionReader& r, const GroupModel& m, std::string_view key) {
  const std::string text = r.text(key);
  try {
    return m.parse(text);
  } catch (const std::exception& e) {
    r.fail(key, e.what());
  }
}

std::size_t read_count(SectionReader& r, std::string_view key, std::optional<std::int64_t> fallback = std::nullopt,
                       std::int64_t min_value = 0) {
  const std::int64_t v = fallback && !r.has(key) ? *fallback : r.integer(key);
  if (v < min_value) r.fail(key, "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

ExactReal read_defect(SectionReader& r, bool positive) {
  const ExactReal d = r.exact("defect");
  if (positive ? d.sign() <= 0 : d.sign() < 0) r.fail("defect", positive ? "D* must be > 0" : "D* must be >= 0");
  return d;
}

template <class F>
auto precondition(SectionReader& r, std::string_view key, F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    r.fail(key, e.what());
  } catch (const ModelMismatch& e) {
    r.fail(key, e.what());
  }
}

ExactReal max_abs_generator_value(const GroupModel& m, const Quasimorphism& phi) {
  ExactReal out{0};
  for (Generator s : m.symmetric_generators()) out = max(out, phi.homogeneous_value(m, m.element(s)).abs());
  return out;
}

// ---- defect ----------------------------------------------------------------

class DefectProbe : public Probe {
 public:
  DefectProbe(SectionReader& r, const Definitions& d)
      : m_(d.model), phi_(read_phi(r, d, false)), radius_(read_count(r, "radius")), upper_(r.optional_exact("upper")) {
    if (upper_ && upper_->sign() < 0) r.fail("upper", "a defect bound must be >= 0");
  }
  json params() const override {
    json j{{"phi", phi_.describe(m_)}, {"radius", radius_}};
    if (upper_) j["upper"] = jx(*upper_);
    return j;
  }
  json run() const override {
    const auto est = defect_lower_bound(m_, phi_, radius_, upper_);
    return {{"lower", jx(est.lower)},
            {"upper", est.upper ? json(jx(*est.upper)) : json(nullptr)},
            {"witness",
             {{"kind", est.witness.kind == DefectWitnessKind::Commutator ? "commutator" : "three-term"},
              {"g", jel(m_, est.witness.g)},
              {"h", jel(m_, est.witness.h)},
              {"value", jx(est.witness.value)}}},
            {"provenance", est.provenance}};
  }
  void verify(const json& r, Checks& checks) const override {
    checks.attempt("defect-witness", [&] {
      const auto& w = r.at("witness");
      const std::string kind = w.at("kind").get<std::string>();
      if (kind != "commutator" && kind != "three-term") return false;
      if (kind == "commutator" && !phi_.is_homogeneous()) return false;
      const DefectWitness dw{kind == "commutator" ? DefectWitnessKind::Commutator : DefectWitnessKind::ThreeTerm,
                             pel(m_, w.at("g")), pel(m_, w.at("h")), px(w.at("value"))};
      return dw.g.length() <= radius_ && dw.h.length() <= radius_ && witness_value(m_, phi_, dw) == dw.value &&
             dw.value == px(r.at("lower"));
    });
    checks.attempt("defect-upper", [&] {
      if (r.at("upper").is_null()) return !upper_ && !phi_.known_defect_upper();
      const ExactReal u = px(r.at("upper"));
      const auto expected = upper_ ? upper_ : phi_.known_defect_upper();
      return expected && u == *expected && !(u < px(r.at("lower")));
    });
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  std::size_t radius_;
  std::optional<ExactReal> upper_;
};

// ---- aker-cert ---------------------------------------------------------------

class AkerProbe : public Probe {
 public:
  AkerProbe(SectionReader& r, const Definitions& d)
      : m_(d.model), phi_(read_phi(r, d)), defect_(read_defect(r, false)), radius_(read_count(r, "radius")) {
    const std::string c = r.optional_text("c").value_or(defect_.sign() == 0 ? "1" : "auto");
    if (c == "auto") {
      if (defect_.sign() == 0) r.fail("c", "a scaling element needs D* > 0");
      scaling_radius_ = read_count(r, "scaling-radius", 2);
    } else {
      c_ = read_element(r, m_, "c");
    }
  }
  json params() const override {
    json j{{"phi", phi_.describe(m_)}, {"defect", jx(defect_)}, {"radius", radius_}};
    if (c_) j["c"] = jel(m_, *c_);
    else j["scaling_radius"] = scaling_radius_;
    return j;
  }
  json run() const override {
    json out;
    GroupElement c;
    if (c_) {
      c = *c_;
    } else {
      const auto s = find_scaling_element(m_, phi_, defect_, scaling_radius_);
      if (!s)
        throw PreconditionError("no commutator [g,h] in ball(" + std::to_string(scaling_radius_) +
                                ")^2 with 4D*/5 < phi-bar <= D*");
      c = s->c;
      out["scaling"] = {{"g", jel(m_, s->g)}, {"h", jel(m_, s->h)}, {"value", jx(s->value)}};
    }
    const auto cert = certify_aker_approximate_subgroup(m_, phi_, defect_, c, radius_);
    out["c"] = jel(m_, c);
    out["max_shift"] = cert.max_shift;
    for (const auto& x : cert.subset.witnesses) out["witnesses"].push_back(jel(m_, x));
    out["members"] = json::array();
    for (const auto& g : cert.members) out["members"].push_back(jel(m_, g));
    out["shifts"] = json::array();
    for (int s : cert.shifts) out["shifts"].push_back(std::abs(s) <= cert.max_shift ? json(s) : json(nullptr));
    out["counterexamples"] = json::array();
    for (const auto& [i, j] : cert.counterexamples) out["counterexamples"].push_back(json::array({i, j}));
    out["passed"] = cert.passed();
    return out;
  }
  void verify(const json& r, Checks& checks) const override {
    const LevelSubset aker{phi_, LevelMode::Aker, defect_};
    GroupElement c;
    checks.attempt("scaling-element", [&] {
      c = pel(m_, r.at("c"));
      if (c_) return c == *c_;
      const auto& s = r.at("scaling");
      const ExactReal v = phi_.homogeneous_value(m_, c);
      return c == m_.commutator(pel(m_, s.at("g")), pel(m_, s.at("h"))) && v == px(s.at("value")) &&
             ExactReal(4) * defect_ / ExactReal(5) < v && v <= defect_;
    });
    const int max_shift = r.at("max_shift").get<int>();
    checks.attempt("witness-set", [&] {
      std::vector<GroupElement> x;
      for (const auto& w : r.at("witnesses")) x.push_back(pel(m_, w));
      std::vector<GroupElement> expected;
      for (int k = max_shift; k >= -max_shift; --k) expected.push_back(m_.power(c, k));
      return max_shift == (defect_.sign() == 0 ? 0 : 5) && x == expected;
    });
    std::vector<GroupElement> members;
    checks.attempt("members", [&] {
      for (const auto& g : r.at("members")) members.push_back(pel(m_, g));
      std::vector<GroupElement> expected;
      for (auto& g : m_.ball(radius_))
        if (aker.contains(m_, g)) expected.push_back(std::move(g));
      return members == expected;
    });
    const std::size_t n = members.size();
    checks.attempt("shifts", [&] {
      const auto& shifts = r.at("shifts");
      if (shifts.size() != n * n) return false;
      const auto ok = kernels::parallel::map_range(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto& s = shifts[i * n + j];
          if (s.is_null()) continue;
          const int k = s.get<int>();
          if (std::abs(k) > max_shift ||
              !aker.contains(m_, m_.multiply(m_.multiply(members[i], members[j]), m_.power(c, k))))
            return false;
        }
        return true;
      });
      return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
    });
    checks.attempt("counterexamples", [&] {
      const auto& shifts = r.at("shifts");
      std::size_t nulls = 0;
      for (const auto& s : shifts) nulls += s.is_null();
      const auto& ce = r.at("counterexamples");
      if (ce.size() != nulls) return false;
      for (const auto& p : ce) {
        const auto i = p.at(0).get<std::size_t>(), j = p.at(1).get<std::size_t>();
        if (i >= n || j >= n || !shifts[i * n + j].is_null()) return false;
        for (int k = -max_shift; k <= max_shift; ++k)
          if (aker.contains(m_, m_.multiply(m_.multiply(members[i], members[j]), m_.power(c, k)))) return false;
      }
      return r.at("passed").get<bool>() == ce.empty();
    });
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  ExactReal defect_;
  std::size_t radius_;
  std::optional<GroupElement> c_;
  std::size_t scaling_radius_ = 0;
};

// ---- rips-profile --------------------------------------------------------------

json jcert(const ComponentCertificate& c, std::size_t parameter) {
  json parent = json::array();
  for (const auto& p : c.parent) parent.push_back(p ? json(*p) : json(nullptr));
  return {{"parameter", parameter}, {"count", c.count}, {"component", c.component}, {"parent", std::move(parent)}};
}

ComponentCertificate pcert(const json& j) {
  ComponentCertificate c;
  c.component = j.at("component").get<std::vector<std::size_t>>();
  for (const auto& p : j.at("parent")) c.parent.push_back(p.is_null() ? std::nullopt : std::optional(p.get<std::size_t>()));
  c.count = j.at("count").get<std::size_t>();
  return c;
}

class RipsProbe : public Probe {
 public:
  RipsProbe(SectionReader& r, const Definitions& d) : m_(d.model), max_parameter_(read_count(r, "max-parameter", {}, 1)) {
    if (r.has("vertices")) {
      for (const auto& v : r.list("vertices")) {
        try {
          explicit_.push_back(m_.parse(v));
        } catch (const std::exception& e) {
          r.fail("vertices", e.what());
        }
      }
      return;
    }
    phi_ = read_phi(r, d);
    const std::string mode = r.optional_text("mode").value_or("aker");
    if (mode != "aker" && mode != "positive") r.fail("mode", "expected aker or positive");
    mode_ = mode == "aker" ? LevelMode::Aker : LevelMode::Positive;
    defect_ = mode_ == LevelMode::Aker ? read_defect(r, false) : ExactReal(0);
    radius_ = read_count(r, "radius");
  }
  json params() const override {
    json j{{"max_parameter", max_parameter_}};
    if (phi_) {
      j["phi"] = phi_->describe(m_);
      j["mode"] = mode_ == LevelMode::Aker ? "aker" : "positive";
      j["defect"] = jx(defect_);
      j["radius"] = radius_;
    } else {
      for (const auto& g : explicit_) j["vertices"].push_back(jel(m_, g));
    }
    return j;
  }
  std::vector<GroupElement> subset() const {
    if (!phi_) return explicit_;
    std::vector<GroupElement> out;
    const LevelSubset level{*phi_, mode_, defect_};
    for (auto& g : m_.ball(radius_))
      if (level.contains(m_, g)) out.push_back(std::move(g));
    return out;
  }
  json run() const override {
    const auto sub = subset();
    const auto p = connectivity_profile(m_, sub, max_parameter_);
    json out{{"counts", p.component_counts}, {"monotone", p.monotone()}};
    for (const auto& v : p.vertices) out["vertices"].push_back(jel(m_, v));
    out["threshold"] = p.threshold ? json(*p.threshold) : json(nullptr);
    out["connected"] = p.connected_witness ? jcert(*p.connected_witness, *p.threshold) : json(nullptr);
    const std::size_t sep = p.threshold ? *p.threshold - 1 : max_parameter_;
    out["separated"] = p.separated_witness ? jcert(*p.separated_witness, sep) : json(nullptr);
    return out;
  }
  void verify(const json& r, Checks& checks) const override {
    std::vector<GroupElement> verts;
    checks.attempt("vertices", [&] {
      for (const auto& v : r.at("vertices")) verts.push_back(pel(m_, v));
      auto expected = subset();
      std::sort(expected.begin(), expected.end());
      expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
      return verts == expected;
    });
    const auto counts = r.at("counts").get<std::vector<std::size_t>>();
    checks.attempt("counts", [&] {
      bool mono = true;
      for (std::size_t k = 1; k < counts.size(); ++k) mono = mono && counts[k] <= counts[k - 1];
      return counts.size() == max_parameter_ && mono == r.at("monotone").get<bool>();
    });
    const auto& threshold = r.at("threshold");
    if (!r.at("connected").is_null())
      checks.attempt("connected-forest", [&] {
        const auto c = pcert(r.at("connected"));
        const auto n = r.at("connected").at("parameter").get<std::size_t>();
        return !threshold.is_null() && n == threshold.get<std::size_t>() && c.count <= 1 &&
               counts.at(n - 1) == c.count && verify_components(m_, verts, n, c);
      });
    else
      checks.expect("connected-forest", threshold.is_null(), "no connected parameter recorded");
    if (!r.at("separated").is_null())
      checks.attempt("separation", [&] {
        const auto c = pcert(r.at("separated"));
        const auto n = r.at("separated").at("parameter").get<std::size_t>();
        const bool placed = threshold.is_null() ? n == max_parameter_ : n + 1 == threshold.get<std::size_t>();
        return placed && c.count > 1 && counts.at(n - 1) == c.count && verify_components(m_, verts, n, c) &&
               verify_separation(m_, verts, n, c);
      });
  }

 private:
  GroupModel m_;
  std::size_t max_parameter_;
  std::vector<GroupElement> explicit_;
  std::optional<Quasimorphism> phi_;
  LevelMode mode_ = LevelMode::Aker;
  ExactReal defect_;
  std::size_t radius_ = 0;
};

// ---- path-search -----------------------------------------------------------------

class PathSearchProbe : public Probe {
 public:
  PathSearchProbe(SectionReader& r, const Definitions& d)
      : m_(d.model),
        phi_(read_phi(r, d)),
        from_(read_element(r, m_, "from")),
        to_(read_element(r, m_, "to")),
        radius_(read_count(r, "radius")) {
    const ExactReal k = r.exact("k");
    if (auto upper = r.optional_exact("k-max")) mode_ = TwoSided{k, *upper};
    else mode_ = LowerOnly{k};
  }
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"from", jel(m_, from_)}, {"to", jel(m_, to_)}, {"radius", radius_},
            {"constraint", constraint_for(mode_).describe()}};
  }
  json run() const override {
    const auto res = bounded_path_search(m_, phi_, from_, to_, mode_, radius_);
    if (const auto* w = std::get_if<PathWitness>(&res))
      return {{"found", true}, {"path", jpath(m_, w->path)}, {"min", jx(w->min_phi)}, {"max", jx(w->max_phi)}};
    const auto& nf = std::get<NotFoundWithinBall>(res);
    return {{"found", false}, {"radius", nf.radius}, {"explored", nf.explored}, {"constraint", nf.constraint.describe()}};
  }
  void verify(const json& r, Checks& checks) const override {
    if (!r.at("found").get<bool>()) {
      checks.expect("not-found", r.at("radius").get<std::size_t>() == radius_,
                    "evidence at the stated radius only; nothing to replay");
      return;
    }
    checks.attempt("path-witness", [&] {
      const Path p = ppath(m_, r.at("path"));
      const PathWitness w{p, px(r.at("min")), px(r.at("max")), radius_};
      const auto constraint = constraint_for(mode_);
      for (const auto& v : p.vertices())
        if (v.length() > radius_ || !constraint.admits(phi_.homogeneous_value(m_, v))) return false;
      return replay_witness(m_, phi_, w, from_, to_);
    });
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  GroupElement from_, to_;
  std::size_t radius_;
  SearchMode mode_;
};

// ---- q-library and peak-reduce -----------------------------------------------------

class LibraryProbe : public Probe {
 public:
  LibraryProbe(SectionReader& r, const Definitions& d, std::string_view radius_key)
      : m_(d.model),
        phi_(read_phi(r, d)),
        defect_(read_defect(r, true)),
        k_prime_(r.exact("k-prime")),
        c_(read_element(r, m_, "c")),
        radius_(read_count(r, radius_key)) {
    bundle_ = precondition(r, "k-prime", [&] { return compute_constants(m_, phi_, defect_, k_prime_, c_); });
    if (c_.is_identity()) r.fail("c", "c must be non-trivial");
  }
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"defect", jx(defect_)}, {"k_prime", jx(k_prime_)}, {"c", jel(m_, c_)},
            {"library_radius", radius_}};
  }
  json run() const override {
    ConstantsBundle b = bundle_;
    const QLibrary lib = q_library(m_, phi_, defect_, c_, b.n, radius_);
    if (lib.complete()) refine_bundle(b, lib);
    return {{"constants", jbundle(b)}, {"library", jlibrary(m_, lib)}};
  }
  void verify(const json& r, Checks& checks) const override { replay(r, checks); }

 protected:
  /// Checks constants and library; returns the replayed pair.
  std::pair<ConstantsBundle, QLibrary> replay(const json& r, Checks& checks) const {
    ConstantsBundle b = bundle_;
    QLibrary lib = replay_library(m_, phi_, defect_, c_, b.n, r.at("library"), checks);
    if (lib.complete()) refine_bundle(b, lib);
    checks.attempt("constants", [&] { return r.at("constants") == jbundle(b); });
    return {b, std::move(lib)};
  }

  GroupModel m_;
  Quasimorphism phi_;
  ExactReal defect_, k_prime_;
  GroupElement c_;
  std::size_t radius_;
  ConstantsBundle bundle_;
};

class PeakProbe : public LibraryProbe {
 public:
  PeakProbe(SectionReader& r, const Definitions& d)
      : LibraryProbe(r, d, "library-radius"),
        paths_(read_count(r, "paths", 50, 1)),
        seed_(read_count(r, "seed", 1)),
        endpoint_radius_(read_count(r, "endpoint-radius", 2)),
        climb_(read_count(r, "climb", 8)),
        step_cap_(read_count(r, "step-cap", static_cast<std::int64_t>(kDefaultPeakStepCap), 1)) {
    precondition(r, "phi", [&] { return peaked_path(m_, phi_, defect_, seed_, endpoint_radius_, climb_); });
  }
  json params() const override {
    json j = LibraryProbe::params();
    j.update({{"paths", paths_}, {"seed", seed_}, {"endpoint_radius", endpoint_radius_}, {"climb", climb_},
              {"step_cap", step_cap_}});
    return j;
  }
  Path input(std::size_t i) const { return peaked_path(m_, phi_, defect_, seed_ + i, endpoint_radius_, climb_); }
  json run() const override {
    ConstantsBundle b = bundle_;
    const QLibrary lib = q_library(m_, phi_, defect_, c_, b.n, radius_);
    if (!lib.complete())
      throw PreconditionError("the q-library is incomplete at radius " + std::to_string(radius_) +
                              "; raise library-radius");
    refine_bundle(b, lib);
    json out{{"constants", jbundle(b)}, {"library", jlibrary(m_, lib)}};
    const auto traces = kernels::parallel::map_range(paths_, [&](std::size_t i) {
      return peak_reduction(m_, phi_, input(i), lib, b, step_cap_);
    });
    bool all_ok = true;
    for (std::size_t i = 0; i < paths_; ++i) {
      const auto& t = traces[i];
      json steps = json::array();
      for (const auto& s : t.steps)
        steps.push_back({{"height", ji(s.height)}, {"peaks", s.peaks}, {"replaced", s.replaced},
                         {"s", jgen(m_, s.s)}, {"t", jgen(m_, s.t)}, {"precondition", s.precondition},
                         {"path", jpath(m_, s.path)}});
      all_ok = all_ok && t.height_ok && t.vertices_ok && t.floor_ok;
      out["traces"].push_back({{"seed", seed_ + i},
                               {"input", jpath(m_, input(i))},
                               {"steps", std::move(steps)},
                               {"final", {{"path", jpath(m_, t.final_path)}, {"height", ji(t.final_height)}, {"peaks", t.final_peaks}}},
                               {"reduced", {{"path", jpath(m_, t.reduced.path)}, {"max", jx(t.reduced_max)}}},
                               {"overall_min", jx(t.overall_min)},
                               {"height_ok", t.height_ok},
                               {"vertices_ok", t.vertices_ok},
                               {"floor_ok", t.floor_ok},
                               {"cap_hit", t.cap_hit}});
    }
    out["all_ok"] = all_ok;
    return out;
  }
  void verify(const json& r, Checks& checks) const override {
    auto [b, lib] = replay(r, checks);
    if (!lib.complete()) {
      checks.expect("traces", false, "library incomplete; traces cannot be replayed");
      return;
    }
    const auto& traces = r.at("traces");
    checks.expect("trace-count", traces.size() == paths_);
    bool all_ok = true;
    for (std::size_t i = 0; i < traces.size() && i < paths_; ++i) {
      const auto& t = traces[i];
      checks.attempt("trace[" + std::to_string(i) + "]", [&, &lib = lib, &b = b] {
        const Path in = ppath(m_, t.at("input"));
        if (in != input(i) || t.at("seed").get<std::size_t>() != seed_ + i) return false;
        std::vector<Path> chain;
        for (const auto& s : t.at("steps")) chain.push_back(ppath(m_, s.at("path")));
        const Path fin = ppath(m_, t.at("final").at("path"));
        chain.push_back(fin);
        if (chain.front() != in) return false;
        ExactReal overall = phi_extrema(m_, phi_, in).min;
        std::pair<Integer, std::size_t> prev = height_and_peaks(m_, phi_, in, c_);
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
          const auto& s = t.at("steps")[k];
          const Path& cur = chain[k];
          const auto v1 = s.at("replaced").get<std::size_t>();
          if (std::pair{pi(s.at("height")), s.at("peaks").get<std::size_t>()} != prev) return false;
          if (v1 == 0 || v1 + 1 >= cur.vertex_count()) return false;
          const Generator gs = *m_.step_between(cur[v1 - 1], cur[v1]);
          const Generator gt = *m_.step_between(cur[v1], cur[v1 + 1]);
          if (jgen(m_, gs) != s.at("s") || jgen(m_, gt) != s.at("t")) return false;
          if (!essential_vertices(m_, cur, c_)[v1] || phi_.homogeneous_value(m_, cur[v1]).floor() != prev.first)
            return false;
          if ((phi_.homogeneous_value(m_, cur[v1 - 1]).floor() < prev.first) != s.at("precondition").get<bool>())
            return false;
          std::vector<GroupElement> head(cur.vertices().begin(), cur.vertices().begin() + static_cast<std::ptrdiff_t>(v1));
          std::vector<GroupElement> tail(cur.vertices().begin() + static_cast<std::ptrdiff_t>(v1 + 1), cur.vertices().end());
          const Path next = concat(m_, concat(m_, Path(m_, std::move(head)), *lib.find(gs, gt)->q), Path(m_, std::move(tail)));
          if (next != chain[k + 1]) return false;
          const auto hp = height_and_peaks(m_, phi_, next, c_);
          if (!(hp < prev)) return false;
          prev = hp;
          overall = min(overall, phi_extrema(m_, phi_, next).min);
        }
        const bool cap_hit = t.at("cap_hit").get<bool>();
        if (std::pair{pi(t.at("final").at("height")), t.at("final").at("peaks").get<std::size_t>()} != prev) return false;
        const Integer m_floor = b.m.floor();
        if (!cap_hit && prev.first > m_floor) return false;  // reduction stopped early
        const auto reduced = remove_inessential_backtracks(m_, fin, c_);
        if (reduced.path != ppath(m_, t.at("reduced").at("path"))) return false;
        const ExactReal rmax = phi_extrema(m_, phi_, reduced.path).max;
        const bool height_ok = !cap_hit && prev.first <= m_floor;
        const bool vertices_ok = !(b.m + b.defect * 2 < rmax);
        const bool floor_ok = -b.big_n < overall;
        all_ok = all_ok && height_ok && vertices_ok && floor_ok;
        return rmax == px(t.at("reduced").at("max")) && overall == px(t.at("overall_min")) &&
               height_ok == t.at("height_ok").get<bool>() && vertices_ok == t.at("vertices_ok").get<bool>() &&
               floor_ok == t.at("floor_ok").get<bool>();
      });
    }
    checks.expect("all-ok-flag", r.at("all_ok").get<bool>() == all_ok);
  }

 private:
  std::size_t paths_, seed_, endpoint_radius_, climb_, step_cap_;
};

// ---- f2z-example ---------------------------------------------------------------------

class F2zProbe : public Probe {
 public:
  F2zProbe(SectionReader& r, const Definitions& d)
      : m_(d.model),
        phi_(read_phi(r, d)),
        samples_(read_count(r, "samples", 100, 1)),
        radius_(read_count(r, "radius", 6)),
        seed_(read_count(r, "seed", 1)) {
    precondition(r, "phi", [&] { return f2z_kernel_path_normalize(m_, phi_, Path::single(m_.identity())); });
  }
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"samples", samples_}, {"radius", radius_}, {"seed", seed_}};
  }
  json run() const override {
    std::vector<GroupElement> kernel;
    for (auto& g : m_.ball(radius_))
      if (phi_.evaluate(m_, g).sign() == 0) kernel.push_back(std::move(g));
    std::mt19937_64 rng(seed_);
    std::vector<std::pair<GroupElement, GroupElement>> pairs;
    for (std::size_t i = 0; i < samples_; ++i) {
      const auto& g = kernel[rng() % kernel.size()];
      const auto& h = kernel[rng() % kernel.size()];
      pairs.emplace_back(g, h);
    }
    const auto witnesses = kernels::parallel::map_range(pairs.size(), [&](std::size_t i) {
      return f2z_kernel_path_normalize(m_, phi_, geodesic(m_, pairs[i].first, pairs[i].second));
    });
    json out{{"kernel_size", kernel.size()}, {"pairs", json::array()}};
    ExactReal lo{0}, hi{0};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& w = witnesses[i];
      lo = min(lo, w.min_phi);
      hi = max(hi, w.max_phi);
      out["pairs"].push_back({{"from", jel(m_, pairs[i].first)}, {"to", jel(m_, pairs[i].second)},
                              {"path", jpath(m_, w.path)}, {"min", jx(w.min_phi)}, {"max", jx(w.max_phi)}});
    }
    out["min"] = jx(lo);
    out["max"] = jx(hi);
    out["within_bound"] = !(lo < ExactReal(-3)) && !(ExactReal(3) < hi);
    return out;
  }
  void verify(const json& r, Checks& checks) const override {
    ExactReal lo{0}, hi{0};
    const auto& pairs = r.at("pairs");
    checks.expect("sample-count", pairs.size() == samples_);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      checks.attempt("pair[" + std::to_string(i) + "]", [&] {
        const auto g = pel(m_, p.at("from")), h = pel(m_, p.at("to"));
        if (g.length() > radius_ || h.length() > radius_) return false;
        if (phi_.evaluate(m_, g).sign() != 0 || phi_.evaluate(m_, h).sign() != 0) return false;
        const PathWitness w{ppath(m_, p.at("path")), px(p.at("min")), px(p.at("max")), std::nullopt};
        lo = min(lo, w.min_phi);
        hi = max(hi, w.max_phi);
        return replay_witness(m_, phi_, w, g, h);
      });
    }
    checks.attempt("bounds", [&] {
      return px(r.at("min")) == lo && px(r.at("max")) == hi &&
             r.at("within_bound").get<bool>() == (!(lo < ExactReal(-3)) && !(ExactReal(3) < hi));
    });
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  std::size_t samples_, radius_, seed_;
};

// ---- free-obstruction --------------------------------------------------------------------

class ObstructionProbeSpec : public Probe {
 public:
  ObstructionProbeSpec(SectionReader& r, const Definitions& d)
      : m_(d.model),
        phi_(read_phi(r, d)),
        defect_(read_defect(r, false)),
        x_(read_element(r, m_, "x")),
        c_(read_element(r, m_, "c")),
        n_min_(static_cast<std::int64_t>(read_count(r, "n-min", 1))),
        n_max_(static_cast<std::int64_t>(read_count(r, "n-max", 6))) {
    if (n_max_ < n_min_) r.fail("n-max", "n-max must be >= n-min");
    precondition(r, "x", [&] { return free_group_obstruction_probe(m_, phi_, x_, c_, 0, defect_); });
  }
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"defect", jx(defect_)}, {"x", jel(m_, x_)}, {"c", jel(m_, c_)},
            {"n_min", n_min_}, {"n_max", n_max_}};
  }
  ExactReal lower_bound(std::int64_t n) const {
    return (ExactReal(n) * phi_.homogeneous_value(m_, c_) - defect_ * 2) / (max_abs_generator_value(m_, phi_) + defect_) -
           1;
  }
  json run() const override {
    json rows = json::array();
    std::optional<ExactReal> prev;
    bool increasing = true, exceeds = true;
    for (std::int64_t n = n_min_; n <= n_max_; ++n) {
      const auto p = free_group_obstruction_probe(m_, phi_, x_, c_, n, defect_);
      increasing = increasing && (!prev || *prev < p.max_raw);
      exceeds = exceeds && lower_bound(n) < p.max_raw;
      prev = p.max_raw;
      rows.push_back({{"n", n}, {"geodesic", jpath(m_, p.geodesic)}, {"max_raw", jx(p.max_raw)},
                      {"max_certified", jx(p.max_certified)}, {"max_abs_phi", jx(p.max_abs_phi)},
                      {"lower_bound", jx(lower_bound(n))}});
    }
    return {{"rows", std::move(rows)}, {"strictly_increasing", increasing}, {"exceeds_bound", exceeds}};
  }
  void verify(const json& r, Checks& checks) const override {
    const ExactReal denom = max_abs_generator_value(m_, phi_) + defect_;
    std::optional<ExactReal> prev;
    bool increasing = true, exceeds = true;
    const auto& rows = r.at("rows");
    checks.expect("row-count", rows.size() == static_cast<std::size_t>(n_max_ - n_min_ + 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      checks.attempt("row[n=" + std::to_string(n_min_ + static_cast<std::int64_t>(i)) + "]", [&] {
        const std::int64_t n = row.at("n").get<std::int64_t>();
        const Path g = ppath(m_, row.at("geodesic"));
        const GroupElement target = m_.multiply(m_.multiply(m_.power(c_, -n), x_), m_.power(c_, n));
        if (n != n_min_ + static_cast<std::int64_t>(i) || g.origin() != x_ || g.terminus() != target ||
            g.edge_count() != m_.distance(x_, target))
          return false;
        std::optional<ExactReal> raw;
        ExactReal abs_max{0};
        for (const auto& v : g.vertices()) {
          const ExactReal a = phi_.homogeneous_value(m_, v).abs();
          abs_max = max(abs_max, a);
          const ExactReal b = (a - defect_ * 2) / denom;
          if (!raw || *raw < b) raw = b;
        }
        increasing = increasing && (!prev || *prev < *raw);
        exceeds = exceeds && lower_bound(n) < *raw;
        prev = raw;
        return *raw == px(row.at("max_raw")) && max(ExactReal(0), *raw) == px(row.at("max_certified")) &&
               abs_max == px(row.at("max_abs_phi")) && lower_bound(n) == px(row.at("lower_bound"));
      });
    }
    checks.expect("flags", r.at("strictly_increasing").get<bool>() == increasing &&
                               r.at("exceeds_bound").get<bool>() == exceeds);
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  ExactReal defect_;
  GroupElement x_, c_;
  std::int64_t n_min_, n_max_;
};

// ---- novikov-solve and zs-cycle ------------------------------------------------------------------

class NovikovProbe : public Probe {
 public:
  NovikovProbe(SectionReader& r, const Definitions& d)
      : m_(d.model),
        phi_(read_phi(r, d)),
        defect_(read_defect(r, false)),
        a_(read_element(r, m_, "a")),
        b_(read_element(r, m_, "b")),
        c_(read_element(r, m_, "c")),
        window_(r.exact("window")),
        keep_negative_(r.boolean("keep-negative", false)) {
    options_.slack = r.optional_exact("slack").value_or(ExactReal(1));
    if (options_.slack.sign() < 0) r.fail("slack", "slack must be >= 0");
    options_.cell_cap = read_count(r, "cell-cap", 50000, 1);
    if (auto q = r.optional_text("q")) {
      q_ = precondition(r, "q", [&] { return Path::from_steps(m_, a_, m_.parse_word(*q)); });
      if (q_->terminus() != b_) r.fail("q", "q must run from a to b");
    } else {
      q_ = geodesic(m_, a_, b_);
    }
    precondition(r, "window", [&] { return chain(); });
  }
  CayleyTwoComplex complex() const { return CayleyTwoComplex(m_, phi_, defect_); }
  Chain1 chain() const { return ray_cycle(complex(), a_, b_, *q_, c_, window_); }
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"defect", jx(defect_)}, {"a", jel(m_, a_)}, {"b", jel(m_, b_)},
            {"c", jel(m_, c_)}, {"q", jpath(m_, *q_)}, {"window", jx(window_)}, {"slack", jx(options_.slack)},
            {"cell_cap", options_.cell_cap}, {"keep_negative", keep_negative_}};
  }
  json run() const override {
    const auto cx = complex();
    const Chain1 z = chain();
    const auto rep = windowed_boundary_solve(cx, z, window_, options_);
    json out{{"z", jchain(cx, z)}, {"window", rep.window.to_string()}, {"columns", rep.columns.size()},
             {"rows", rep.rows.size()}, {"lower_level", jx(rep.lower_level)}};
    if (const auto* sol = std::get_if<BoundarySolution>(&rep.outcome)) {
      out["outcome"] = "solved";
      out["y"] = jchain(cx, sol->y);
      if (keep_negative_) {
        try {
          const auto x = keep_negative_and_extract_path(cx, sol->y, z, a_, b_, c_);
          out["extracted"] = {{"path", jpath(m_, x.path)}, {"min", jx(x.min_phi)}, {"max", jx(x.max_phi)},
                              {"m", x.m}, {"n", x.n}, {"residual_nonnegative", x.residual_nonnegative},
                              {"floor_ok", !(x.min_phi < -defect_)}};
        } catch (const PreconditionError& e) {
          out["extract_error"] = e.what();
        }
      }
    } else {
      const auto& cert = std::get<ObstructionCertificate>(rep.outcome);
      json f = json::array();
      for (const auto& [edge, v] : cert.functional) f.push_back(json::array({cx.format(edge), rational_to_string(v)}));
      out["outcome"] = "unsat";
      out["obstruction"] = {{"kind", cert.kind == ObstructionKind::Rational ? "rational" : "integral"},
                            {"functional", std::move(f)},
                            {"pairing", rational_to_string(cert.pairing)}};
    }
    return out;
  }
  void verify(const json& r, Checks& checks) const override {
    const auto cx = complex();
    const Chain1 z = chain();
    checks.attempt("ray-cycle", [&] {
      return pchain1(m_, r.at("z"), z.window).terms == z.terms && cx.boundary(z).is_zero();
    });
    const std::string outcome = r.at("outcome").get<std::string>();
    if (outcome == "solved") {
      checks.attempt("boundary-solution", [&] {
        const Chain2 y = pchain2(m_, r.at("y"), z.window);
        return verify_boundary_solution(cx, z, y, z.window);
      });
      if (r.contains("extracted"))
        checks.attempt("extracted-path", [&] {
          const auto& x = r.at("extracted");
          const PathWitness w{ppath(m_, x.at("path")), px(x.at("min")), px(x.at("max")), std::nullopt};
          return replay_witness(m_, phi_, w, a_, b_) && x.at("floor_ok").get<bool>() == !(w.min_phi < -defect_);
        });
    } else if (outcome == "unsat") {
      checks.attempt("obstruction", [&] {
        const auto& o = r.at("obstruction");
        ObstructionCertificate cert;
        const std::string kind = o.at("kind").get<std::string>();
        if (kind != "rational" && kind != "integral") return false;
        cert.kind = kind == "rational" ? ObstructionKind::Rational : ObstructionKind::Integral;
        for (const auto& t : o.at("functional"))
          cert.functional.emplace(pedge(m_, t.at(0).get<std::string>()), parse_rational(t.at(1).get<std::string>()));
        cert.pairing = parse_rational(o.at("pairing").get<std::string>());
        const auto columns = solver_columns(cx, z, window_, options_);
        return columns.size() == r.at("columns").get<std::size_t>() && verify_obstruction(cx, z, columns, cert);
      });
    } else {
      checks.expect("outcome", false, "unknown outcome '" + outcome + "'");
    }
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  ExactReal defect_;
  GroupElement a_, b_, c_;
  ExactReal window_;
  bool keep_negative_;
  SolverOptions options_;
  std::optional<Path> q_;
};

class ZsProbe : public Probe {
 public:
  ZsProbe(SectionReader& r, const Definitions& d)
      : m_(d.model),
        phi_(read_phi(r, d)),
        defect_(read_defect(r, false)),
        s_(precondition(r, "s", [&] { return pgen(m_, r.text("s")); })),
        n_(static_cast<std::int64_t>(read_count(r, "n"))),
        c_(read_element(r, m_, "c")),
        k_(r.exact("k")),
        radius_(read_count(r, "radius")) {}
  json params() const override {
    return {{"phi", phi_.describe(m_)}, {"defect", jx(defect_)}, {"s", jgen(m_, s_)}, {"n", n_},
            {"c", jel(m_, c_)}, {"k", jx(k_)}, {"radius", radius_}};
  }
  json run() const override {
    const CayleyTwoComplex cx(m_, phi_, defect_);
    const auto zs = build_zs_cycle(cx, s_, n_, c_, k_, radius_);
    return {{"first", jpath(m_, zs.first)}, {"second", jpath(m_, zs.second)}, {"z", jchain(cx, zs.z)},
            {"is_cycle", zs.is_cycle}, {"second_min", jx(phi_extrema(m_, phi_, zs.second).min)}};
  }
  void verify(const json& r, Checks& checks) const override {
    const CayleyTwoComplex cx(m_, phi_, defect_);
    const GroupElement cn = m_.power(c_, n_);
    const GroupElement scn = m_.multiply(m_.element(s_), cn);
    checks.attempt("z_s", [&] {
      const Path first = ppath(m_, r.at("first"));
      const Path second = ppath(m_, r.at("second"));
      const Path expected_first =
          concat(m_, concat(m_, translate(m_, cn, letter_power(m_, c_, -n_)), Path::from_steps(m_, m_.identity(), std::vector<Generator>{s_})),
                 letter_power(m_, c_, n_));
      const ExactReal lo = phi_extrema(m_, phi_, second).min;
      const Chain1 z = windowed_add(cx, cx.path_chain(first), windowed_negate(cx.path_chain(second)));
      const bool closed = cx.boundary(z).is_zero();
      return first == expected_first && second.origin() == cn && second.terminus() == scn &&
             !(lo < ExactReal(n_) * phi_.homogeneous_value(m_, c_) - k_) && lo == px(r.at("second_min")) &&
             pchain1(m_, r.at("z"), Window::infinite()).terms == z.terms && closed == r.at("is_cycle").get<bool>();
    });
  }

 private:
  GroupModel m_;
  Quasimorphism phi_;
  ExactReal defect_;
  Generator s_;
  std::int64_t n_;
  GroupElement c_;
  ExactReal k_;
  std::size_t radius_;
};

}  // namespace

const std::vector<ProbeKind>& probe_catalog() {
  static const std::vector<ProbeKind> kinds = {
      {"defect",
       "Brute-force lower bound on the defect D(phi) over ball(R)^2.\n"
       "  three-term:  |phi(g) + phi(h) - phi(gh)|\n"
       "  commutator:  phi-bar([g,h]) (homogeneous phi only; sup phi-bar([g,h]) <= D(phi-bar))\n"
       "  keys: phi, radius, upper (optional user bound)\n"},
      {"aker-cert",
       "Aker(phi) = { g : |phi-bar(g)| <= 2 D* } is an approximate subgroup.\n"
       "  With a scaling element c, 4D*/5 < phi-bar(c) <= D*, every product gh of members\n"
       "  lands in Aker after a shift by some c^m, |m| <= 5, so A*A is inside A*X with\n"
       "  X = {c^5, ..., c^-5} and |X| = 11. With D* = 0, X = {1}.\n"
       "  keys: phi, defect, radius, c (element or auto), scaling-radius\n"},
      {"rips-profile",
       "Components of the Rips graph R(A, n): vertices A, edges d(g,h) < n (strict).\n"
       "  Reports the component count for n = 1..n_max and the first n with one component.\n"
       "  Finite-set threshold for A = {1, a^5}: N = 6.\n"
       "  keys: max-parameter and either vertices or phi, mode (aker|positive), defect, radius\n"},
      {"path-search",
       "Breadth-first search for a path from g to h inside ball(R) with phi-bar >= -K at every\n"
       "  vertex (and <= K_max when given). A failure is evidence at (K, R) only.\n"
       "  keys: phi, from, to, k, k-max, radius\n"},
      {"q-library",
       "Detours q_{s,t} = (c^-n) q' (c^n) from 1 to st with q' kept below -D*.\n"
       "  n = floor(5/(4D*) (K' + max phi-bar(st) + D*)) + 3\n"
       "  M = 3D* + max |phi-bar(s)|\n"
       "  N = max(K' + 2D*, -min phi-bar(q_{s,t})) + 1\n"
       "  Needs D* > 0 and K' > 2D*.\n"
       "  keys: phi, defect, k-prime, c, library-radius\n"},
      {"peak-reduce",
       "Peak reduction: replace the first essential vertex at the maximal level floor(phi-bar)\n"
       "  by the detour q_{s,t}; (height, #peaks) falls lexicographically at every step.\n"
       "  Terminates at height <= M; after removing inessential backtracks every vertex is\n"
       "  <= M + 2D*, and every traced vertex stays above -N.\n"
       "  keys: as q-library plus paths, seed, endpoint-radius, climb, step-cap\n"},
      {"f2z-example",
       "F_2 x Z = <a, b> x <c> with phi(a) = 1, phi(b) = 0, phi(c) = sqrt 2.\n"
       "  After each edge of a kernel path append c^m with m = floor(1/2 - x/sqrt 2), x the\n"
       "  current level; the value then lies in [-sqrt2/2, sqrt2/2) and the path satisfies\n"
       "  min phi >= -3 and max phi <= 3.\n"
       "  keys: phi, samples, radius, seed\n"},
      {"free-obstruction",
       "Free group: every path from x to c^-n x c^n passes through the geodesic vertices, so\n"
       "  d(v, Aker) >= (|phi-bar(v)| - 2D*) / (max |phi-bar(s)| + D*) for each of them.\n"
       "  The maxima grow with n and exceed (n phi-bar(c) - 2D*)/(max |phi-bar(s)| + D*) - 1.\n"
       "  keys: phi, defect, x, c, n-min, n-max\n"},
      {"novikov-solve",
       "Solves boundary(y) = z below the window W for the ray cycle\n"
       "  z = q + (c-ray from b) - (c-ray from a) over the Cayley 2-complex (commutator squares).\n"
       "  Solvable cycles give y; otherwise an integer-normal-form obstruction functional f with\n"
       "  f(boundary of every 2-cell) = 0 and f(z) != 0. Cell value = min phi-bar over vertices.\n"
       "  With keep-negative, y- (cells below 0) yields a path a -> a c^m -> ... -> b c^n -> b.\n"
       "  keys: phi, defect, a, b, c, window, q, slack, cell-cap, keep-negative\n"},
      {"zs-cycle",
       "z_s = (c^n)(1,c^-1)^n (1,s) (1,c)^n minus a path p_s from c^n to s c^n with\n"
       "  min phi-bar(p_s) >= n phi-bar(c) - K; a finite 1-cycle.\n"
       "  keys: phi, defect, s, n, c, k, radius\n"},
  };
  return kinds;
}

std::unique_ptr<Probe> make_probe(const ConfigSection& section, const Definitions& defs) {
  SectionReader r(section);
  const std::string kind = r.text("kind");
  std::unique_ptr<Probe> p;
  if (kind == "defect") p = std::make_unique<DefectProbe>(r, defs);
  else if (kind == "aker-cert") p = std::make_unique<AkerProbe>(r, defs);
  else if (kind == "rips-profile") p = std::make_unique<RipsProbe>(r, defs);
  else if (kind == "path-search") p = std::make_unique<PathSearchProbe>(r, defs);
  else if (kind == "q-library") p = std::make_unique<LibraryProbe>(r, defs, "radius");
  else if (kind == "peak-reduce") p = std::make_unique<PeakProbe>(r, defs);
  else if (kind == "f2z-example") p = std::make_unique<F2zProbe>(r, defs);
  else if (kind == "free-obstruction") p = std::make_unique<ObstructionProbeSpec>(r, defs);
  else if (kind == "novikov-solve") p = std::make_unique<NovikovProbe>(r, defs);
  else if (kind == "zs-cycle") p = std::make_unique<ZsProbe>(r, defs);
  else r.fail("kind", "unknown probe kind '" + kind + "'");
  r.finish();
  return p;
}

}  // namespace qbns::cli
