#include "qbns/sigma.hpp"

#include "qbns/kernels.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

namespace qbns {

PathWitness make_witness(const GroupModel& model, const Quasimorphism& phi, Path path,
                         std::optional<std::size_t> radius) {
  const Extrema e = phi_extrema(model, phi, path);
  return PathWitness{std::move(path), e.min, e.max, radius};
}

bool replay_witness(const GroupModel& model, const Quasimorphism& phi, const PathWitness& w,
                    const GroupElement& from, const GroupElement& to) {
  if (!is_adjacent_sequence(model, w.path.vertices())) return false;
  if (w.path.origin() != from || w.path.terminus() != to) return false;
  const Extrema e = phi_extrema(model, phi, w.path);
  return e.min == w.min_phi && e.max == w.max_phi;
}

bool VertexConstraint::admits(const ExactReal& value) const {
  if (lower && (lower_strict ? !(*lower < value) : value < *lower)) return false;
  if (upper && (upper_strict ? !(value < *upper) : *upper < value)) return false;
  return true;
}

std::string VertexConstraint::describe() const {
  std::string out;
  if (lower) out += lower->to_string() + (lower_strict ? " < " : " <= ");
  out += "phi";
  if (upper) out += std::string(upper_strict ? " < " : " <= ") + upper->to_string();
  return out;
}

VertexConstraint constraint_for(const SearchMode& mode) {
  VertexConstraint c;
  if (const auto* lo = std::get_if<LowerOnly>(&mode)) {
    c.lower = -lo->k;
  } else {
    const auto& two = std::get<TwoSided>(mode);
    c.lower = -two.k;
    c.upper = two.k_max;
  }
  return c;
}

SearchResult constrained_path_search(const GroupModel& model, const Quasimorphism& phi, const GroupElement& from,
                                     const GroupElement& to, const VertexConstraint& constraint,
                                     std::size_t radius) {
  model.check_radius(radius);
  model.validate(from);
  model.validate(to);
  if (from.length() > radius || to.length() > radius)
    throw PreconditionError("search endpoints must lie in ball(" + std::to_string(radius) + ")");

  NotFoundWithinBall none{constraint, radius, 0};
  if (!constraint.admits(phi.homogeneous_value(model, from))) return none;

  // parent index into `order`; the source has itself as parent.
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  std::vector<GroupElement> order{from};
  std::vector<std::size_t> parent{0};
  index.emplace(from, 0);
  std::deque<std::size_t> queue{0};
  std::optional<std::size_t> found;
  if (from == to) found = 0;
  while (!found && !queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (Generator s : model.symmetric_generators()) {
      GroupElement next = model.step(order[cur], s);
      if (next.length() > radius || index.contains(next)) continue;
      if (!constraint.admits(phi.homogeneous_value(model, next))) continue;
      index.emplace(next, order.size());
      order.push_back(std::move(next));
      parent.push_back(cur);
      queue.push_back(order.size() - 1);
      if (order.back() == to) {
        found = order.size() - 1;
        break;
      }
    }
  }
  if (!found) {
    none.explored = order.size();
    return none;
  }
  std::vector<GroupElement> vertices;
  for (std::size_t v = *found;; v = parent[v]) {
    vertices.push_back(order[v]);
    if (v == 0) break;
  }
  std::reverse(vertices.begin(), vertices.end());
  return make_witness(model, phi, Path(model, std::move(vertices)), radius);
}

SearchResult bounded_path_search(const GroupModel& model, const Quasimorphism& phi, const GroupElement& from,
                                 const GroupElement& to, const SearchMode& mode, std::size_t radius) {
  return constrained_path_search(model, phi, from, to, constraint_for(mode), radius);
}

ConstantsBundle compute_constants(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect,
                                  const ExactReal& k_prime, const GroupElement& c) {
  if (defect.sign() <= 0) throw PreconditionError("constants need D* > 0");
  if (!(defect * 2 < k_prime)) throw PreconditionError("constants need K' > 2D*");
  const auto& gens = model.symmetric_generators();
  std::optional<ExactReal> max_st;
  ExactReal max_s{0};
  for (Generator s : gens) {
    max_s = max(max_s, phi.homogeneous_value(model, model.element(s)).abs());
    for (Generator t : gens) {
      const ExactReal v = phi.homogeneous_value(model, model.step(model.element(s), t));
      if (!max_st || *max_st < v) max_st = v;
    }
  }
  ConstantsBundle b;
  b.defect = defect;
  b.k_prime = k_prime;
  b.max_phi_st = *max_st;
  b.max_abs_phi_s = max_s;
  b.n = (ExactReal(5) / (defect * 4) * (k_prime + *max_st + defect)).floor() + 3;
  b.m = defect * 3 + max_s;
  b.big_n = k_prime + defect * 2 + 1;
  b.c_length = c.length();
  return b;
}

ExactReal finiteness_constant(const Integer& n, const ExactReal& phi_s, const ExactReal& defect) {
  return ExactReal(Rational(n)) * (phi_s + defect) + defect * 2;
}

ExactReal finiteness_rips_bound(const ExactReal& k, std::size_t c_length, const ExactReal& defect) {
  if (defect.sign() <= 0) throw PreconditionError("Rips bound needs D > 0");
  return ExactReal(5) * k * ExactReal(static_cast<std::int64_t>(c_length)) / (defect * 2) + 1;
}

namespace {

bool differs_by_c(const GroupModel& model, const GroupElement& v, const GroupElement& w, const GroupElement& c,
                  const GroupElement& c_inv) {
  const GroupElement d = model.multiply(model.inverse(v), w);
  return d == c || d == c_inv;
}

}  // namespace

std::vector<bool> essential_vertices(const GroupModel& model, const Path& p, const GroupElement& c) {
  const GroupElement c_inv = model.inverse(c);
  const std::size_t k = p.vertex_count();
  std::vector<bool> out(k, true);
  for (std::size_t i = 1; i + 1 < k; ++i)
    out[i] = !(differs_by_c(model, p[i], p[i - 1], c, c_inv) && differs_by_c(model, p[i], p[i + 1], c, c_inv));
  return out;
}

BacktrackResult remove_inessential_backtracks(const GroupModel& model, const Path& p, const GroupElement& c) {
  return remove_inessential_backtracks(model, p, c, essential_vertices(model, p, c));
}

BacktrackResult remove_inessential_backtracks(const GroupModel& model, const Path& p, const GroupElement& c,
                                              const std::vector<bool>& essential) {
  if (essential.size() != p.vertex_count()) throw PreconditionError("one essential flag per vertex");
  const GroupElement c_inv = model.inverse(c);
  std::vector<GroupElement> stack;
  std::vector<bool> flags;
  for (std::size_t i = 0; i < p.vertex_count(); ++i) {
    const std::size_t top = stack.size();
    if (top >= 2 && stack[top - 2] == p[i] && differs_by_c(model, p[i], stack[top - 1], c, c_inv)) {
      const bool merged = flags[top - 1] || essential[i];
      stack.pop_back();
      flags.pop_back();
      flags.back() = flags.back() || merged;
      continue;
    }
    stack.push_back(p[i]);
    flags.push_back(essential[i]);
  }
  return {Path(model, std::move(stack)), std::move(flags)};
}

bool QLibrary::complete() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.verified; });
}

const QLibraryEntry* QLibrary::find(Generator s, Generator t) const {
  for (const auto& e : entries)
    if (e.s == s && e.t == t) return &e;
  return nullptr;
}

std::optional<ExactReal> QLibrary::min_phi() const {
  std::optional<ExactReal> out;
  for (const auto& e : entries)
    if (e.q && (!out || e.min_phi < *out)) out = e.min_phi;
  return out;
}

bool verify_q_entry(const GroupModel& model, const Quasimorphism& phi, const QLibrary& lib, const QLibraryEntry& e) {
  if (!e.q) return false;
  const Path& q = *e.q;
  const GroupElement st = model.step(model.element(e.s), e.t);
  if (q.origin() != model.identity() || q.terminus() != st) return false;
  if (!is_adjacent_sequence(model, q.vertices())) return false;
  // Sandwich: the first block spells c^-1 n times, the last spells c n times.
  const std::int64_t n = static_cast<std::int64_t>(lib.n);
  const auto down = letter_power(model, lib.c, -n).steps(model);
  const auto up = letter_power(model, lib.c, n).steps(model);
  const auto steps = q.steps(model);
  if (steps.size() < down.size() + up.size()) return false;
  if (!std::equal(down.begin(), down.end(), steps.begin())) return false;
  if (!std::equal(up.begin(), up.end(), steps.end() - static_cast<std::ptrdiff_t>(up.size()))) return false;
  const auto essential = essential_vertices(model, q, lib.c);
  const ExactReal bound = -lib.defect;
  for (std::size_t i = 1; i + 1 < q.vertex_count(); ++i)
    if (essential[i] && !(phi.homogeneous_value(model, q[i]) < bound)) return false;
  return true;
}

QLibrary q_library(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect, const GroupElement& c,
                   const Integer& n, std::size_t radius) {
  model.check_radius(radius);
  if (n < 1) throw PreconditionError("q-library needs n >= 1");
  QLibrary lib{c, n, defect, radius, {}};
  const auto& gens = model.symmetric_generators();
  const std::size_t g = gens.size();
  const std::int64_t nn = static_cast<std::int64_t>(n);
  const Path down = letter_power(model, c, -nn);
  const Path up = letter_power(model, c, nn);
  const GroupElement c_minus_n = model.power(c, -nn);
  VertexConstraint below;
  below.upper = -defect;
  below.upper_strict = true;

  lib.entries = kernels::parallel::map_range(g * g, [&](std::size_t k) {
    QLibraryEntry e{gens[k / g], gens[k % g], std::nullopt, std::nullopt, ExactReal{}, ExactReal{}, false, {}};
    const GroupElement st = model.step(model.element(e.s), e.t);
    const GroupElement target = model.multiply(st, c_minus_n);
    if (c_minus_n.length() > radius || target.length() > radius) {
      e.failure = "q' endpoints outside ball(" + std::to_string(radius) + ")";
      return e;
    }
    const SearchResult r = constrained_path_search(model, phi, c_minus_n, target, below, radius);
    if (const auto* miss = std::get_if<NotFoundWithinBall>(&r)) {
      e.failure = "no q' with " + below.describe() + " within ball(" + std::to_string(radius) + "), explored " +
                  std::to_string(miss->explored);
      return e;
    }
    // q' runs from c^-n; translate it to start where the down block ends.
    const Path inner = std::get<PathWitness>(r).path;
    Path q = concat(model, concat(model, down, inner), up);
    e.q_inner = inner;
    const Extrema ex = phi_extrema(model, phi, q);
    e.min_phi = ex.min;
    const auto essential = essential_vertices(model, q, c);
    std::optional<ExactReal> top;
    for (std::size_t i = 1; i + 1 < q.vertex_count(); ++i)
      if (essential[i]) {
        const ExactReal v = phi.homogeneous_value(model, q[i]);
        if (!top || *top < v) top = v;
      }
    e.max_essential_phi = top ? *top : -defect - 1;
    e.q = std::move(q);
    return e;
  });
  for (auto& e : lib.entries) {
    e.verified = verify_q_entry(model, phi, lib, e);
    if (e.q && !e.verified) e.failure = "q fails the sandwich or essential-vertex check";
  }
  return lib;
}

void refine_bundle(ConstantsBundle& bundle, const QLibrary& lib) {
  ExactReal base = bundle.k_prime + bundle.defect * 2;
  if (auto lo = lib.min_phi()) base = max(base, -*lo);
  bundle.big_n = base + 1;
}

std::pair<Integer, std::size_t> height_and_peaks(const GroupModel& model, const Quasimorphism& phi, const Path& p,
                                                 const GroupElement& c) {
  const auto essential = essential_vertices(model, p, c);
  std::optional<Integer> height;
  std::size_t peaks = 0;
  for (std::size_t i = 0; i < p.vertex_count(); ++i) {
    if (!essential[i]) continue;
    const Integer f = phi.homogeneous_value(model, p[i]).floor();
    if (!height || *height < f) {
      height = f;
      peaks = 1;
    } else if (f == *height) {
      ++peaks;
    }
  }
  return {*height, peaks};  // endpoints are always essential
}

PeakReductionTrace peak_reduction(const GroupModel& model, const Quasimorphism& phi, const Path& p,
                                  const QLibrary& lib, const ConstantsBundle& bundle, std::size_t step_cap) {
  const LevelSubset aker{phi, LevelMode::Aker, bundle.defect};
  if (!aker.contains(model, p.origin()) || !aker.contains(model, p.terminus()))
    throw PreconditionError("peak reduction needs endpoints in Aker");
  if (!lib.complete()) throw PreconditionError("peak reduction needs a complete q-library");

  const ExactReal floor_level = -bundle.big_n;
  const Integer m_floor = bundle.m.floor();
  std::vector<PeakStep> steps;
  Path cur = p;
  ExactReal overall_min = phi_extrema(model, phi, cur).min;
  bool cap_hit = false;
  auto [height, peaks] = height_and_peaks(model, phi, cur, lib.c);
  while (height > m_floor) {
    if (steps.size() >= step_cap) {
      cap_hit = true;
      break;
    }
    const auto essential = essential_vertices(model, cur, lib.c);
    std::size_t v1 = 0;
    for (std::size_t i = 0; i < cur.vertex_count(); ++i)
      if (essential[i] && phi.homogeneous_value(model, cur[i]).floor() == height) {
        v1 = i;
        break;
      }
    if (v1 == 0 || v1 + 1 >= cur.vertex_count())
      throw PreconditionError("a peak sits at an endpoint; endpoints are not in Aker");
    const Generator s = *model.step_between(cur[v1 - 1], cur[v1]);
    const Generator t = *model.step_between(cur[v1], cur[v1 + 1]);
    const QLibraryEntry* entry = lib.find(s, t);
    PeakStep step{cur, height, peaks, v1, s, t,
                  phi.homogeneous_value(model, cur[v1 - 1]).floor() < height};

    std::vector<GroupElement> head(cur.vertices().begin(), cur.vertices().begin() + static_cast<std::ptrdiff_t>(v1));
    std::vector<GroupElement> tail(cur.vertices().begin() + static_cast<std::ptrdiff_t>(v1 + 1),
                                   cur.vertices().end());
    Path replaced = concat(model, concat(model, Path(model, std::move(head)), *entry->q), Path(model, std::move(tail)));
    steps.push_back(std::move(step));
    cur = std::move(replaced);
    overall_min = min(overall_min, phi_extrema(model, phi, cur).min);
    std::tie(height, peaks) = height_and_peaks(model, phi, cur, lib.c);
  }

  BacktrackResult reduced = remove_inessential_backtracks(model, cur, lib.c);
  const Extrema ex = phi_extrema(model, phi, reduced.path);
  PeakReductionTrace trace{std::move(steps), cur, height, peaks, std::move(reduced), ex.max, overall_min,
                           false, false, false, cap_hit};
  trace.height_ok = !cap_hit && height <= m_floor;
  trace.vertices_ok = !(bundle.m + bundle.defect * 2 < trace.reduced_max);
  trace.floor_ok = floor_level < overall_min;
  return trace;
}

Path peaked_path(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect, std::uint64_t seed,
                 std::size_t endpoint_radius, std::size_t climb) {
  const LevelSubset aker{phi, LevelMode::Aker, defect};
  std::vector<GroupElement> ends;
  for (auto& g : model.ball(endpoint_radius))
    if (aker.contains(model, g)) ends.push_back(std::move(g));
  std::vector<Generator> up;
  for (Generator s : model.symmetric_generators())
    if (phi.homogeneous_value(model, model.element(s)).sign() > 0) up.push_back(s);
  if (up.empty()) throw PreconditionError("no generator with phi-bar(s) > 0 to climb along");

  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const GroupElement x = ends[pick(ends.size())];
  const GroupElement y = ends[pick(ends.size())];
  std::vector<Generator> steps;
  for (std::size_t i = 0; i < climb; ++i) steps.push_back(up[pick(up.size())]);
  const Path rise = Path::from_steps(model, x, steps);
  return concat(model, rise, geodesic(model, rise.terminus(), y));
}

GroupModel f2z_model() { return GroupModel::free_times_abelian(2, 1, "abc"); }

Quasimorphism f2z_phi() { return Quasimorphism::homomorphism({ExactReal(1), ExactReal(0), ExactReal::sqrt(2)}); }

PathWitness f2z_kernel_path_normalize(const GroupModel& model, const Quasimorphism& phi, const Path& p) {
  if (!(model == f2z_model()) || !phi.is_homomorphism() || phi.kind() != QuasimorphismKind::Homomorphism ||
      phi.generator_values() != f2z_phi().generator_values())
    throw ModelMismatch("f2z normalization needs F2 x Z with a -> 1, b -> 0, c -> sqrt(2)");
  const ExactReal root2 = ExactReal::sqrt(2);
  const ExactReal half(Rational(1, 2));
  for (const auto* end : {&p.origin(), &p.terminus()})
    if (phi.evaluate(model, *end) != ExactReal(0)) throw PreconditionError("f2z endpoints must lie in ker phi");

  const Generator c{2, false};
  std::vector<GroupElement> out{p.origin()};
  auto settle = [&] {
    const ExactReal x = phi.evaluate(model, out.back());
    const Integer m = (half - x / root2).floor();
    const Generator dir = m < 0 ? c.inverted() : c;
    for (Integer k = 0; k < (m < 0 ? Integer(-m) : m); ++k) out.push_back(model.step(out.back(), dir));
  };
  for (Generator s : p.steps(model)) {
    out.push_back(model.step(out.back(), s));
    settle();
  }
  return make_witness(model, phi, Path(model, std::move(out)));
}

ObstructionProbe free_group_obstruction_probe(const GroupModel& model, const Quasimorphism& phi,
                                              const GroupElement& x, const GroupElement& c, std::int64_t n,
                                              const ExactReal& defect) {
  if (!model.is_free()) throw ModelMismatch("the obstruction probe needs a free group");
  if (model.commutator(x, c).is_identity()) throw PreconditionError("x and c must not commute");
  if (phi.homogeneous_value(model, c).sign() <= 0) throw PreconditionError("the probe needs phi-bar(c) > 0");
  if (n < 0) throw PreconditionError("the probe needs n >= 0");

  ExactReal phi_s{0};
  for (Generator s : model.symmetric_generators())
    phi_s = max(phi_s, phi.homogeneous_value(model, model.element(s)).abs());
  const ExactReal denom = phi_s + defect;
  if (denom.sign() <= 0) throw PreconditionError("max|phi-bar(s)| + D* must be positive");

  const GroupElement end = model.multiply(model.multiply(model.power(c, -n), x), model.power(c, n));
  Path geo = geodesic(model, x, end);
  auto values = kernels::parallel::map_range(geo.vertex_count(),
                                             [&](std::size_t i) { return phi.homogeneous_value(model, geo[i]); });
  std::vector<ExactReal> bounds;
  ExactReal max_abs{0};
  std::optional<ExactReal> max_raw;
  for (const auto& v : values) {
    const ExactReal b = (v.abs() - defect * 2) / denom;
    max_abs = max(max_abs, v.abs());
    if (!max_raw || *max_raw < b) max_raw = b;
    bounds.push_back(b);
  }
  return ObstructionProbe{n, std::move(geo), std::move(bounds), *max_raw, max(ExactReal(0), *max_raw), max_abs};
}

}  // namespace qbns
