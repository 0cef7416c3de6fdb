#include "qbns/novikov.hpp"

#include "qbns/kernels.hpp"
#include "qbns/rips.hpp"
#include "qbns/sigma.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace qbns {

CayleyTwoComplex::CayleyTwoComplex(GroupModel model, Quasimorphism phi, ExactReal defect)
    : model_(std::move(model)), phi_(std::move(phi)), defect_(std::move(defect)) {
  phi_.validate(model_);
  if (defect_.sign() < 0) throw PreconditionError("D* must be >= 0");
  const int n = model_.free_rank();
  const int total = model_.generator_count();
  // Free generators commute with every abelian one; abelian generators commute pairwise.
  for (int x = 0; x < total; ++x)
    for (int y = std::max(x + 1, n); y < total; ++y)
      square_types_.emplace_back(static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y));
}

namespace {

GroupElement step_pos(const GroupModel& m, const GroupElement& g, std::uint16_t gen) {
  return m.step(g, Generator{gen, false});
}

}  // namespace

ExactReal CayleyTwoComplex::value(const EdgeCell& e) const {
  return min(value(e.g), value(step_pos(model_, e.g, e.gen)));
}

ExactReal CayleyTwoComplex::value(const SquareCell& s) const {
  const GroupElement gx = step_pos(model_, s.g, s.x);
  const GroupElement gy = step_pos(model_, s.g, s.y);
  const GroupElement gxy = step_pos(model_, gx, s.y);
  return min(min(value(s.g), value(gx)), min(value(gy), value(gxy)));
}

std::vector<std::pair<VertexCell, int>> CayleyTwoComplex::faces(const EdgeCell& e) const {
  return {{VertexCell{step_pos(model_, e.g, e.gen)}, 1}, {VertexCell{e.g}, -1}};
}

std::vector<std::pair<EdgeCell, int>> CayleyTwoComplex::faces(const SquareCell& s) const {
  return {{EdgeCell{s.g, s.x}, 1},
          {EdgeCell{step_pos(model_, s.g, s.x), s.y}, 1},
          {EdgeCell{step_pos(model_, s.g, s.y), s.x}, -1},
          {EdgeCell{s.g, s.y}, -1}};
}

std::vector<SquareCell> CayleyTwoComplex::squares_at(const GroupElement& g) const {
  std::vector<SquareCell> out;
  for (auto [x, y] : square_types_) out.push_back(SquareCell{g, x, y});
  return out;
}

namespace {

template <class Face, class Cell>
WindowedChain<Face> boundary_impl(const CayleyTwoComplex& cx, const WindowedChain<Cell>& chain) {
  WindowedChain<Face> out;
  for (const auto& [cell, k] : chain.terms)
    for (const auto& [face, sign] : cx.faces(cell)) out.add(face, k * sign);
  return cx.truncate(std::move(out), chain.window.shifted(-cx.boundary_drop(chain)));
}

}  // namespace

Chain0 CayleyTwoComplex::boundary(const Chain1& z) const { return boundary_impl<VertexCell>(*this, z); }
Chain1 CayleyTwoComplex::boundary(const Chain2& y) const { return boundary_impl<EdgeCell>(*this, y); }

std::pair<EdgeCell, int> CayleyTwoComplex::oriented_edge(const GroupElement& g, Generator s) const {
  if (!s.inverse) return {EdgeCell{g, s.index}, 1};
  return {EdgeCell{model_.step(g, s), s.index}, -1};
}

Chain1 CayleyTwoComplex::path_chain(const Path& p) const {
  Chain1 out;
  const auto steps = p.steps(model_);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto [edge, sign] = oriented_edge(p[i], steps[i]);
    out.add(edge, sign);
  }
  return out;
}

std::string CayleyTwoComplex::format(const VertexCell& v) const { return model_.format(v.g); }

std::string CayleyTwoComplex::format(const EdgeCell& e) const {
  return model_.format(e.g) + "|" + model_.letter(Generator{e.gen, false});
}

std::string CayleyTwoComplex::format(const SquareCell& s) const {
  return model_.format(s.g) + "|" + model_.letter(Generator{s.x, false}) + model_.letter(Generator{s.y, false});
}

Chain0 make_chain0(const CayleyTwoComplex& cx, const std::vector<std::pair<GroupElement, Integer>>& terms,
                   const Window& window) {
  Chain0 out;
  for (const auto& [g, k] : terms) {
    cx.model().validate(g);
    out.add(VertexCell{g}, k);
  }
  return cx.truncate(std::move(out), window);
}

namespace {

// Sums where an empty optional stands for +infinity.
std::optional<ExactReal> plus(const std::optional<ExactReal>& a, const std::optional<ExactReal>& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

std::optional<ExactReal> lower(const std::optional<ExactReal>& a, const std::optional<ExactReal>& b) {
  if (!a) return b;
  if (!b) return a;
  return min(*a, *b);
}

}  // namespace

Chain0 windowed_multiply(const CayleyTwoComplex& cx, const Chain0& u, const Chain0& v) {
  const GroupModel& model = cx.model();
  std::optional<ExactReal> min_u, min_v;
  for (const auto& [cell, k] : u.terms) min_u = lower(min_u, cx.value(cell));
  for (const auto& [cell, k] : v.terms) min_v = lower(min_v, cx.value(cell));

  // Missing terms of v sit at or above W_v, missing terms of u at or above W_u.
  const auto level = plus(lower(plus(min_u, v.window.level), plus(u.window.level, lower(min_v, v.window.level))),
                          std::optional<ExactReal>(-cx.defect()));
  const Window window{level};
  if (level && min_u && min_v && !(*min_u + *min_v - cx.defect() < *level))
    throw PreconditionError("empty result window " + level->to_string() + " for the product");

  Chain0 out;
  for (const auto& [gc, lambda] : u.terms)
    for (const auto& [hc, mu] : v.terms) out.add(VertexCell{model.multiply(gc.g, hc.g)}, lambda * mu);
  return cx.truncate(std::move(out), window);
}

namespace {

// Edges of the c-ray from x that lie below W.
void add_ray(const CayleyTwoComplex& cx, Chain1& out, const GroupElement& x, const GroupElement& c,
             const ExactReal& window, int sign) {
  const GroupModel& model = cx.model();
  const ExactReal phi_c = cx.value(c);
  const auto letters = model.normal_word(c);
  // Values of phi-bar on the prefixes of c, for the stopping rule.
  ExactReal min_prefix{0};
  {
    GroupElement p = model.identity();
    for (Generator s : letters) {
      p = model.step(p, s);
      min_prefix = min(min_prefix, cx.value(p));
    }
  }
  const ExactReal two_d = cx.defect() * 2;
  const ExactReal base = cx.value(x);
  GroupElement block = x;
  for (std::int64_t k = 0;; ++k) {
    if (!(base + phi_c * ExactReal(k) + min_prefix - two_d < window)) break;
    GroupElement v = block;
    for (Generator s : letters) {
      auto [edge, orient] = cx.oriented_edge(v, s);
      if (cx.value(edge) < window) out.add(edge, orient * sign);
      v = model.step(v, s);
    }
    block = std::move(v);
  }
}

}  // namespace

Chain1 ray_cycle(const CayleyTwoComplex& cx, const GroupElement& a, const GroupElement& b, const Path& q,
                 const GroupElement& c, const ExactReal& window) {
  const GroupModel& model = cx.model();
  model.validate(a);
  model.validate(b);
  model.validate(c);
  if (cx.value(c).sign() <= 0) throw PreconditionError("ray cycles need phi-bar(c) > 0");
  if (q.origin() != a || q.terminus() != b) throw PreconditionError("q must run from a to b");
  Chain1 z = cx.path_chain(q);
  for (const auto& [edge, k] : z.terms)
    if (!(cx.value(edge) < window))
      throw PreconditionError("window " + window.to_string() + " does not contain q (edge " + cx.format(edge) +
                              " at level " + cx.value(edge).to_string() + ")");
  add_ray(cx, z, b, c, window, 1);
  add_ray(cx, z, a, c, window, -1);
  z.window = Window::below(window);
  return z;
}

ZsCycle build_zs_cycle(const CayleyTwoComplex& cx, Generator s, std::int64_t n, const GroupElement& c,
                       const ExactReal& k, std::size_t radius) {
  const GroupModel& model = cx.model();
  model.validate(s);
  model.validate(c);
  if (n < 0) throw PreconditionError("z_s needs n >= 0");
  const GroupElement cn = model.power(c, n);
  const GroupElement scn = model.multiply(model.element(s), cn);
  Path first = concat(model,
                      concat(model, translate(model, cn, letter_power(model, c, -n)),
                             Path::from_steps(model, model.identity(), std::vector<Generator>{s})),
                      letter_power(model, c, n));

  VertexConstraint high;
  high.lower = ExactReal(n) * cx.value(c) - k;
  const SearchResult r = constrained_path_search(model, cx.phi(), cn, scn, high, radius);
  if (std::holds_alternative<NotFoundWithinBall>(r))
    throw PreconditionError("no p_s with " + high.describe() + " from " + model.format(cn) + " to " +
                            model.format(scn) + " within ball(" + std::to_string(radius) + ")");
  Path second = std::get<PathWitness>(r).path;
  Chain1 z = windowed_add(cx, cx.path_chain(first), windowed_negate(cx.path_chain(second)));
  const bool closed = cx.boundary(z).is_zero();
  return ZsCycle{std::move(first), std::move(second), std::move(z), closed};
}

namespace {

using SparseVec = std::map<std::size_t, Integer>;

void axpy(SparseVec& target, const Integer& q, const SparseVec& source) {
  if (q == 0) return;
  for (const auto& [i, v] : source) {
    auto [it, inserted] = target.try_emplace(i, 0);
    it->second -= q * v;
    if (it->second == 0) target.erase(it);
  }
}

struct EchelonColumn {
  SparseVec h;  // A u
  SparseVec u;  // combination of original columns
};

// Column echelon form A U = H by integer column operations: each pivot column
// is zero above its pivot row and pivot rows strictly increase.
std::vector<std::pair<std::size_t, EchelonColumn>> column_echelon(std::vector<SparseVec> columns) {
  std::map<std::size_t, std::vector<EchelonColumn>> buckets;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].empty()) continue;
    const std::size_t lead = columns[j].begin()->first;
    buckets[lead].push_back(EchelonColumn{std::move(columns[j]), SparseVec{{j, 1}}});
  }
  std::vector<std::pair<std::size_t, EchelonColumn>> pivots;
  while (!buckets.empty()) {
    auto node = buckets.extract(buckets.begin());
    const std::size_t r = node.key();
    std::vector<EchelonColumn> cols = std::move(node.mapped());
    while (cols.size() > 1) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < cols.size(); ++i)
        if (abs(cols[i].h.at(r)) < abs(cols[best].h.at(r))) best = i;
      std::swap(cols[0], cols[best]);
      std::vector<EchelonColumn> keep{std::move(cols[0])};
      const Integer p = keep[0].h.at(r);
      for (std::size_t i = 1; i < cols.size(); ++i) {
        const Integer q = cols[i].h.at(r) / p;  // truncating division; remainder smaller than |p|
        axpy(cols[i].h, q, keep[0].h);
        axpy(cols[i].u, q, keep[0].u);
        if (cols[i].h.empty()) continue;
        const std::size_t lead = cols[i].h.begin()->first;
        if (lead == r)
          keep.push_back(std::move(cols[i]));
        else
          buckets[lead].push_back(std::move(cols[i]));
      }
      cols = std::move(keep);
    }
    pivots.emplace_back(r, std::move(cols[0]));
  }
  return pivots;
}

// f supported on {row} and the pivot rows above it, with f(h_k) = 0 for every
// pivot k above row (and f(h_skip) left alone when row is itself a pivot).
std::map<std::size_t, Rational> back_solve(const std::vector<std::pair<std::size_t, EchelonColumn>>& pivots,
                                           std::size_t row) {
  std::map<std::size_t, Rational> f{{row, Rational(1)}};
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const auto& [p, col] = pivots[k];
    if (p >= row) continue;
    Rational acc = 0;
    for (const auto& [r, coeff] : f) {
      auto it = col.h.find(r);
      if (it != col.h.end()) acc += coeff * Rational(it->second);
    }
    if (acc != 0) f[p] = -acc / Rational(col.h.at(p));
  }
  return f;
}

}  // namespace

namespace {

// Squares at levels [min(z) - slack, W) based within two steps of z's vertices' radius.
std::vector<SquareCell> enumerate_columns(const CayleyTwoComplex& cx, const Chain1& zt, const Window& w,
                                          const SolverOptions& options, ExactReal& lower_level) {
  const GroupModel& model = cx.model();
  std::optional<ExactReal> z_min;
  std::size_t radius = 0;
  for (const auto& [edge, k] : zt.terms) {
    z_min = lower(z_min, cx.value(edge));
    radius = std::max({radius, edge.g.length(), step_pos(model, edge.g, edge.gen).length()});
  }
  std::vector<SquareCell> columns;
  if (!z_min) return columns;
  lower_level = *z_min - options.slack;
  if (!cx.has_two_cells()) return columns;
  const auto ball = model.ball(radius + 2);
  const auto& types = cx.square_types();
  auto cell = [&](std::size_t k) { return SquareCell{ball[k / types.size()], types[k % types.size()].first, types[k % types.size()].second}; };
  const auto keep = kernels::parallel::map_range(ball.size() * types.size(), [&](std::size_t k) {
    const ExactReal v = cx.value(cell(k));
    return !(v < lower_level) && w.contains(v);
  });
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (keep[k]) columns.push_back(cell(k));
  if (columns.size() > options.cell_cap) throw CapExceeded("solver 2-cells", columns.size(), options.cell_cap);
  std::sort(columns.begin(), columns.end());
  return columns;
}

}  // namespace

std::vector<SquareCell> solver_columns(const CayleyTwoComplex& cx, const Chain1& z, const ExactReal& window,
                                       const SolverOptions& options) {
  const Window w = min(Window::below(window), z.window);
  ExactReal lower_level{0};
  return enumerate_columns(cx, cx.truncate(z, w), w, options, lower_level);
}

SolveReport windowed_boundary_solve(const CayleyTwoComplex& cx, const Chain1& z, const ExactReal& window,
                                    const SolverOptions& options) {
  const Window w = min(Window::below(window), z.window);
  const Chain1 zt = cx.truncate(z, w);

  SolveReport report{BoundarySolution{Chain2{{}, w}}, {}, {}, w, ExactReal(0)};
  if (zt.is_zero()) return report;
  report.columns = enumerate_columns(cx, zt, w, options, report.lower_level);

  // Rows: edges below W touched by z or by a column boundary.
  std::map<EdgeCell, std::size_t> row_index;
  for (const auto& [edge, k] : zt.terms) row_index.emplace(edge, 0);
  auto column_faces = kernels::parallel::map_range(report.columns.size(), [&](std::size_t j) {
    std::vector<std::pair<EdgeCell, int>> fs;
    for (auto& [e, sign] : cx.faces(report.columns[j]))
      if (w.contains(cx.value(e))) fs.emplace_back(std::move(e), sign);
    return fs;
  });
  for (const auto& fs : column_faces)
    for (const auto& [e, sign] : fs) row_index.emplace(e, 0);
  std::size_t next = 0;
  for (auto& [edge, idx] : row_index) {
    idx = next++;
    report.rows.push_back(edge);
  }

  std::vector<SparseVec> columns(report.columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [e, sign] : column_faces[j]) {
      auto& entry = columns[j][row_index.at(e)];
      entry += sign;
      if (entry == 0) columns[j].erase(row_index.at(e));
    }
  const auto pivots = column_echelon(std::move(columns));
  std::map<std::size_t, std::size_t> pivot_of_row;
  for (std::size_t k = 0; k < pivots.size(); ++k) pivot_of_row.emplace(pivots[k].first, k);

  SparseVec residual;
  for (const auto& [edge, k] : zt.terms) residual.emplace(row_index.at(edge), k);
  SparseVec x;  // pivot index -> coefficient
  while (!residual.empty()) {
    const auto [row, value] = *residual.begin();
    auto pk = pivot_of_row.find(row);
    const bool integral_failure = pk != pivot_of_row.end() && value % pivots[pk->second].second.h.at(row) != 0;
    if (pk == pivot_of_row.end() || integral_failure) {
      ObstructionCertificate cert;
      const auto f = back_solve(pivots, row);
      Rational scale = 1;
      if (integral_failure) {
        cert.kind = ObstructionKind::Integral;
        scale = Rational(1) / Rational(pivots[pk->second].second.h.at(row));
      }
      for (const auto& [r, coeff] : f)
        if (coeff != 0) cert.functional.emplace(report.rows[r], coeff * scale);
      cert.pairing = Rational(value) * scale;
      report.outcome = std::move(cert);
      return report;
    }
    const auto& col = pivots[pk->second].second;
    const Integer q = value / col.h.at(row);
    x.emplace(pk->second, q);
    axpy(residual, q, col.h);
  }

  Chain2 y{{}, w};
  SparseVec coeffs;
  for (const auto& [k, q] : x) axpy(coeffs, -q, pivots[k].second.u);
  for (const auto& [j, v] : coeffs) y.add(report.columns[j], v);
  report.outcome = BoundarySolution{std::move(y)};
  return report;
}

bool verify_boundary_solution(const CayleyTwoComplex& cx, const Chain1& z, const Chain2& y, const Window& window) {
  const Window w = min(window, z.window);
  Chain1 by = cx.boundary(y);
  by.window = Window::infinite();
  return cx.truncate(by, w).terms == cx.truncate(z, w).terms;
}

bool verify_obstruction(const CayleyTwoComplex& cx, const Chain1& z, const std::vector<SquareCell>& columns,
                        const ObstructionCertificate& cert) {
  auto pair_with = [&](const auto& terms) {
    Rational acc = 0;
    for (const auto& [edge, k] : terms) {
      auto it = cert.functional.find(edge);
      if (it != cert.functional.end()) acc += it->second * Rational(k);
    }
    return acc;
  };
  auto is_integer = [](const Rational& r) { return denominator(r) == 1; };
  for (const auto& cell : columns) {
    std::map<EdgeCell, Integer> faces;
    for (const auto& [e, sign] : cx.faces(cell))
      if (z.window.contains(cx.value(e))) faces[e] += sign;
    const Rational v = pair_with(faces);
    if (cert.kind == ObstructionKind::Rational ? v != 0 : !is_integer(v)) return false;
  }
  const Rational fz = pair_with(z.terms);
  if (fz != cert.pairing) return false;
  return cert.kind == ObstructionKind::Rational ? fz != 0 : !is_integer(fz);
}

ExtractedPath keep_negative_and_extract_path(const CayleyTwoComplex& cx, const Chain2& y, const Chain1& z,
                                             const GroupElement& a, const GroupElement& b, const GroupElement& c) {
  const GroupModel& model = cx.model();
  Chain2 negative{{}, y.window};
  for (const auto& [cell, k] : y.terms)
    if (cx.value(cell).sign() < 0) negative.terms.emplace(cell, k);
  Chain1 residual = windowed_add(cx, cx.boundary(negative), windowed_negate(z));
  bool nonneg = true;
  for (const auto& [edge, k] : residual.terms)
    if (cx.value(edge).sign() < 0) nonneg = false;

  // Support graph of the residual; a and b are always present so a = b joins trivially.
  std::vector<GroupElement> verts{a, b};
  for (const auto& [edge, k] : residual.terms) {
    verts.push_back(edge.g);
    verts.push_back(step_pos(model, edge.g, edge.gen));
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
  std::vector<kernels::PairIndex> edges;
  std::vector<std::vector<std::size_t>> adj(verts.size());
  for (const auto& [edge, k] : residual.terms) {
    std::size_t i = index.at(edge.g), j = index.at(step_pos(model, edge.g, edge.gen));
    adj[i].push_back(j);
    adj[j].push_back(i);
    edges.push_back({std::min(i, j), std::max(i, j)});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  const ComponentCertificate comps = components(verts.size(), edges);

  // Candidate ray vertices a c^m and b c^n present in the support.
  auto ray_hits = [&](const GroupElement& x) {
    std::vector<std::pair<std::int64_t, std::size_t>> hits;
    GroupElement v = x;
    for (std::int64_t m = 0; m <= static_cast<std::int64_t>(verts.size()); ++m) {
      if (auto it = index.find(v); it != index.end()) hits.emplace_back(m, it->second);
      v = model.multiply(v, c);
    }
    return hits;
  };
  const auto from_a = ray_hits(a);
  const auto from_b = ray_hits(b);
  std::optional<std::pair<std::pair<std::int64_t, std::size_t>, std::pair<std::int64_t, std::size_t>>> choice;
  for (const auto& ha : from_a) {
    for (const auto& hb : from_b)
      if (comps.component[ha.second] == comps.component[hb.second]) {
        choice.emplace(ha, hb);
        break;
      }
    if (choice) break;
  }
  if (!choice) {
    std::string dump;
    for (const auto& [edge, k] : residual.terms) dump += " " + cx.format(edge) + ":" + k.str();
    throw PreconditionError("support of boundary(y-) - z joins no a c^m to b c^n; support:" + dump);
  }

  // Breadth-first path inside the support.
  const std::size_t src = choice->first.second, dst = choice->second.second;
  std::vector<std::size_t> parent(verts.size(), verts.size());
  parent[src] = src;
  std::deque<std::size_t> queue{src};
  while (!queue.empty() && parent[dst] == verts.size()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v])
      if (parent[w] == verts.size()) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  std::vector<GroupElement> inner;
  for (std::size_t v = dst;; v = parent[v]) {
    inner.push_back(verts[v]);
    if (v == src) break;
  }
  std::reverse(inner.begin(), inner.end());

  const std::int64_t m = choice->first.first, n = choice->second.first;
  Path path = concat(model,
                     concat(model, translate(model, a, letter_power(model, c, m)), Path(model, std::move(inner))),
                     invert(translate(model, b, letter_power(model, c, n))));
  const Extrema e = phi_extrema(model, cx.phi(), path);
  return ExtractedPath{std::move(path), e.min, e.max, m, n, std::move(residual), nonneg};
}

}  // namespace qbns
