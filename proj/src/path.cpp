#include "qbns/path.hpp"

namespace qbns {

bool is_adjacent_sequence(const GroupModel& model, std::span<const GroupElement> vertices) {
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if (!model.step_between(vertices[i], vertices[i + 1])) return false;
  return true;
}

Path::Path(const GroupModel& model, std::vector<GroupElement> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw PreconditionError("a path has at least one vertex");
  for (const auto& v : vertices_) model.validate(v);
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
    if (!model.step_between(vertices_[i], vertices_[i + 1]))
      throw PreconditionError("path vertices " + std::to_string(i) + " and " + std::to_string(i + 1) +
                              " are not adjacent (" + model.format(vertices_[i]) + ", " +
                              model.format(vertices_[i + 1]) + ")");
}

Path Path::single(GroupElement g) { return Path(std::vector<GroupElement>{std::move(g)}); }

Path Path::from_steps(const GroupModel& model, const GroupElement& origin, std::span<const Generator> steps) {
  model.validate(origin);
  std::vector<GroupElement> v{origin};
  v.reserve(steps.size() + 1);
  for (Generator s : steps) v.push_back(model.step(v.back(), s));
  return Path(std::move(v));
}

std::vector<Generator> Path::steps(const GroupModel& model) const {
  std::vector<Generator> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    auto s = model.step_between(vertices_[i], vertices_[i + 1]);
    if (!s) throw PreconditionError("path is not adjacent at vertex " + std::to_string(i));
    out.push_back(*s);
  }
  return out;
}

Path concat(const GroupModel& model, const Path& p, const Path& q) {
  const GroupElement shift = model.multiply(p.terminus(), model.inverse(q.origin()));
  std::vector<GroupElement> v = p.vertices_;
  v.reserve(p.vertex_count() + q.edge_count());
  for (std::size_t i = 1; i < q.vertex_count(); ++i) v.push_back(model.multiply(shift, q[i]));
  return Path(std::move(v));
}

Path invert(const Path& p) { return Path(std::vector<GroupElement>(p.vertices_.rbegin(), p.vertices_.rend())); }

Path power(const GroupModel& model, const Path& p, std::int64_t n) {
  if (n == 0) throw PreconditionError("path power needs n != 0");
  const Path base = n < 0 ? invert(p) : p;
  Path out = base;
  for (std::int64_t i = 1; i < (n < 0 ? -n : n); ++i) out = concat(model, out, base);
  return out;
}

Path translate(const GroupModel& model, const GroupElement& g, const Path& p) {
  return concat(model, Path::single(g), p);
}

Path straight_path(const GroupModel& model, const GroupElement& g) {
  const auto word = model.normal_word(g);
  return Path::from_steps(model, model.identity(), word);
}

Path geodesic(const GroupModel& model, const GroupElement& g, const GroupElement& h) {
  const auto word = model.normal_word(model.multiply(model.inverse(g), h));
  return Path::from_steps(model, g, word);
}

Path letter_power(const GroupModel& model, const GroupElement& g, std::int64_t m) {
  const Path base = straight_path(model, m < 0 ? model.inverse(g) : g);
  if (m == 0 || base.edge_count() == 0) return Path::single(model.identity());
  return power(model, base, m < 0 ? -m : m);
}

Extrema phi_extrema(const GroupModel& model, const Quasimorphism& phi, const Path& p) {
  Extrema e{phi.homogeneous_value(model, p.origin()), {}};
  e.max = e.min;
  for (std::size_t i = 1; i < p.vertex_count(); ++i) {
    const ExactReal v = phi.homogeneous_value(model, p[i]);
    if (v < e.min) e.min = v;
    if (e.max < v) e.max = v;
  }
  return e;
}

PathText to_text(const GroupModel& model, const Path& p) {
  const auto steps = p.steps(model);
  return {model.format(p.origin()), model.format_word(steps)};
}

Path from_text(const GroupModel& model, const PathText& text) {
  const GroupElement origin = model.parse(text.origin);
  const auto steps = model.parse_word(text.steps);
  return Path::from_steps(model, origin, steps);
}

}  // namespace qbns
