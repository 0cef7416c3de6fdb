#pragma once

// Paths in the Cayley graph and their algebra: concatenation by translation,
// inversion, powers, and extrema of a function along a path.

#include "qbns/exact.hpp"
#include "qbns/group.hpp"
#include "qbns/quasimorphism.hpp"

#include <span>
#include <string>
#include <vector>

namespace qbns {

/// A non-empty vertex sequence (g_0, ..., g_k) with g_i^-1 g_{i+1} in S or S^-1.
class Path {
 public:
  /// Validates the adjacency invariant; throws PreconditionError otherwise.
  Path(const GroupModel& model, std::vector<GroupElement> vertices);

  static Path single(GroupElement g);
  static Path from_steps(const GroupModel& model, const GroupElement& origin, std::span<const Generator> steps);

  const std::vector<GroupElement>& vertices() const { return vertices_; }
  const GroupElement& operator[](std::size_t i) const { return vertices_[i]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return vertices_.size() - 1; }
  const GroupElement& origin() const { return vertices_.front(); }
  const GroupElement& terminus() const { return vertices_.back(); }

  std::vector<Generator> steps(const GroupModel& model) const;

  friend bool operator==(const Path&, const Path&) = default;

 private:
  explicit Path(std::vector<GroupElement> vertices) : vertices_(std::move(vertices)) {}
  friend Path invert(const Path& p);
  friend Path concat(const GroupModel& model, const Path& p, const Path& q);

  std::vector<GroupElement> vertices_;
};

bool is_adjacent_sequence(const GroupModel& model, std::span<const GroupElement> vertices);

/// pq = (g_0, ..., g_k, g_k h_0^-1 h_1, ..., g_k h_0^-1 h_n).
Path concat(const GroupModel& model, const Path& p, const Path& q);
/// (g_k, ..., g_0).
Path invert(const Path& p);
/// p^n for n != 0; negative n powers the inverse.
Path power(const GroupModel& model, const Path& p, std::int64_t n);
/// The translate (g) p, starting at g.
Path translate(const GroupModel& model, const GroupElement& g, const Path& p);
/// The path from 1 that spells the normal-form word of g.
Path straight_path(const GroupModel& model, const GroupElement& g);
/// The path from g to h spelling the normal form of g^-1 h.
Path geodesic(const GroupModel& model, const GroupElement& g, const GroupElement& h);
/// The path from 1 spelling the normal form of g (or of g^-1 when m < 0) |m| times.
Path letter_power(const GroupModel& model, const GroupElement& g, std::int64_t m);

struct Extrema {
  ExactReal min;
  ExactReal max;
};

/// Min and max of phi-bar over every vertex g_0, ..., g_k.
Extrema phi_extrema(const GroupModel& model, const Quasimorphism& phi, const Path& p);

/// Origin and step letters, e.g. {"ab", "aBc"}.
struct PathText {
  std::string origin;
  std::string steps;
};

PathText to_text(const GroupModel& model, const Path& p);
/// Throws PreconditionError on malformed input.
Path from_text(const GroupModel& model, const PathText& text);

}  // namespace qbns
