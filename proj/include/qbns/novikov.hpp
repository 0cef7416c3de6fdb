#pragma once

// Windowed Novikov chains over the Cayley 2-complex of F_n or F_n x Z^k.
//
// A windowed chain is authoritative on phi-levels below its window and
// says nothing above it. The 2-cells are the commutator squares of
// commuting generator pairs; the free group has none. The value of a cell is
// the minimum of phi-bar over its vertices.

#include "qbns/exact.hpp"
#include "qbns/group.hpp"
#include "qbns/path.hpp"
#include "qbns/quasimorphism.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qbns {

struct VertexCell {
  GroupElement g;
  friend auto operator<=>(const VertexCell&, const VertexCell&) = default;
};

/// The edge from g to g s for a positive generator s.
struct EdgeCell {
  GroupElement g;
  std::uint16_t gen = 0;
  friend auto operator<=>(const EdgeCell&, const EdgeCell&) = default;
};

/// The square at g spanned by commuting generators x < y:
/// boundary e(g,x) + e(gx,y) - e(gy,x) - e(g,y).
struct SquareCell {
  GroupElement g;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  friend auto operator<=>(const SquareCell&, const SquareCell&) = default;
};

template <class Cell>
constexpr int cell_dimension();
template <>
constexpr int cell_dimension<VertexCell>() { return 0; }
template <>
constexpr int cell_dimension<EdgeCell>() { return 1; }
template <>
constexpr int cell_dimension<SquareCell>() { return 2; }

template <class Cell>
struct WindowedChain {
  static constexpr int dimension = cell_dimension<Cell>();
  std::map<Cell, Integer> terms;  // no zero coefficients; every cell below the window
  Window window;

  bool is_zero() const { return terms.empty(); }
  Integer coefficient(const Cell& cell) const {
    auto it = terms.find(cell);
    return it == terms.end() ? Integer(0) : it->second;
  }
  void add(const Cell& cell, const Integer& k) {
    if (k == 0) return;
    auto [it, inserted] = terms.try_emplace(cell, k);
    if (!inserted) {
      it->second += k;
      if (it->second == 0) terms.erase(it);
    }
  }
  friend bool operator==(const WindowedChain&, const WindowedChain&) = default;
};

using Chain0 = WindowedChain<VertexCell>;
using Chain1 = WindowedChain<EdgeCell>;
using Chain2 = WindowedChain<SquareCell>;

class CayleyTwoComplex {
 public:
  /// defect is D*, an upper bound on D(phi-bar) used for window arithmetic.
  CayleyTwoComplex(GroupModel model, Quasimorphism phi, ExactReal defect);

  const GroupModel& model() const { return model_; }
  const Quasimorphism& phi() const { return phi_; }
  const ExactReal& defect() const { return defect_; }

  /// Commuting generator pairs (x, y), x < y, that span squares.
  const std::vector<std::pair<std::uint16_t, std::uint16_t>>& square_types() const { return square_types_; }
  bool has_two_cells() const { return !square_types_.empty(); }

  ExactReal value(const GroupElement& g) const { return phi_.homogeneous_value(model_, g); }
  ExactReal value(const VertexCell& v) const { return value(v.g); }
  ExactReal value(const EdgeCell& e) const;
  ExactReal value(const SquareCell& s) const;

  std::vector<std::pair<VertexCell, int>> faces(const EdgeCell& e) const;
  std::vector<std::pair<EdgeCell, int>> faces(const SquareCell& s) const;
  std::vector<SquareCell> squares_at(const GroupElement& g) const;

  /// Drops every term at or above the window.
  template <class Cell>
  WindowedChain<Cell> truncate(WindowedChain<Cell> chain, const Window& window) const {
    chain.window = min(chain.window, window);
    std::erase_if(chain.terms, [&](const auto& kv) { return !chain.window.contains(value(kv.first)); });
    return chain;
  }

  /// Largest amount by which a face of any term lies below the term (0 under the min rule).
  template <class Cell>
  ExactReal boundary_drop(const WindowedChain<Cell>& chain) const {
    ExactReal drop{0};
    for (const auto& [cell, k] : chain.terms) {
      const ExactReal v = value(cell);
      for (const auto& [face, sign] : faces(cell)) drop = max(drop, v - value(face));
    }
    return drop;
  }

  Chain0 boundary(const Chain1& z) const;
  Chain1 boundary(const Chain2& y) const;

  /// The 1-chain traced by a path, with an infinite window.
  Chain1 path_chain(const Path& p) const;
  /// Edge cell and orientation of the step g -> g s.
  std::pair<EdgeCell, int> oriented_edge(const GroupElement& g, Generator s) const;

  std::string format(const VertexCell& v) const;
  std::string format(const EdgeCell& e) const;
  std::string format(const SquareCell& s) const;

 private:
  GroupModel model_;
  Quasimorphism phi_;
  ExactReal defect_;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> square_types_;
};

template <class Cell>
WindowedChain<Cell> windowed_add(const CayleyTwoComplex& cx, const WindowedChain<Cell>& u,
                                 const WindowedChain<Cell>& v) {
  WindowedChain<Cell> out = u;
  for (const auto& [cell, k] : v.terms) out.add(cell, k);
  return cx.truncate(std::move(out), min(u.window, v.window));
}

template <class Cell>
WindowedChain<Cell> windowed_negate(const WindowedChain<Cell>& u) {
  WindowedChain<Cell> out = u;
  for (auto& [cell, k] : out.terms) k = -k;
  return out;
}

template <class Cell>
WindowedChain<Cell> windowed_scale(const WindowedChain<Cell>& u, const Integer& lambda) {
  WindowedChain<Cell> out{{}, u.window};
  if (lambda != 0)
    for (const auto& [cell, k] : u.terms) out.terms.emplace(cell, k * lambda);
  return out;
}

/// Product of group-ring elements. The result window is
/// min(min phi(u) + W_v, W_u + min(min phi(v), W_v)) - D*.
/// Throws PreconditionError when that window lies below every possible product level.
Chain0 windowed_multiply(const CayleyTwoComplex& cx, const Chain0& u, const Chain0& v);

/// A finite 0-chain from (element, coefficient) pairs.
Chain0 make_chain0(const CayleyTwoComplex& cx, const std::vector<std::pair<GroupElement, Integer>>& terms,
                   const Window& window = Window::infinite());

/// q plus the c-ray from b minus the c-ray from a, truncated below W.
/// Throws PreconditionError when an edge of q is not below W or phi-bar(c) <= 0.
Chain1 ray_cycle(const CayleyTwoComplex& cx, const GroupElement& a, const GroupElement& b, const Path& q,
                 const GroupElement& c, const ExactReal& window);

struct ZsCycle {
  Path first;       // (c^n)(1,c^-1)^n (1,s) (1,c)^n
  Path second;      // p_s from c^n to s c^n with phi-bar >= n phi-bar(c) - K
  Chain1 z;
  bool is_cycle = false;
};

/// Throws PreconditionError when no p_s exists within ball(radius).
ZsCycle build_zs_cycle(const CayleyTwoComplex& cx, Generator s, std::int64_t n, const GroupElement& c,
                       const ExactReal& k, std::size_t radius);

enum class ObstructionKind { Rational, Integral };

/// A functional f on edges with f(boundary of every column) = 0 (Rational) or
/// integral (Integral), while f(z) is non-zero or non-integral.
struct ObstructionCertificate {
  ObstructionKind kind = ObstructionKind::Rational;
  std::map<EdgeCell, Rational> functional;
  Rational pairing;  // f(z)
};

struct BoundarySolution {
  Chain2 y;
};

struct SolverOptions {
  ExactReal slack{1};
  std::size_t cell_cap = 50000;
};

struct SolveReport {
  std::variant<BoundarySolution, ObstructionCertificate> outcome;
  std::vector<SquareCell> columns;  // the enumerated 2-cells, in order
  std::vector<EdgeCell> rows;       // the edges below the window that take part
  Window window;
  ExactReal lower_level;            // min level of z minus slack

  bool solved() const { return std::holds_alternative<BoundarySolution>(outcome); }
};

/// The 2-cells the solver enumerates for z below W, sorted.
std::vector<SquareCell> solver_columns(const CayleyTwoComplex& cx, const Chain1& z, const ExactReal& window,
                                       const SolverOptions& options = {});

/// Solves boundary(y) = z on edges below W over the integers.
SolveReport windowed_boundary_solve(const CayleyTwoComplex& cx, const Chain1& z, const ExactReal& window,
                                    const SolverOptions& options = {});

/// boundary(y) and z agree coefficient by coefficient below W.
bool verify_boundary_solution(const CayleyTwoComplex& cx, const Chain1& z, const Chain2& y, const Window& window);
/// The functional annihilates (or is integral on) every column boundary and pairs with z as recorded.
bool verify_obstruction(const CayleyTwoComplex& cx, const Chain1& z, const std::vector<SquareCell>& columns,
                        const ObstructionCertificate& cert);

struct ExtractedPath {
  Path path;
  ExactReal min_phi;
  ExactReal max_phi;
  std::int64_t m = 0;             // the path leaves the a-ray at a c^m
  std::int64_t n = 0;             // and joins the b-ray at b c^n
  Chain1 residual;                // boundary(y-) - z
  bool residual_nonnegative = false;
};

/// Keeps the negative cells of y, checks that boundary(y-) - z lives at levels >= 0
/// and extracts a path from a to b through that support.
ExtractedPath keep_negative_and_extract_path(const CayleyTwoComplex& cx, const Chain2& y, const Chain1& z,
                                             const GroupElement& a, const GroupElement& b, const GroupElement& c);

}  // namespace qbns
