#pragma once

// 1-skeletons of Rips complexes R_S(A, n) on finite subsets of G and
// connectivity certificates for them.
//
// Edges use the strict rule 0 < d(x, y) < n.

#include "qbns/group.hpp"
#include "qbns/kernels.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qbns {

inline constexpr std::size_t kDefaultRipsVertexCap = 5000;

struct RipsGraph {
  std::vector<GroupElement> vertices;  // shortlex, no duplicates
  std::size_t parameter = 1;           // n
  std::vector<kernels::PairIndex> edges;  // i < j, row-major
};

/// Union-find with the smaller index as representative.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  /// Returns true when x and y were in different sets.
  bool unite(std::size_t x, std::size_t y);
  std::size_t set_count() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t sets_;
};

struct ComponentCertificate {
  std::vector<std::size_t> component;             // representative (smallest vertex index) per vertex
  std::vector<std::optional<std::size_t>> parent;  // spanning-forest parent; empty at representatives
  std::size_t count = 0;
};

RipsGraph build_rips(const GroupModel& model, std::span<const GroupElement> subset, std::size_t n,
                     std::size_t vertex_cap = kDefaultRipsVertexCap);

ComponentCertificate components(std::size_t vertex_count, std::span<const kernels::PairIndex> edges);
ComponentCertificate components(const RipsGraph& graph);

/// Checks that every forest edge is a genuine edge (d < n) and that replaying
/// the forest reproduces the component labels.
bool verify_components(const GroupModel& model, std::span<const GroupElement> vertices, std::size_t n,
                       const ComponentCertificate& cert);

/// Checks that no pair in different components is joined by an edge at parameter n.
bool verify_separation(const GroupModel& model, std::span<const GroupElement> vertices, std::size_t n,
                       const ComponentCertificate& cert);

struct ConnectivityProfile {
  std::size_t max_parameter = 0;
  std::vector<std::size_t> component_counts;  // index k holds the count at n = k + 1
  std::optional<std::size_t> threshold;         // first connected n, if <= max_parameter
  std::vector<GroupElement> vertices;
  std::optional<ComponentCertificate> connected_witness;  // at threshold
  std::optional<ComponentCertificate> separated_witness;  // at threshold - 1 (or max_parameter)

  bool monotone() const;
};

ConnectivityProfile connectivity_profile(const GroupModel& model, std::span<const GroupElement> subset,
                                         std::size_t max_parameter,
                                         std::size_t vertex_cap = kDefaultRipsVertexCap);

}  // namespace qbns
