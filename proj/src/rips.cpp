#include "qbns/rips.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace qbns {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), sets_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (y < x) std::swap(x, y);
  parent_[y] = x;
  --sets_;
  return true;
}

namespace {

std::vector<GroupElement> canonical_vertices(const GroupModel& model, std::span<const GroupElement> subset,
                                             std::size_t cap) {
  std::vector<GroupElement> v(subset.begin(), subset.end());
  for (const auto& g : v) model.validate(g);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() > cap) throw CapExceeded("Rips vertex count", v.size(), cap);
  return v;
}

}  // namespace

RipsGraph build_rips(const GroupModel& model, std::span<const GroupElement> subset, std::size_t n,
                     std::size_t vertex_cap) {
  if (n < 1) throw PreconditionError("Rips parameter n must be >= 1");
  RipsGraph g;
  g.vertices = canonical_vertices(model, subset, vertex_cap);
  g.parameter = n;
  g.edges = kernels::parallel::upper_pairs_where(
      g.vertices.size(), [&](std::size_t i, std::size_t j) { return model.distance(g.vertices[i], g.vertices[j]) < n; });
  return g;
}

ComponentCertificate components(std::size_t vertex_count, std::span<const kernels::PairIndex> edges) {
  std::vector<kernels::PairIndex> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  DisjointSets sets(vertex_count);
  std::vector<std::vector<std::size_t>> forest(vertex_count);
  for (const auto& e : sorted)
    if (sets.unite(e.i, e.j)) {
      forest[e.i].push_back(e.j);
      forest[e.j].push_back(e.i);
    }

  ComponentCertificate cert;
  cert.component.assign(vertex_count, 0);
  cert.parent.assign(vertex_count, std::nullopt);
  cert.count = sets.set_count();
  std::vector<bool> seen(vertex_count, false);
  for (std::size_t root = 0; root < vertex_count; ++root) {
    if (seen[root]) continue;
    // Vertices are visited in index order, so each root is its component's smallest vertex.
    std::queue<std::size_t> queue;
    queue.push(root);
    seen[root] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      cert.component[v] = root;
      auto next = forest[v];
      std::sort(next.begin(), next.end());
      for (std::size_t w : next)
        if (!seen[w]) {
          seen[w] = true;
          cert.parent[w] = v;
          queue.push(w);
        }
    }
  }
  return cert;
}

ComponentCertificate components(const RipsGraph& graph) { return components(graph.vertices.size(), graph.edges); }

bool verify_components(const GroupModel& model, std::span<const GroupElement> vertices, std::size_t n,
                       const ComponentCertificate& cert) {
  const std::size_t count = vertices.size();
  if (cert.component.size() != count || cert.parent.size() != count) return false;
  DisjointSets sets(count);
  for (std::size_t v = 0; v < count; ++v) {
    if (!cert.parent[v]) {
      if (cert.component[v] != v) return false;
      continue;
    }
    const std::size_t p = *cert.parent[v];
    if (p >= count || p == v) return false;
    if (model.distance(vertices[v], vertices[p]) >= n) return false;
    if (!sets.unite(v, p)) return false;  // a cycle is not a forest
  }
  if (sets.set_count() != cert.count) return false;
  for (std::size_t v = 0; v < count; ++v)
    if (sets.find(v) != cert.component[v]) return false;
  return true;
}

bool verify_separation(const GroupModel& model, std::span<const GroupElement> vertices, std::size_t n,
                       const ComponentCertificate& cert) {
  if (cert.component.size() != vertices.size()) return false;
  const auto crossing = kernels::parallel::upper_pairs_where(vertices.size(), [&](std::size_t i, std::size_t j) {
    return cert.component[i] != cert.component[j] && model.distance(vertices[i], vertices[j]) < n;
  });
  return crossing.empty();
}

bool ConnectivityProfile::monotone() const {
  for (std::size_t k = 1; k < component_counts.size(); ++k)
    if (component_counts[k] > component_counts[k - 1]) return false;
  return true;
}

ConnectivityProfile connectivity_profile(const GroupModel& model, std::span<const GroupElement> subset,
                                         std::size_t max_parameter, std::size_t vertex_cap) {
  if (max_parameter < 1) throw PreconditionError("connectivity_profile needs n_max >= 1");
  ConnectivityProfile profile;
  profile.max_parameter = max_parameter;
  profile.vertices = canonical_vertices(model, subset, vertex_cap);
  const auto& verts = profile.vertices;
  const std::size_t count = verts.size();

  // Pairs ordered by distance; at parameter n the edges are exactly those with d <= n - 1.
  auto close_pairs = kernels::parallel::upper_pairs_where(
      count, [&](std::size_t i, std::size_t j) { return model.distance(verts[i], verts[j]) < max_parameter; });
  std::vector<std::size_t> dist(close_pairs.size());
  for (std::size_t k = 0; k < close_pairs.size(); ++k)
    dist[k] = model.distance(verts[close_pairs[k].i], verts[close_pairs[k].j]);
  std::vector<std::size_t> order(close_pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  DisjointSets sets(count);
  std::size_t next = 0;
  for (std::size_t n = 1; n <= max_parameter; ++n) {
    while (next < order.size() && dist[order[next]] < n) {
      sets.unite(close_pairs[order[next]].i, close_pairs[order[next]].j);
      ++next;
    }
    profile.component_counts.push_back(sets.set_count());
    if (!profile.threshold && sets.set_count() <= 1) profile.threshold = n;
  }

  auto edges_at = [&](std::size_t n) {
    std::vector<kernels::PairIndex> e;
    for (std::size_t k = 0; k < close_pairs.size(); ++k)
      if (dist[k] < n) e.push_back(close_pairs[k]);
    return e;
  };
  if (profile.threshold) {
    profile.connected_witness = components(count, edges_at(*profile.threshold));
    if (*profile.threshold > 1) profile.separated_witness = components(count, edges_at(*profile.threshold - 1));
  } else {
    profile.separated_witness = components(count, edges_at(max_parameter));
  }
  return profile;
}

}  // namespace qbns
