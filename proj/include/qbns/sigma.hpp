#pragma once

// Evidence for quasi-BNS membership: phi-constrained path search, the
// explicit constants of the characterisation theorem, q-libraries, peak
// reduction, the F_2 x Z kernel normalizer and the free-group obstruction.
//
// A failed search is evidence at the stated (K, R), never a theorem.

#include "qbns/exact.hpp"
#include "qbns/group.hpp"
#include "qbns/path.hpp"
#include "qbns/quasimorphism.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qbns {

struct PathWitness {
  Path path;
  ExactReal min_phi;
  ExactReal max_phi;
  std::optional<std::size_t> radius;  // search radius, when the path came from a search
};

PathWitness make_witness(const GroupModel& model, const Quasimorphism& phi, Path path,
                         std::optional<std::size_t> radius = std::nullopt);

/// Recomputes extrema and endpoints; false on any mismatch.
bool replay_witness(const GroupModel& model, const Quasimorphism& phi, const PathWitness& w,
                    const GroupElement& from, const GroupElement& to);

/// Admissible vertices: lower bound and optional upper bound on phi-bar, each strict or not.
struct VertexConstraint {
  std::optional<ExactReal> lower;
  bool lower_strict = false;
  std::optional<ExactReal> upper;
  bool upper_strict = false;

  bool admits(const ExactReal& value) const;
  std::string describe() const;
};

struct LowerOnly {
  ExactReal k;  // phi-bar >= -K
};
struct TwoSided {
  ExactReal k;      // phi-bar >= -K
  ExactReal k_max;  // phi-bar <= Kmax
};
using SearchMode = std::variant<LowerOnly, TwoSided>;

VertexConstraint constraint_for(const SearchMode& mode);

struct NotFoundWithinBall {
  VertexConstraint constraint;
  std::size_t radius = 0;
  std::size_t explored = 0;  // admissible vertices reached from the source
};

using SearchResult = std::variant<PathWitness, NotFoundWithinBall>;

/// Breadth-first search over admissible vertices of ball(R) with canonical
/// generator order; returns the lexicographically first shortest path.
SearchResult constrained_path_search(const GroupModel& model, const Quasimorphism& phi, const GroupElement& from,
                                     const GroupElement& to, const VertexConstraint& constraint,
                                     std::size_t radius);

SearchResult bounded_path_search(const GroupModel& model, const Quasimorphism& phi, const GroupElement& from,
                                 const GroupElement& to, const SearchMode& mode, std::size_t radius);

struct ConstantsBundle {
  ExactReal defect;         // D*
  ExactReal k_prime;        // K'
  Integer n;
  ExactReal big_n;          // N
  ExactReal m;              // M
  std::size_t c_length = 0; // C = d(1, c)
  ExactReal max_phi_st;     // max over s,t in S of phi-bar(st)
  ExactReal max_abs_phi_s;  // max over s in S of |phi-bar(s)|
};

/// Evaluates n, M and an initial N = K' + 2D* + 1 exactly.
/// Throws PreconditionError unless D* > 0 and K' > 2D*.
ConstantsBundle compute_constants(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect,
                                  const ExactReal& k_prime, const GroupElement& c);

/// K = n (|phi(S)| + D) + 2D.
ExactReal finiteness_constant(const Integer& n, const ExactReal& phi_s, const ExactReal& defect);
/// 5 K C / (2 D) + 1.
ExactReal finiteness_rips_bound(const ExactReal& k, std::size_t c_length, const ExactReal& defect);

/// A vertex is inessential iff both neighbours are v c^{+-1}; endpoints are essential.
std::vector<bool> essential_vertices(const GroupModel& model, const Path& p, const GroupElement& c);

struct BacktrackResult {
  Path path;
  std::vector<bool> essential;  // per output vertex: some preimage was essential
};

/// Cancels every (u, u c^{+-1}, u) until none remains.
BacktrackResult remove_inessential_backtracks(const GroupModel& model, const Path& p, const GroupElement& c);
BacktrackResult remove_inessential_backtracks(const GroupModel& model, const Path& p, const GroupElement& c,
                                              const std::vector<bool>& essential);

struct QLibraryEntry {
  Generator s;
  Generator t;
  std::optional<Path> q;        // from 1 to st
  std::optional<Path> q_inner;  // q' from c^-n to st c^-n
  ExactReal min_phi;
  ExactReal max_essential_phi;   // over interior essential vertices
  bool verified = false;
  std::string failure;
};

struct QLibrary {
  GroupElement c;
  Integer n;
  ExactReal defect;
  std::size_t radius = 0;
  std::vector<QLibraryEntry> entries;  // pairs (s, t) in canonical order

  bool complete() const;
  const QLibraryEntry* find(Generator s, Generator t) const;
  /// min over entries of min phi-bar(q).
  std::optional<ExactReal> min_phi() const;
};

QLibrary q_library(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect, const GroupElement& c,
                   const Integer& n, std::size_t radius);

/// N = max(K' + 2D*, -min phi-bar(q)) + 1.
void refine_bundle(ConstantsBundle& bundle, const QLibrary& lib);

/// Checks the sandwich shape and the essential-vertex bound of one entry.
bool verify_q_entry(const GroupModel& model, const Quasimorphism& phi, const QLibrary& lib, const QLibraryEntry& e);

struct PeakStep {
  Path path;                  // path before the replacement
  Integer height;
  std::size_t peaks = 0;
  std::size_t replaced = 0;   // index of v_1
  Generator s;
  Generator t;
  bool precondition = true;   // floor(phi-bar(v_0)) < height
};

struct PeakReductionTrace {
  std::vector<PeakStep> steps;
  Path final_path;
  Integer final_height;
  std::size_t final_peaks = 0;
  BacktrackResult reduced;    // final path after backtrack removal
  ExactReal reduced_max;
  ExactReal overall_min;      // min over every path in the trace
  bool height_ok = false;     // final height <= M
  bool vertices_ok = false;   // reduced vertices <= M + 2D*
  bool floor_ok = false;      // every traced vertex > -N
  bool cap_hit = false;
};

inline constexpr std::size_t kDefaultPeakStepCap = 10000;

/// Height (max floor of phi-bar over essential vertices) and number of peaks.
std::pair<Integer, std::size_t> height_and_peaks(const GroupModel& model, const Quasimorphism& phi, const Path& p,
                                                 const GroupElement& c);

PeakReductionTrace peak_reduction(const GroupModel& model, const Quasimorphism& phi, const Path& p,
                                  const QLibrary& lib, const ConstantsBundle& bundle,
                                  std::size_t step_cap = kDefaultPeakStepCap);

/// A seeded test path between two Aker members of ball(endpoint_radius): from
/// x it climbs `climb` steps along generators with phi-bar(s) > 0, then
/// descends to y along a geodesic. Uses only raw 64-bit draws, so the
/// sequence is the same on every platform.
Path peaked_path(const GroupModel& model, const Quasimorphism& phi, const ExactReal& defect, std::uint64_t seed,
                 std::size_t endpoint_radius, std::size_t climb);

/// The F_2 x Z model with a -> 1, b -> 0, c -> sqrt 2.
GroupModel f2z_model();
Quasimorphism f2z_phi();

/// Inserts c^m after every edge so the value lands in [-sqrt2/2, sqrt2/2).
PathWitness f2z_kernel_path_normalize(const GroupModel& model, const Quasimorphism& phi, const Path& p);

struct ObstructionProbe {
  std::int64_t n = 0;
  Path geodesic;
  std::vector<ExactReal> raw_bounds;  // (|phi-bar(v)| - 2D*) / (max|phi-bar(s)| + D*)
  ExactReal max_raw;
  ExactReal max_certified;            // max(0, max_raw): certified lower bound on d(v, Aker)
  ExactReal max_abs_phi;
};

ObstructionProbe free_group_obstruction_probe(const GroupModel& model, const Quasimorphism& phi,
                                              const GroupElement& x, const GroupElement& c, std::int64_t n,
                                              const ExactReal& defect);

}  // namespace qbns
