#pragma once

// Quasimorphisms on the supported group models: evaluation, exact and
// interval homogenization, brute-force defect bounds, approximate kernels.

#include "qbns/exact.hpp"
#include "qbns/group.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbns {

enum class QuasimorphismKind { Homomorphism, Brooks, Combination, Homogenized };

/// An evaluable map G -> Q(sqrt d). Cheap to copy; the variant tree is shared.
class Quasimorphism {
 public:
  /// One value per generator of the model (free generators first).
  static Quasimorphism homomorphism(std::vector<ExactReal> generator_values);
  /// Overlapping occurrences of w minus occurrences of w^-1 in the reduced free part.
  static Quasimorphism brooks(std::vector<Generator> word);
  static Quasimorphism combination(std::vector<std::pair<ExactReal, Quasimorphism>> terms);
  static Quasimorphism homogenized(Quasimorphism base);

  Quasimorphism scaled(const ExactReal& lambda) const;

  QuasimorphismKind kind() const;
  bool is_homogeneous() const;
  /// Homomorphisms and combinations of them; the defect is exactly 0.
  bool is_homomorphism() const;
  /// True when homogeneous_value can be computed exactly.
  bool has_exact_homogenization() const;
  /// 0 for homomorphisms; unknown otherwise.
  std::optional<ExactReal> known_defect_upper() const;

  const std::vector<ExactReal>& generator_values() const;
  const std::vector<Generator>& brooks_word() const;
  const std::vector<std::pair<ExactReal, Quasimorphism>>& terms() const;
  const Quasimorphism& base() const;

  /// phi(g).
  ExactReal evaluate(const GroupModel& model, const GroupElement& g) const;
  /// The homogenization phi-bar(g), exactly. Throws PreconditionError when no
  /// exact route exists (combinations with non-homogeneous parts).
  ExactReal homogeneous_value(const GroupModel& model, const GroupElement& g) const;

  void validate(const GroupModel& model) const;
  std::string describe(const GroupModel& model) const;

 private:
  struct Node;
  explicit Quasimorphism(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Exact phi-bar for a Brooks counting quasimorphism: occurrences of w minus
/// w^-1 that start within one period of the bi-infinite word ...uuu..., where
/// u is the cyclic reduction of the free part of g.
ExactReal homogenize_exact(const GroupModel& model, const Quasimorphism& brooks, const GroupElement& g);

struct Interval {
  ExactReal lower;
  ExactReal upper;
  bool contains(const ExactReal& x) const { return !(x < lower) && !(upper < x); }
  ExactReal width() const { return upper - lower; }
};

/// [phi(g^N)/N - D/N, phi(g^N)/N + D/N], which contains phi-bar(g).
/// D is defect_upper, or the variant's own bound when omitted.
Interval homogenize_numeric(const GroupModel& model, const Quasimorphism& phi, const GroupElement& g,
                            std::int64_t n, std::optional<ExactReal> defect_upper = std::nullopt);

enum class DefectWitnessKind { Commutator, ThreeTerm };

struct DefectWitness {
  DefectWitnessKind kind = DefectWitnessKind::Commutator;
  GroupElement g;
  GroupElement h;
  ExactReal value;
};

struct DefectEstimate {
  ExactReal lower;
  std::optional<ExactReal> upper;  // empty: +infinity
  DefectWitness witness;
  std::string provenance;
};

/// Recomputes the value a witness claims: phi([g,h]) or |phi(g)+phi(h)-phi(gh)|.
ExactReal witness_value(const GroupModel& model, const Quasimorphism& phi, const DefectWitness& w);

/// Brute-force lower bound on D(phi) over ball(R)^2.
///
/// For homogeneous phi this is the larger of max phi([g,h]) and the three-term
/// maximum; otherwise only the three-term maximum of phi itself is used.
DefectEstimate defect_lower_bound(const GroupModel& model, const Quasimorphism& phi, std::size_t radius,
                                  std::optional<ExactReal> user_upper = std::nullopt);

enum class LevelMode { Aker, Positive };
enum class Membership { In, Out };

/// Aker(phi) = { |phi-bar| <= 2 D* } or G_phi = { phi-bar > 0 }.
struct LevelSubset {
  Quasimorphism phi;
  LevelMode mode = LevelMode::Aker;
  ExactReal defect;  // D*

  Membership membership(const GroupModel& model, const GroupElement& g) const;
  bool contains(const GroupModel& model, const GroupElement& g) const {
    return membership(model, g) == Membership::In;
  }
};

struct ScalingElement {
  GroupElement c;
  GroupElement g;  // c = [g, h]
  GroupElement h;
  ExactReal value;
  std::size_t length = 0;  // C = d(1, c)
};

/// First commutator c = [g,h], (g,h) in ball(R)^2 in shortlex order, with
/// 4D*/5 < phi-bar(c) <= D*.
std::optional<ScalingElement> find_scaling_element(const GroupModel& model, const Quasimorphism& phi,
                                                   const ExactReal& defect, std::size_t radius);

struct AkerCertificate {
  ApproximateSubset subset;                   // Aker with X = {c^5, ..., c^-5} (or {1} when D* = 0)
  std::vector<GroupElement> members;          // Aker intersected with ball(R), shortlex
  std::vector<int> shifts;                    // row-major over members^2; the m with g h c^m in Aker
  std::vector<std::pair<std::size_t, std::size_t>> counterexamples;
  int max_shift = 5;

  bool passed() const { return counterexamples.empty(); }
};

/// Checks A*A within A*X on every pair of Aker intersected with ball(R).
AkerCertificate certify_aker_approximate_subgroup(const GroupModel& model, const Quasimorphism& phi,
                                                  const ExactReal& defect, const GroupElement& c,
                                                  std::size_t radius);

std::vector<int> shift_search_order(int max_shift);

}  // namespace qbns
