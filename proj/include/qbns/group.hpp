#pragma once

// Exact word arithmetic in F_n and F_n x Z^k.
//
// Generators are numbered 0..n-1 (free) followed by n..n+k-1 (abelian).
// Every element is stored in normal form: a freely reduced word over the
// free generators plus an integer exponent vector for the central
// abelian factor. Equal elements have identical representations.

#include "qbns/errors.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbns {

struct Generator {
  std::uint16_t index = 0;
  bool inverse = false;

  Generator inverted() const { return {index, !inverse}; }
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

class GroupModel;

class GroupElement {
 public:
  GroupElement() = default;

  const std::vector<Generator>& free_part() const { return free_; }
  const std::vector<std::int64_t>& abelian_part() const { return abelian_; }

  bool is_identity() const;
  /// Word length with respect to the standard symmetric generating set.
  std::size_t length() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  /// Shortlex order on normal-form words (free letters first, then abelian letters).
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b);

 private:
  friend class GroupModel;
  GroupElement(std::vector<Generator> free, std::vector<std::int64_t> abelian)
      : free_(std::move(free)), abelian_(std::move(abelian)) {}

  std::vector<Generator> free_;
  std::vector<std::int64_t> abelian_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

enum class GroupKind { Free, FreeTimesAbelian };

/// F_n or F_n x Z^k with the standard generating set S.
///
/// Immutable after construction and safe to share between threads.
class GroupModel {
 public:
  static constexpr std::size_t kDefaultBallCap = 10;

  static GroupModel free_group(int rank, std::string names = {});
  static GroupModel free_times_abelian(int rank, int abelian_rank, std::string names = {});

  GroupKind kind() const { return kind_; }
  int free_rank() const { return free_rank_; }
  int abelian_rank() const { return abelian_rank_; }
  int generator_count() const { return free_rank_ + abelian_rank_; }
  bool is_free() const { return abelian_rank_ == 0; }
  bool is_free_generator(Generator s) const { return s.index < free_rank_; }
  const std::string& names() const { return names_; }

  std::size_t ball_cap() const { return ball_cap_; }
  GroupModel with_ball_cap(std::size_t cap) const;

  /// S union S^-1 in canonical order: (index, inverse flag).
  const std::vector<Generator>& symmetric_generators() const { return symmetric_; }

  GroupElement identity() const;
  GroupElement element(Generator s) const;
  GroupElement reduce(std::span<const Generator> word) const;

  GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;
  GroupElement power(const GroupElement& g, std::int64_t m) const;
  GroupElement commutator(const GroupElement& g, const GroupElement& h) const;
  /// g * s for a single generator.
  GroupElement step(const GroupElement& g, Generator s) const;

  /// d(g, h) = |g^-1 h|.
  std::size_t distance(const GroupElement& g, const GroupElement& h) const;
  /// The generator s with h = g s, if g and h are adjacent in the Cayley graph.
  std::optional<Generator> step_between(const GroupElement& g, const GroupElement& h) const;

  /// All elements of length <= radius in shortlex order.
  std::vector<GroupElement> ball(std::size_t radius) const;
  /// Throws CapExceeded when radius exceeds the ball cap.
  void check_radius(std::size_t radius) const;

  /// The normal form as a generator word (free letters, then abelian letters).
  std::vector<Generator> normal_word(const GroupElement& g) const;

  /// Letters are generator names; upper case denotes the inverse; "1" is the identity.
  GroupElement parse(std::string_view text) const;
  std::vector<Generator> parse_word(std::string_view text) const;
  std::string format(const GroupElement& g) const;
  std::string format_word(std::span<const Generator> word) const;
  char letter(Generator s) const;

  /// Throws ModelMismatch when g does not have this model's shape.
  void validate(const GroupElement& g) const;
  void validate(Generator s) const;

  std::string describe() const;
  friend bool operator==(const GroupModel& a, const GroupModel& b) {
    return a.kind_ == b.kind_ && a.free_rank_ == b.free_rank_ && a.abelian_rank_ == b.abelian_rank_;
  }

 private:
  GroupModel(GroupKind kind, int free_rank, int abelian_rank, std::string names);

  GroupKind kind_;
  int free_rank_;
  int abelian_rank_;
  std::string names_;
  std::size_t ball_cap_ = kDefaultBallCap;
  std::vector<Generator> symmetric_;
};

/// A subset given by a membership predicate together with a finite witness
/// set X such that A * A is contained in A * X on every tested pair.
struct ApproximateSubset {
  std::function<bool(const GroupElement&)> contains;
  std::vector<GroupElement> witnesses;
};

}  // namespace qbns
