#pragma once

// Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).
//
// Every decision made by the library (thresholds, memberships, floors,
// extrema) goes through these types; there is no floating point on any
// decision path.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qbns {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An element a + b*sqrt(d) of Q(sqrt(d)) with d square-free, d >= 2.
///
/// Values with b = 0 carry radicand 0 and combine freely with any field;
/// mixing two different non-trivial radicands throws ArithmeticError.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(int v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  ExactReal(std::int64_t v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  ExactReal(Rational v) : rat_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExactReal(Rational rational_part, Rational surd_coefficient, int radicand);

  static ExactReal fraction(std::int64_t num, std::int64_t den);
  /// sqrt(d) for square-free d >= 2.
  static ExactReal sqrt(int d);
  /// Parses "p", "p/q", "r/s*sqrt(d)", "p/q+r/s*sqrt(d)", "sqrt(d)", ...
  static ExactReal parse(std::string_view text);

  const Rational& rational_part() const { return rat_; }
  const Rational& surd_coefficient() const { return surd_; }
  int radicand() const { return radicand_; }
  bool is_rational() const { return surd_ == 0; }

  int sign() const;
  Integer floor() const;
  ExactReal abs() const { return sign() < 0 ? -*this : *this; }
  /// Conservative double approximation, for display only.
  double approx() const;
  std::string to_string() const;

  ExactReal operator-() const;
  ExactReal& operator+=(const ExactReal& o);
  ExactReal& operator-=(const ExactReal& o);
  ExactReal& operator*=(const ExactReal& o);
  ExactReal& operator/=(const ExactReal& o);

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const ExactReal& b) { return a *= b; }
  friend ExactReal operator/(ExactReal a, const ExactReal& b) { return a /= b; }

  friend bool operator==(const ExactReal& a, const ExactReal& b) {
    return a.rat_ == b.rat_ && a.surd_ == b.surd_ && (a.surd_ == 0 || a.radicand_ == b.radicand_);
  }
  friend std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b);

 private:
  void normalize();
  static int merge_radicand(const ExactReal& a, const ExactReal& b);

  Rational rat_{0};
  Rational surd_{0};
  int radicand_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExactReal& x);

std::string rational_to_string(const Rational& r);
Rational parse_rational(std::string_view text);

inline const ExactReal& max(const ExactReal& a, const ExactReal& b) { return a < b ? b : a; }
inline const ExactReal& min(const ExactReal& a, const ExactReal& b) { return b < a ? b : a; }

/// Upper end of a half-line (-inf, level). An empty optional means +infinity.
struct Window {
  std::optional<ExactReal> level;

  static Window infinite() { return {}; }
  static Window below(ExactReal w) { return {std::move(w)}; }

  bool is_infinite() const { return !level.has_value(); }
  /// True iff value < level.
  bool contains(const ExactReal& value) const { return !level || value < *level; }
  /// The window shifted by delta (infinite stays infinite).
  Window shifted(const ExactReal& delta) const {
    return level ? Window{*level + delta} : Window{};
  }
  std::string to_string() const { return level ? level->to_string() : "inf"; }

  friend Window min(const Window& a, const Window& b) {
    if (!a.level) return b;
    if (!b.level) return a;
    return *a.level < *b.level ? a : b;
  }
  friend bool operator==(const Window&, const Window&) = default;
};

}  // namespace qbns
