#include "qbns/exact.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace qbns {

namespace {

Integer floor_div(const Integer& n, const Integer& d) {
  Integer q = n / d;
  if (n % d != 0 && ((n < 0) != (d < 0))) q -= 1;
  return q;
}

Integer floor_rational(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

bool is_square_free(int d) {
  if (d < 2) return false;
  for (int p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

int rational_sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

}  // namespace

ExactReal::ExactReal(Rational rational_part, Rational surd_coefficient, int radicand)
    : rat_(std::move(rational_part)), surd_(std::move(surd_coefficient)), radicand_(radicand) {
  if (surd_ != 0 && !is_square_free(radicand_))
    throw ArithmeticError("radicand must be square-free and >= 2, got " + std::to_string(radicand_));
  normalize();
}

ExactReal ExactReal::fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArithmeticError("zero denominator");
  return ExactReal(Rational(num, den));
}

ExactReal ExactReal::sqrt(int d) { return ExactReal(Rational(0), Rational(1), d); }

void ExactReal::normalize() {
  if (surd_ == 0) radicand_ = 0;
}

int ExactReal::merge_radicand(const ExactReal& a, const ExactReal& b) {
  if (a.surd_ == 0) return b.radicand_;
  if (b.surd_ == 0) return a.radicand_;
  if (a.radicand_ != b.radicand_)
    throw ArithmeticError("cannot mix sqrt(" + std::to_string(a.radicand_) + ") and sqrt(" +
                          std::to_string(b.radicand_) + ")");
  return a.radicand_;
}

int ExactReal::sign() const {
  const int ra = rational_sign(rat_);
  const int rb = rational_sign(surd_);
  if (rb == 0) return ra;
  if (ra == 0 || ra == rb) return rb;
  // Opposite signs: compare a^2 with b^2 d; equality would make sqrt(d) rational.
  const Rational lhs = rat_ * rat_;
  const Rational rhs = surd_ * surd_ * radicand_;
  return lhs > rhs ? ra : rb;
}

Integer ExactReal::floor() const {
  if (surd_ == 0) return floor_rational(rat_);
  const Rational t = surd_ * surd_ * radicand_;
  const Integer s = boost::multiprecision::sqrt(floor_rational(t));
  // b*sqrt(d) is irrational, so it lies strictly inside (m, m+1).
  const Integer m = surd_ > 0 ? s : -s - 1;
  const Integer k = floor_rational(rat_) + m;
  const ExactReal next = *this - ExactReal(Rational(k + 1));
  return next.sign() >= 0 ? k + 1 : k;
}

double ExactReal::approx() const {
  return rat_.convert_to<double>() + surd_.convert_to<double>() * std::sqrt(static_cast<double>(radicand_));
}

ExactReal ExactReal::operator-() const {
  ExactReal r = *this;
  r.rat_ = -r.rat_;
  r.surd_ = -r.surd_;
  return r;
}

ExactReal& ExactReal::operator+=(const ExactReal& o) {
  radicand_ = merge_radicand(*this, o);
  rat_ += o.rat_;
  surd_ += o.surd_;
  normalize();
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& o) { return *this += -o; }

ExactReal& ExactReal::operator*=(const ExactReal& o) {
  const int d = merge_radicand(*this, o);
  const Rational a = rat_ * o.rat_ + surd_ * o.surd_ * d;
  const Rational b = rat_ * o.surd_ + surd_ * o.rat_;
  rat_ = a;
  surd_ = b;
  radicand_ = d;
  normalize();
  return *this;
}

ExactReal& ExactReal::operator/=(const ExactReal& o) {
  if (o.sign() == 0) throw ArithmeticError("division by zero");
  if (o.surd_ == 0) {
    rat_ /= o.rat_;
    surd_ /= o.rat_;
    normalize();
    return *this;
  }
  const int d = o.radicand_;
  const ExactReal conj(o.rat_, -o.surd_, d);
  const Rational norm = o.rat_ * o.rat_ - o.surd_ * o.surd_ * d;
  *this *= conj;
  rat_ /= norm;
  surd_ /= norm;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b) {
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string rational_to_string(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw ArithmeticError("empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ArithmeticError("malformed integer '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j])))
        throw ArithmeticError("malformed integer '" + std::string(s) + "'");
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ArithmeticError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

ExactReal ExactReal::parse(std::string_view input) {
  std::string text;
  for (char ch : input)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  if (text.empty()) throw ArithmeticError("empty number");

  // Split into signed terms at '+'/'-' that are not leading and not after '/' or '*'.
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if ((ch == '+' || ch == '-') && i > 0 && text[i - 1] != '/' && text[i - 1] != '*' &&
        text[i - 1] != '+' && text[i - 1] != '-') {
      terms.push_back(cur);
      cur.clear();
    }
    cur.push_back(ch);
  }
  terms.push_back(cur);
  if (terms.size() > 2) throw ArithmeticError("too many terms in '" + text + "'");

  ExactReal result;
  bool seen_rational = false;
  bool seen_surd = false;
  for (std::string term : terms) {
    const auto pos = term.find("sqrt(");
    if (pos == std::string::npos) {
      if (seen_rational) throw ArithmeticError("two rational terms in '" + text + "'");
      seen_rational = true;
      result += ExactReal(parse_rational(term));
      continue;
    }
    if (seen_surd) throw ArithmeticError("two surd terms in '" + text + "'");
    seen_surd = true;
    if (term.back() != ')') throw ArithmeticError("malformed surd in '" + text + "'");
    const int d = std::stoi(term.substr(pos + 5, term.size() - pos - 6));
    std::string coef = term.substr(0, pos);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    Rational c(1);
    if (coef == "-") c = -1;
    else if (!coef.empty() && coef != "+") c = parse_rational(coef);
    result += ExactReal(Rational(0), c, d);
  }
  return result;
}

std::string ExactReal::to_string() const {
  if (surd_ == 0) return rational_to_string(rat_);
  std::ostringstream os;
  if (rat_ != 0) {
    os << rational_to_string(rat_);
    if (surd_ > 0) os << '+';
  }
  os << rational_to_string(surd_) << "*sqrt(" << radicand_ << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExactReal& x) { return os << x.to_string(); }

}  // namespace qbns
