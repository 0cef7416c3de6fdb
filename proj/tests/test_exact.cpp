#include "doctest.h"

#include "qbns/exact.hpp"

#include <random>

using qbns::ExactReal;
using qbns::Integer;
using qbns::Rational;

TEST_CASE("rationals print and parse in p/q form") {
  CHECK(ExactReal::fraction(6, 4).to_string() == "3/2");
  CHECK(ExactReal::fraction(-4, 2).to_string() == "-2");
  CHECK(ExactReal::parse("7/3") == ExactReal::fraction(7, 3));
  CHECK(ExactReal::parse("-5") == ExactReal(-5));
  CHECK_THROWS_AS(ExactReal::fraction(1, 0), qbns::ArithmeticError);
}

TEST_CASE("quadratic surds round-trip through text") {
  const ExactReal x = ExactReal::fraction(1, 2) + ExactReal::fraction(3, 4) * ExactReal::sqrt(2);
  CHECK(x.to_string() == "1/2+3/4*sqrt(2)");
  CHECK(ExactReal::parse(x.to_string()) == x);
  const ExactReal y = ExactReal(1) - ExactReal::sqrt(2);
  CHECK(y.to_string() == "1-1*sqrt(2)");
  CHECK(ExactReal::parse(y.to_string()) == y);
  CHECK(ExactReal::parse("sqrt(2)") == ExactReal::sqrt(2));
  CHECK(ExactReal::parse("-2*sqrt(3)") == ExactReal(-2) * ExactReal::sqrt(3));
}

TEST_CASE("sqrt squared is rational") {
  const ExactReal r = ExactReal::sqrt(2) * ExactReal::sqrt(2);
  CHECK(r.is_rational());
  CHECK(r == ExactReal(2));
}

TEST_CASE("division by a surd rationalises") {
  const ExactReal x = ExactReal(1) / (ExactReal(1) + ExactReal::sqrt(2));
  CHECK(x == ExactReal::sqrt(2) - ExactReal(1));
  CHECK_THROWS_AS(ExactReal(1) / ExactReal(0), qbns::ArithmeticError);
}

TEST_CASE("mixing radicands is rejected") {
  CHECK_THROWS_AS(ExactReal::sqrt(2) + ExactReal::sqrt(3), qbns::ArithmeticError);
  CHECK_THROWS_AS(ExactReal::sqrt(4), qbns::ArithmeticError);
}

TEST_CASE("sign and ordering are exact near cancellation") {
  // 99/70 is a convergent of sqrt 2 from above; 140/99 from below.
  CHECK((ExactReal::fraction(99, 70) - ExactReal::sqrt(2)).sign() == 1);
  CHECK((ExactReal::fraction(140, 99) - ExactReal::sqrt(2)).sign() == -1);
  CHECK(ExactReal::fraction(140, 99) < ExactReal::sqrt(2));
  CHECK(ExactReal::sqrt(2) < ExactReal::fraction(99, 70));
  CHECK((ExactReal::sqrt(2) - ExactReal::sqrt(2)).sign() == 0);
}

TEST_CASE("floor agrees with a floating oracle away from integers") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-40, 40), den(1, 9);
  for (int i = 0; i < 500; ++i) {
    const ExactReal x = ExactReal::fraction(coeff(rng), den(rng)) + ExactReal::fraction(coeff(rng), den(rng)) * ExactReal::sqrt(2);
    const double approx = x.approx();
    const double fl = std::floor(approx);
    if (approx - fl < 1e-9 || fl + 1 - approx < 1e-9) continue;  // oracle unreliable
    CHECK(x.floor() == Integer(static_cast<long long>(fl)));
  }
  CHECK(ExactReal(3).floor() == 3);
  CHECK(ExactReal(-3).floor() == -3);
  CHECK(ExactReal::fraction(-1, 2).floor() == -1);
  CHECK((-ExactReal::sqrt(2)).floor() == -2);
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-9, 9), d(1, 5);
  auto draw = [&] { return ExactReal::fraction(c(rng), d(rng)) + ExactReal::fraction(c(rng), d(rng)) * ExactReal::sqrt(2); };
  for (int i = 0; i < 200; ++i) {
    const ExactReal x = draw(), y = draw(), z = draw();
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x - x == ExactReal(0));
    if (y.sign() != 0) CHECK((x / y) * y == x);
    CHECK((x < y) == ((y - x).sign() > 0));
  }
}

TEST_CASE("windows are half-lines with an infinite top") {
  using qbns::Window;
  const Window inf = Window::infinite();
  const Window w = Window::below(ExactReal(3));
  CHECK(inf.contains(ExactReal(1000000)));
  CHECK(w.contains(ExactReal::fraction(5, 2)));
  CHECK_FALSE(w.contains(ExactReal(3)));
  CHECK(min(inf, w) == w);
  CHECK(w.shifted(ExactReal(-1)) == Window::below(ExactReal(2)));
  CHECK(inf.shifted(ExactReal(-1)).is_infinite());
  CHECK(w.to_string() == "3");
  CHECK(inf.to_string() == "inf");
}
