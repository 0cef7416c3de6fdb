#include "doctest.h"

#include "qbns/quasimorphism.hpp"

#include <random>

using namespace qbns;

namespace {

const GroupModel f2 = GroupModel::free_group(2);
const Quasimorphism psi = Quasimorphism::brooks(f2.parse_word("ab"));
const Quasimorphism psi_bar = Quasimorphism::homogenized(psi);

// Independent oracle: phi(g^(m+1)) - phi(g^m) stabilises at phi-bar(g) once the
// cyclic core repeats more often than the counted word is long.
ExactReal increment_oracle(const GroupModel& m, const Quasimorphism& phi, const GroupElement& g) {
  const std::int64_t k = static_cast<std::int64_t>(g.length()) + 4;
  return phi.evaluate(m, m.power(g, k + 1)) - phi.evaluate(m, m.power(g, k));
}

GroupElement random_element(std::mt19937& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, 3);
  std::vector<Generator> w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.push_back(f2.symmetric_generators()[pick(rng)]);
  return f2.reduce(w);
}

}  // namespace

TEST_CASE("Brooks counting values") {
  CHECK(psi.evaluate(f2, f2.parse("ab")) == ExactReal(1));
  CHECK(psi.evaluate(f2, f2.parse("BA")) == ExactReal(-1));
  CHECK(psi.evaluate(f2, f2.parse("abab")) == ExactReal(2));
  // Overlapping occurrences are counted.
  const auto aa = Quasimorphism::brooks(f2.parse_word("aa"));
  CHECK(aa.evaluate(f2, f2.parse("aaaa")) == ExactReal(3));
  CHECK_THROWS_AS(Quasimorphism::brooks({}), PreconditionError);
  CHECK_THROWS_AS(Quasimorphism::brooks(f2.parse_word("aAb")), PreconditionError);
}

TEST_CASE("homomorphisms kill commutators") {
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  CHECK(hom.evaluate(f2, f2.commutator(f2.parse("a"), f2.parse("b"))) == ExactReal(0));
  CHECK(hom.evaluate(f2, f2.parse("aab")) == ExactReal(2));
  CHECK(hom.is_homomorphism());
  CHECK(hom.known_defect_upper() == ExactReal(0));
  CHECK_THROWS_AS(hom.validate(GroupModel::free_group(3)), ModelMismatch);
}

TEST_CASE("exact homogenization of the ab counting quasimorphism") {
  CHECK(homogenize_exact(f2, psi, f2.parse("ab")) == ExactReal(1));
  CHECK(homogenize_exact(f2, psi, f2.parse("ba")) == ExactReal(1));
  CHECK(homogenize_exact(f2, psi, f2.identity()) == ExactReal(0));
  CHECK(homogenize_exact(f2, psi, f2.parse("abAB")) == ExactReal(1));
  CHECK(psi_bar.homogeneous_value(f2, f2.parse("abAB")) == ExactReal(1));
  CHECK(psi_bar.is_homogeneous());
  CHECK_FALSE(psi.is_homogeneous());
}

TEST_CASE("exact homogenization matches the increment oracle on ball(5)") {
  for (const auto& g : f2.ball(5)) CHECK(homogenize_exact(f2, psi, g) == increment_oracle(f2, psi, g));
  const auto bab = Quasimorphism::brooks(f2.parse_word("abA"));
  for (const auto& g : f2.ball(4)) CHECK(homogenize_exact(f2, bab, g) == increment_oracle(f2, bab, g));
}

TEST_CASE("homogeneity on ball(5) for |n| <= 8") {
  for (const auto& g : f2.ball(5)) {
    const ExactReal v = homogenize_exact(f2, psi, g);
    for (std::int64_t n = -8; n <= 8; ++n) CHECK(homogenize_exact(f2, psi, f2.power(g, n)) == ExactReal(n) * v);
  }
}

TEST_CASE("conjugacy invariance") {
  std::mt19937 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto g = random_element(rng, 6), h = random_element(rng, 6);
    CHECK(psi_bar.homogeneous_value(f2, f2.multiply(f2.multiply(h, g), f2.inverse(h))) ==
          psi_bar.homogeneous_value(f2, g));
  }
}

TEST_CASE("abelian letters are ignored by counting quasimorphisms") {
  const auto f2z = GroupModel::free_times_abelian(2, 1);
  const auto q = Quasimorphism::brooks(f2z.parse_word("ab"));
  CHECK(q.evaluate(f2z, f2z.parse("acb")) == ExactReal(1));
  CHECK(homogenize_exact(f2z, q, f2z.parse("abcc")) == ExactReal(1));
  CHECK_THROWS_AS(Quasimorphism::brooks(f2z.parse_word("ac")).validate(f2z), ModelMismatch);
}

TEST_CASE("numeric homogenization intervals") {
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal::fraction(1, 3)});
  const auto g = f2.parse("abA");
  const Interval exact = homogenize_numeric(f2, hom, g, 5);
  CHECK(exact.lower == exact.upper);
  CHECK(exact.lower == ExactReal::fraction(1, 3));

  const Interval iv = homogenize_numeric(f2, psi, f2.parse("ab"), 4, ExactReal(1));
  CHECK(iv.contains(ExactReal(1)));
  const Interval wide = homogenize_numeric(f2, psi, f2.parse("ab"), 8, ExactReal(1));
  CHECK(wide.width() * 2 == iv.width());
  CHECK_THROWS_AS(homogenize_numeric(f2, psi, f2.parse("ab"), 4), PreconditionError);
  CHECK_THROWS_AS(homogenize_numeric(f2, psi, f2.parse("ab"), 0, ExactReal(1)), PreconditionError);

  for (const auto& x : f2.ball(4))
    for (std::int64_t n : {1, 3, 7}) CHECK(homogenize_numeric(f2, psi, x, n, ExactReal(1)).contains(homogenize_exact(f2, psi, x)));
}

TEST_CASE("combinations and scaling") {
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  const auto combo = Quasimorphism::combination({{ExactReal(2), psi_bar}, {ExactReal::fraction(1, 2), hom}});
  const auto g = f2.parse("aabAB");
  CHECK(combo.homogeneous_value(f2, g) ==
        ExactReal(2) * psi_bar.homogeneous_value(f2, g) + ExactReal::fraction(1, 2) * hom.evaluate(f2, g));
  const auto raw = Quasimorphism::combination({{ExactReal(1), psi}});
  CHECK_THROWS_AS(raw.homogeneous_value(f2, g), PreconditionError);
  CHECK(psi_bar.scaled(ExactReal(3)).homogeneous_value(f2, g) == ExactReal(3) * psi_bar.homogeneous_value(f2, g));
}

TEST_CASE("defect lower bounds") {
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  const DefectEstimate h = defect_lower_bound(f2, hom, 2);
  CHECK(h.lower == ExactReal(0));
  REQUIRE(h.upper);
  CHECK(*h.upper == ExactReal(0));

  const DefectEstimate e = defect_lower_bound(f2, psi_bar, 3);
  CHECK(ExactReal(1) <= e.lower);
  CHECK_FALSE(e.upper);
  CHECK(witness_value(f2, psi_bar, e.witness) == e.lower);
  // The commutator supremum over ball(3)^2 is already 2, above the [a,b] value.
  CHECK(e.lower == ExactReal(2));

  const DefectEstimate raw = defect_lower_bound(f2, psi, 4);
  CHECK(raw.lower == ExactReal(1));
  CHECK(raw.witness.kind == DefectWitnessKind::ThreeTerm);

  ExactReal prev{0};
  for (std::size_t r = 0; r <= 3; ++r) {
    const auto est = defect_lower_bound(f2, psi_bar, r);
    CHECK(prev <= est.lower);
    prev = est.lower;
  }
  CHECK_THROWS_AS(defect_lower_bound(f2, psi_bar, 3, ExactReal(1)), PreconditionError);
  CHECK_THROWS_AS(defect_lower_bound(f2, psi_bar, 11), CapExceeded);
}

TEST_CASE("level subsets") {
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  const LevelSubset kernel{hom, LevelMode::Aker, ExactReal(0)};
  CHECK(kernel.membership(f2, f2.parse("a")) == Membership::Out);
  CHECK(kernel.membership(f2, f2.parse("abAB")) == Membership::In);
  const LevelSubset aker{psi_bar, LevelMode::Aker, ExactReal(1)};
  CHECK(aker.contains(f2, f2.parse("abAB")));
  CHECK_FALSE(aker.contains(f2, f2.power(f2.parse("abAB"), 3)));
  const LevelSubset pos{hom, LevelMode::Positive, ExactReal(0)};
  CHECK(pos.contains(f2, f2.parse("a")));
  CHECK_FALSE(pos.contains(f2, f2.parse("A")));
}

TEST_CASE("scaling element") {
  const auto s = find_scaling_element(f2, psi_bar, ExactReal(1), 1);
  REQUIRE(s);
  CHECK(s->c == f2.parse("abAB"));
  CHECK(s->value == ExactReal(1));
  CHECK(s->length == 4);
  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  CHECK_THROWS_AS(find_scaling_element(f2, hom, ExactReal(0), 2), PreconditionError);
  // The same c works for 3 psi-bar with D* scaled by 3.
  const auto s3 = find_scaling_element(f2, psi_bar.scaled(ExactReal(3)), ExactReal(3), 1);
  REQUIRE(s3);
  CHECK(s3->c == s->c);
}

TEST_CASE("approximate kernel certificates") {
  const auto c = f2.parse("abAB");
  const auto cert = certify_aker_approximate_subgroup(f2, psi_bar, ExactReal(1), c, 3);
  CHECK(cert.passed());
  CHECK(cert.subset.witnesses.size() == 11);
  CHECK(cert.subset.witnesses.front() == f2.power(c, 5));
  CHECK(cert.subset.witnesses.back() == f2.power(c, -5));
  CHECK(cert.members.size() == f2.ball(3).size());
  CHECK(cert.shifts.front() == 0);  // (1, 1)

  const auto hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)});
  const auto kernel = certify_aker_approximate_subgroup(f2, hom, ExactReal(0), c, 3);
  CHECK(kernel.passed());
  CHECK(kernel.subset.witnesses.size() == 1);
  CHECK(kernel.subset.witnesses.front().is_identity());
  for (int m : kernel.shifts) CHECK(m == 0);

  CHECK(shift_search_order(2) == std::vector<int>{0, 1, -1, 2, -2});
}

TEST_CASE("Aker is unchanged under positive scaling") {
  const auto scaled = psi_bar.scaled(ExactReal::fraction(5, 2));
  const LevelSubset a{psi_bar, LevelMode::Aker, ExactReal(1)};
  const LevelSubset b{scaled, LevelMode::Aker, ExactReal::fraction(5, 2)};
  for (const auto& g : f2.ball(4)) CHECK(a.contains(f2, g) == b.contains(f2, g));
}
