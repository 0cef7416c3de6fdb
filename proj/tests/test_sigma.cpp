#include "doctest.h"

#include "qbns/sigma.hpp"

#include <random>

using namespace qbns;

namespace {

const GroupModel f2 = GroupModel::free_group(2);
const Quasimorphism psi_bar = Quasimorphism::homogenized(Quasimorphism::brooks(f2.parse_word("ab")));
const GroupModel z2 = GroupModel::free_times_abelian(1, 1, "ac").with_ball_cap(30);
const Quasimorphism z2_phi = Quasimorphism::homomorphism({ExactReal(1), ExactReal(1)});

// In a tree any path between two vertices visits every vertex of the geodesic.
bool tree_oracle(const GroupModel& m, const Quasimorphism& phi, const GroupElement& g, const GroupElement& h,
                 const ExactReal& k) {
  const Path p = geodesic(m, g, h);
  for (const auto& v : p.vertices())
    if (phi.homogeneous_value(m, v) < -k) return false;
  return true;
}

struct Z2Setup {
  ConstantsBundle bundle;
  QLibrary lib;
};

const Z2Setup& z2_setup() {
  static const Z2Setup setup = [] {
    const GroupElement c = z2.parse("c");
    ConstantsBundle b = compute_constants(z2, z2_phi, ExactReal(1), ExactReal(3), c);
    QLibrary lib = q_library(z2, z2_phi, ExactReal(1), c, b.n, static_cast<std::size_t>(b.n) * 3);
    refine_bundle(b, lib);
    return Z2Setup{b, std::move(lib)};
  }();
  return setup;
}

}  // namespace

TEST_CASE("search between equal endpoints returns the single vertex") {
  const auto g = f2.parse("abA");
  const auto r = bounded_path_search(f2, psi_bar, g, g, LowerOnly{ExactReal(5)}, 4);
  REQUIRE(std::holds_alternative<PathWitness>(r));
  const auto& w = std::get<PathWitness>(r);
  CHECK(w.path.vertex_count() == 1);
  CHECK(w.min_phi == psi_bar.homogeneous_value(f2, g));
  CHECK(w.max_phi == w.min_phi);
}

TEST_CASE("lattice search finds the lexicographically first shortest path") {
  const auto target = z2.parse("aC");
  const auto r = bounded_path_search(z2, z2_phi, z2.identity(), target, LowerOnly{ExactReal(1)}, 4);
  REQUIRE(std::holds_alternative<PathWitness>(r));
  const auto& w = std::get<PathWitness>(r);
  CHECK(to_text(z2, w.path).steps == "aC");
  CHECK(replay_witness(z2, z2_phi, w, z2.identity(), target));
  CHECK(w.min_phi == ExactReal(0));
  CHECK(w.max_phi == ExactReal(1));
}

TEST_CASE("free group search fails where the tree geodesic dips") {
  const auto from = f2.parse("abAB"), to = f2.parse("ABABa");
  const auto r = bounded_path_search(f2, psi_bar, from, to, LowerOnly{ExactReal(1)}, 6);
  REQUIRE(std::holds_alternative<NotFoundWithinBall>(r));
  CHECK(std::get<NotFoundWithinBall>(r).radius == 6);
  CHECK_FALSE(tree_oracle(f2, psi_bar, from, to, ExactReal(1)));
}

TEST_CASE("free group search agrees with the tree oracle") {
  const auto ball = f2.ball(3);
  for (const ExactReal k : {ExactReal(0), ExactReal(1)})
    for (std::size_t i = 0; i < ball.size(); i += 3)
      for (std::size_t j = 0; j < ball.size(); j += 2) {
        const auto r = bounded_path_search(f2, psi_bar, ball[i], ball[j], LowerOnly{k}, 3);
        const bool ok = tree_oracle(f2, psi_bar, ball[i], ball[j], k);
        CHECK(std::holds_alternative<PathWitness>(r) == ok);
        if (ok) CHECK(std::get<PathWitness>(r).path == geodesic(f2, ball[i], ball[j]));
      }
}

TEST_CASE("search success is monotone in K") {
  const auto ball = z2.ball(3);
  const Quasimorphism phi = Quasimorphism::homomorphism({ExactReal(1), ExactReal(-2)});
  for (std::size_t i = 0; i < ball.size(); i += 2)
    for (std::size_t j = 0; j < ball.size(); j += 3) {
      bool prev = false;
      for (int k = 0; k <= 6; ++k) {
        const bool found = std::holds_alternative<PathWitness>(
            bounded_path_search(z2, phi, ball[i], ball[j], LowerOnly{ExactReal(k)}, 4));
        CHECK((!prev || found));
        prev = found;
      }
    }
}

TEST_CASE("two-sided search respects both bounds") {
  const auto r = bounded_path_search(z2, z2_phi, z2.parse("A"), z2.parse("a"), TwoSided{ExactReal(1), ExactReal(1)}, 3);
  REQUIRE(std::holds_alternative<PathWitness>(r));
  const auto& w = std::get<PathWitness>(r);
  CHECK(ExactReal(-1) <= w.min_phi);
  CHECK(w.max_phi <= ExactReal(1));
  CHECK(std::holds_alternative<NotFoundWithinBall>(
      bounded_path_search(z2, z2_phi, z2.parse("A"), z2.parse("aa"), TwoSided{ExactReal(1), ExactReal(1)}, 3)));
  CHECK_THROWS_AS(bounded_path_search(z2, z2_phi, z2.identity(), z2.parse("aaaa"), LowerOnly{ExactReal(1)}, 3),
                  PreconditionError);
  CHECK_THROWS_AS(bounded_path_search(f2, psi_bar, f2.identity(), f2.identity(), LowerOnly{ExactReal(1)}, 11),
                  CapExceeded);
}

TEST_CASE("search outcomes are invariant under positive scaling") {
  const auto ball = f2.ball(3);
  const auto scaled = psi_bar.scaled(ExactReal(3));
  for (std::size_t i = 0; i < ball.size(); i += 4)
    for (std::size_t j = 1; j < ball.size(); j += 5) {
      const bool a = std::holds_alternative<PathWitness>(bounded_path_search(f2, psi_bar, ball[i], ball[j], LowerOnly{ExactReal(1)}, 3));
      const bool b = std::holds_alternative<PathWitness>(bounded_path_search(f2, scaled, ball[i], ball[j], LowerOnly{ExactReal(3)}, 3));
      CHECK(a == b);
    }
}

TEST_CASE("constants") {
  const auto b = compute_constants(z2, z2_phi, ExactReal(1), ExactReal(3), z2.parse("c"));
  CHECK(b.max_phi_st == ExactReal(2));
  CHECK(b.n == 10);
  CHECK(b.m == ExactReal(4));
  CHECK(b.c_length == 1);
  CHECK(ExactReal(3) + ExactReal(2) < b.big_n);
  CHECK(finiteness_constant(2, ExactReal(1), ExactReal(1)) == ExactReal(6));
  CHECK(finiteness_rips_bound(ExactReal(6), 1, ExactReal(1)) == ExactReal(16));
  CHECK_THROWS_AS(compute_constants(z2, z2_phi, ExactReal(1), ExactReal(2), z2.parse("c")), PreconditionError);
  CHECK_THROWS_AS(compute_constants(z2, z2_phi, ExactReal(0), ExactReal(2), z2.parse("c")), PreconditionError);
}

TEST_CASE("essential vertices") {
  const auto c = z2.parse("c");
  const Path p = from_text(z2, {"1", "cCaccC"});
  // 1 c 1 a ac acc ac
  CHECK(essential_vertices(z2, p, c) == std::vector<bool>{true, false, true, true, false, false, true});
}

TEST_CASE("backtrack removal") {
  const auto c = z2.parse("c");
  auto run = [&](const std::string& steps) { return remove_inessential_backtracks(z2, from_text(z2, {"1", steps}), c); };
  CHECK(to_text(z2, run("cCa").path).steps == "a");
  CHECK(to_text(z2, run("ccC").path).steps == "c");
  CHECK(to_text(z2, run("aAa").path).steps == "aAa");
  const auto r = run("acCa");
  CHECK(to_text(z2, r.path).steps == "aa");
  CHECK(r.essential == std::vector<bool>{true, true, true});
}

TEST_CASE("the lattice q-library is complete and sandwiched") {
  const auto& [bundle, lib] = z2_setup();
  CHECK(lib.entries.size() == 16);
  CHECK(lib.complete());
  const auto n = static_cast<std::size_t>(lib.n);
  for (const auto& e : lib.entries) {
    REQUIRE(e.q);
    const auto steps = e.q->steps(z2);
    REQUIRE(steps.size() >= 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(steps[i] == Generator{1, true});
      CHECK(steps[steps.size() - 1 - i] == Generator{1, false});
    }
    CHECK(verify_q_entry(z2, z2_phi, lib, e));
    CHECK(e.max_essential_phi < -bundle.defect);
  }
  // s t = 1: q' joins c^-n to itself.
  const auto* inverse_pair = lib.find(Generator{0, false}, Generator{0, true});
  REQUIRE(inverse_pair);
  CHECK(inverse_pair->q_inner->vertex_count() == 1);
  CHECK(bundle.big_n == ExactReal(13));
}

TEST_CASE("the free group q-library is incomplete at radius 8") {
  const auto c = f2.parse("abAB");
  const auto b = compute_constants(f2, psi_bar, ExactReal(1), ExactReal(3), c);
  const auto lib = q_library(f2, psi_bar, ExactReal(1), c, b.n, 8);
  CHECK_FALSE(lib.complete());
  for (const auto& e : lib.entries) CHECK_FALSE(e.failure.empty());
}

TEST_CASE("peak reduction leaves low paths alone") {
  const auto& [bundle, lib] = z2_setup();
  const Path p = from_text(z2, {"1", "acCA"});
  const auto t = peak_reduction(z2, z2_phi, p, lib, bundle);
  CHECK(t.steps.empty());
  CHECK(t.height_ok);
  CHECK(t.final_path == p);
}

TEST_CASE("peak reduction lowers a tall lattice path") {
  const auto& [bundle, lib] = z2_setup();
  const Path p = from_text(z2, {"1", "aaaaaaAAAAAA"});
  const auto t = peak_reduction(z2, z2_phi, p, lib, bundle);
  REQUIRE_FALSE(t.steps.empty());
  CHECK(t.steps.front().height == 6);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto next = i + 1 < t.steps.size() ? std::pair{t.steps[i + 1].height, t.steps[i + 1].peaks}
                                             : std::pair{t.final_height, t.final_peaks};
    CHECK(t.steps[i].precondition);
    CHECK(next < std::pair{t.steps[i].height, t.steps[i].peaks});
  }
  CHECK(t.height_ok);
  CHECK(t.vertices_ok);
  CHECK(t.floor_ok);
  CHECK(t.final_path.origin() == p.origin());
  CHECK(t.final_path.terminus() == p.terminus());
  CHECK(is_adjacent_sequence(z2, t.final_path.vertices()));
}

TEST_CASE("peak reduction on seeded peaked paths") {
  const auto& [bundle, lib] = z2_setup();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Path p = peaked_path(z2, z2_phi, bundle.defect, seed, 2, 7 + seed % 4);
    const auto t = peak_reduction(z2, z2_phi, p, lib, bundle);
    CHECK(t.height_ok);
    CHECK(t.vertices_ok);
    CHECK(t.floor_ok);
    CHECK_FALSE(t.cap_hit);
  }
  CHECK(peaked_path(z2, z2_phi, ExactReal(1), 5, 2, 8) == peaked_path(z2, z2_phi, ExactReal(1), 5, 2, 8));
}

TEST_CASE("peak reduction checks its preconditions") {
  const auto& [bundle, lib] = z2_setup();
  CHECK_THROWS_AS(peak_reduction(z2, z2_phi, from_text(z2, {"aaa", "A"}), lib, bundle), PreconditionError);
  QLibrary broken = lib;
  broken.entries.front().verified = false;
  CHECK_THROWS_AS(peak_reduction(z2, z2_phi, from_text(z2, {"1", "a"}), broken, bundle), PreconditionError);
}

TEST_CASE("F2 x Z kernel normalisation") {
  const auto m = f2z_model().with_ball_cap(12);
  const auto phi = f2z_phi();
  const auto trivial = f2z_kernel_path_normalize(m, phi, Path::single(m.identity()));
  CHECK(trivial.path.vertex_count() == 1);
  CHECK(trivial.min_phi == ExactReal(0));
  const auto b = f2z_kernel_path_normalize(m, phi, straight_path(m, m.parse("b")));
  CHECK(b.path == straight_path(m, m.parse("b")));
  CHECK(b.max_phi == ExactReal(0));

  std::vector<GroupElement> kernel;
  for (const auto& g : m.ball(6))
    if (phi.evaluate(m, g).sign() == 0) kernel.push_back(g);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto& g = kernel[rng() % kernel.size()];
    const auto& h = kernel[rng() % kernel.size()];
    const auto w = f2z_kernel_path_normalize(m, phi, geodesic(m, g, h));
    CHECK(w.path.origin() == g);
    CHECK(w.path.terminus() == h);
    CHECK(ExactReal(-3) <= w.min_phi);
    CHECK(w.max_phi <= ExactReal(3));
  }
  CHECK_THROWS_AS(f2z_kernel_path_normalize(m, phi, straight_path(m, m.parse("a"))), PreconditionError);
  CHECK_THROWS_AS(f2z_kernel_path_normalize(f2, psi_bar, Path::single(f2.identity())), ModelMismatch);
}

TEST_CASE("free group obstruction probe") {
  const auto x = f2.parse("b"), c = f2.parse("abAB");
  const auto zero = free_group_obstruction_probe(f2, psi_bar, x, c, 0, ExactReal(1));
  CHECK(zero.geodesic.vertex_count() == 1);
  CHECK(zero.max_certified == ExactReal(0));
  const auto two = free_group_obstruction_probe(f2, psi_bar, x, c, 2, ExactReal(1));
  const auto four = free_group_obstruction_probe(f2, psi_bar, x, c, 4, ExactReal(1));
  CHECK(two.max_raw < four.max_raw);
  CHECK(two.max_abs_phi == ExactReal(2));
  CHECK(four.max_abs_phi == ExactReal(4));
  for (std::size_t i = 0; i < four.geodesic.vertex_count(); ++i)
    if (psi_bar.homogeneous_value(f2, four.geodesic[i]).abs() <= ExactReal(2)) CHECK(four.raw_bounds[i].sign() <= 0);
  CHECK_THROWS_AS(free_group_obstruction_probe(z2, z2_phi, z2.parse("a"), z2.parse("c"), 1, ExactReal(1)),
                  ModelMismatch);
  CHECK_THROWS_AS(free_group_obstruction_probe(f2, psi_bar, c, c, 1, ExactReal(1)), PreconditionError);
}
