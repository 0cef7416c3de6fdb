#include "doctest.h"

#include "qbns/novikov.hpp"
#include "qbns/sigma.hpp"

#include <random>

using namespace qbns;

namespace {

const GroupModel z2 = GroupModel::free_times_abelian(1, 1, "ac").with_ball_cap(20);
const CayleyTwoComplex z2cx(z2, Quasimorphism::homomorphism({ExactReal(1), ExactReal(1)}), ExactReal(1));
const GroupModel f2 = GroupModel::free_group(2);
const CayleyTwoComplex f2cx(f2, Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)}), ExactReal(0));

Chain2 random_chain2(const CayleyTwoComplex& cx, std::mt19937_64& rng, std::size_t radius, int terms) {
  const auto ball = cx.model().ball(radius);
  Chain2 y;
  const auto& types = cx.square_types();
  for (int i = 0; i < terms; ++i) {
    const auto [x, t] = types[rng() % types.size()];
    y.add(SquareCell{ball[rng() % ball.size()], x, t}, Integer(static_cast<int>(rng() % 7) - 3));
  }
  return y;
}

Chain0 c_powers(const CayleyTwoComplex& cx, int from, int to, const Window& w) {
  std::vector<std::pair<GroupElement, Integer>> t;
  for (int k = from; k < to; ++k) t.emplace_back(cx.model().power(cx.model().parse("c"), k), Integer(1));
  return make_chain0(cx, t, w);
}

}  // namespace

TEST_CASE("square types") {
  CHECK(z2cx.square_types() == std::vector<std::pair<std::uint16_t, std::uint16_t>>{{0, 1}});
  CHECK_FALSE(f2cx.has_two_cells());
  const CayleyTwoComplex f2z(f2z_model(), f2z_phi(), ExactReal(0));
  CHECK(f2z.square_types() == std::vector<std::pair<std::uint16_t, std::uint16_t>>{{0, 2}, {1, 2}});
}

TEST_CASE("boundary of an edge and a square") {
  const EdgeCell e{z2.parse("a"), 1};
  Chain1 one;
  one.add(e, 2);
  const Chain0 b = z2cx.boundary(one);
  CHECK(b.terms.size() == 2);
  CHECK(b.coefficient(VertexCell{z2.parse("ac")}) == 2);
  CHECK(b.coefficient(VertexCell{z2.parse("a")}) == -2);
  CHECK(z2cx.value(e) == ExactReal(1));

  Chain2 sq;
  sq.add(SquareCell{z2.identity(), 0, 1}, 1);
  const Chain1 bs = z2cx.boundary(sq);
  CHECK(bs.coefficient(EdgeCell{z2.identity(), 0}) == 1);
  CHECK(bs.coefficient(EdgeCell{z2.parse("a"), 1}) == 1);
  CHECK(bs.coefficient(EdgeCell{z2.parse("c"), 0}) == -1);
  CHECK(bs.coefficient(EdgeCell{z2.identity(), 1}) == -1);
  CHECK(z2cx.boundary(bs).is_zero());
  CHECK(z2cx.boundary_drop(sq) == ExactReal(0));
  CHECK(z2cx.format(SquareCell{z2.parse("a"), 0, 1}) == "a|ac");
  CHECK(z2cx.format(EdgeCell{z2.identity(), 1}) == "1|c");
}

TEST_CASE("boundary of a boundary vanishes") {
  std::mt19937_64 rng(7);
  const CayleyTwoComplex f2z(f2z_model(), f2z_phi(), ExactReal(0));
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(z2cx.boundary(z2cx.boundary(random_chain2(z2cx, rng, 4, 12))).is_zero());
    CHECK(f2z.boundary(f2z.boundary(random_chain2(f2z, rng, 3, 12))).is_zero());
  }
  // Truncation commutes with the boundary below the window.
  for (int trial = 0; trial < 20; ++trial) {
    Chain2 y = random_chain2(z2cx, rng, 4, 12);
    const Window w = Window::below(ExactReal(static_cast<int>(rng() % 5) - 2));
    CHECK(z2cx.truncate(z2cx.boundary(z2cx.truncate(y, w)), w).terms ==
          z2cx.truncate(z2cx.boundary(y), w).terms);
  }
}

TEST_CASE("path chains close up on loops") {
  const Path loop = from_text(z2, {"1", "acAC"});
  const Chain1 z = z2cx.path_chain(loop);
  CHECK(z.terms.size() == 4);
  CHECK(z2cx.boundary(z).is_zero());
  const Path back = from_text(z2, {"1", "aA"});
  CHECK(z2cx.path_chain(back).is_zero());
}

TEST_CASE("windowed multiplication telescopes") {
  const Chain0 one_minus_c = make_chain0(z2cx, {{z2.identity(), Integer(1)}, {z2.parse("c"), Integer(-1)}});
  // A finite sum times (1 - c).
  const Chain0 finite = c_powers(z2cx, 0, 6, Window::infinite());
  const Chain0 p = windowed_multiply(z2cx, one_minus_c, finite);
  CHECK(p.window.is_infinite());
  CHECK(p.terms.size() == 2);
  CHECK(p.coefficient(VertexCell{z2.identity()}) == 1);
  CHECK(p.coefficient(VertexCell{z2.power(z2.parse("c"), 6)}) == -1);
  // The same sum read as the series sum c^k, authoritative below 6.
  const Chain0 series = c_powers(z2cx, 0, 6, Window::below(ExactReal(6)));
  const Chain0 q = windowed_multiply(z2cx, one_minus_c, series);
  CHECK(q.window == Window::below(ExactReal(5)));
  CHECK(q.terms == make_chain0(z2cx, {{z2.identity(), Integer(1)}}).terms);
}

TEST_CASE("additive inverse and unit") {
  std::mt19937_64 rng(3);
  const auto ball = z2.ball(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<GroupElement, Integer>> t;
    for (int i = 0; i < 6; ++i) t.emplace_back(ball[rng() % ball.size()], Integer(static_cast<int>(rng() % 5) - 2));
    const Window w = Window::below(ExactReal(static_cast<int>(rng() % 4)));
    const Chain0 u = make_chain0(z2cx, t, w);
    const Chain0 zero = windowed_add(z2cx, u, windowed_negate(u));
    CHECK(zero.is_zero());
    CHECK(zero.window == w);
    const Chain0 unit = make_chain0(z2cx, {{z2.identity(), Integer(1)}});
    const Chain0 v = windowed_multiply(z2cx, unit, u);
    CHECK(v.window == w.shifted(ExactReal(-1)));
    CHECK(v.terms == z2cx.truncate(u, v.window).terms);
    CHECK(windowed_scale(u, Integer(0)).is_zero());
  }
}

TEST_CASE("ray cycles") {
  const auto c = z2.parse("c");
  CHECK(ray_cycle(z2cx, z2.parse("a"), z2.parse("a"), Path::single(z2.parse("a")), c, ExactReal(4)).is_zero());
  const Chain1 z = ray_cycle(z2cx, z2.identity(), z2.parse("a"), from_text(z2, {"1", "a"}), c, ExactReal(6));
  CHECK(z.window == Window::below(ExactReal(6)));
  CHECK(z.terms.size() == 12);
  CHECK(z2cx.boundary(z).is_zero());
  for (const auto& [edge, k] : z.terms) CHECK(z2cx.value(edge) < ExactReal(6));

  const auto fa = f2.parse("a");
  const Chain1 fz = ray_cycle(f2cx, f2.identity(), f2.parse("b"), from_text(f2, {"1", "b"}), fa, ExactReal(3));
  CHECK_FALSE(fz.is_zero());
  CHECK(f2cx.boundary(fz).is_zero());
  CHECK_THROWS_AS(ray_cycle(z2cx, z2.identity(), z2.parse("a"), from_text(z2, {"1", "a"}), c, ExactReal(0)),
                  PreconditionError);
  CHECK_THROWS_AS(ray_cycle(z2cx, z2.identity(), z2.parse("a"), from_text(z2, {"1", "a"}), z2.parse("C"), ExactReal(3)),
                  PreconditionError);
}

TEST_CASE("z_s cycles") {
  const auto c = z2.parse("c");
  const auto trivial = build_zs_cycle(z2cx, Generator{1, false}, 3, c, ExactReal(1), 8);
  CHECK(trivial.z.is_zero());
  CHECK(trivial.is_cycle);
  const auto za = build_zs_cycle(z2cx, Generator{0, false}, 2, c, ExactReal(1), 8);
  CHECK(za.is_cycle);
  CHECK_FALSE(za.z.is_zero());
  CHECK(za.second.origin() == z2.power(c, 2));
  CHECK(za.second.terminus() == z2.parse("acc"));
  CHECK(phi_extrema(z2, z2cx.phi(), za.second).min >= ExactReal(1));
  CHECK_THROWS_AS(build_zs_cycle(z2cx, Generator{0, true}, 2, c, ExactReal(0), 8), PreconditionError);
}

TEST_CASE("the free group solver returns a checkable obstruction") {
  const Chain1 z = ray_cycle(f2cx, f2.identity(), f2.parse("b"), from_text(f2, {"1", "b"}), f2.parse("a"), ExactReal(3));
  const auto r = windowed_boundary_solve(f2cx, z, ExactReal(3));
  REQUIRE_FALSE(r.solved());
  CHECK(r.columns.empty());
  const auto& cert = std::get<ObstructionCertificate>(r.outcome);
  CHECK(cert.kind == ObstructionKind::Rational);
  CHECK(verify_obstruction(f2cx, z, r.columns, cert));
  ObstructionCertificate forged = cert;
  forged.pairing += 1;
  CHECK_FALSE(verify_obstruction(f2cx, z, r.columns, forged));
}

TEST_CASE("the lattice solver fills a ray cycle") {
  const Chain1 z = ray_cycle(z2cx, z2.identity(), z2.parse("a"), from_text(z2, {"1", "a"}), z2.parse("c"), ExactReal(6));
  const auto r = windowed_boundary_solve(z2cx, z, ExactReal(6));
  REQUIRE(r.solved());
  const Chain2& y = std::get<BoundarySolution>(r.outcome).y;
  CHECK(verify_boundary_solution(z2cx, z, y, r.window));
  CHECK(y.terms.size() == 6);
  for (int k = 0; k < 6; ++k)
    CHECK(abs(y.coefficient(SquareCell{z2.power(z2.parse("c"), k), 0, 1})) == 1);
  Chain2 wrong = y;
  wrong.add(SquareCell{z2.identity(), 0, 1}, 1);
  CHECK_FALSE(verify_boundary_solution(z2cx, z, wrong, r.window));
}

TEST_CASE("solver edge cases") {
  const auto r = windowed_boundary_solve(z2cx, Chain1{}, ExactReal(2));
  REQUIRE(r.solved());
  CHECK(std::get<BoundarySolution>(r.outcome).y.is_zero());
  // A lone edge is not a boundary.
  Chain1 e;
  e.add(EdgeCell{z2.identity(), 0}, 1);
  const auto bad = windowed_boundary_solve(z2cx, e, ExactReal(3));
  REQUIRE_FALSE(bad.solved());
  CHECK(verify_obstruction(z2cx, e, bad.columns, std::get<ObstructionCertificate>(bad.outcome)));
  CHECK_THROWS_AS(windowed_boundary_solve(z2cx, e, ExactReal(3), SolverOptions{ExactReal(1), 2}), CapExceeded);
}

TEST_CASE("solvability is monotone as the window drops") {
  const Chain1 z = ray_cycle(z2cx, z2.identity(), z2.parse("a"), from_text(z2, {"1", "a"}), z2.parse("c"), ExactReal(6));
  for (int w = 1; w <= 6; ++w) {
    const auto r = windowed_boundary_solve(z2cx, z, ExactReal(w));
    REQUIRE(r.solved());
    CHECK(verify_boundary_solution(z2cx, z, std::get<BoundarySolution>(r.outcome).y, r.window));
  }
}

TEST_CASE("keeping the negative part yields a high path") {
  const auto c = z2.parse("c");
  const auto a = z2.parse("CCC"), b = z2.parse("aCCC");
  const Chain1 z = ray_cycle(z2cx, a, b, geodesic(z2, a, b), c, ExactReal(3));
  const auto r = windowed_boundary_solve(z2cx, z, ExactReal(3));
  REQUIRE(r.solved());
  const auto& y = std::get<BoundarySolution>(r.outcome).y;
  const auto x = keep_negative_and_extract_path(z2cx, y, z, a, b, c);
  CHECK(x.residual_nonnegative);
  CHECK(x.path.origin() == a);
  CHECK(x.path.terminus() == b);
  CHECK(is_adjacent_sequence(z2, x.path.vertices()));
  // Away from the two ray stubs the path stays at levels >= -D*.
  const auto inner_first = static_cast<std::size_t>(x.m);
  const auto inner_last = x.path.vertex_count() - 1 - static_cast<std::size_t>(x.n);
  for (std::size_t i = inner_first; i <= inner_last; ++i)
    CHECK(z2cx.value(x.path[i]) >= -z2cx.defect());
}
