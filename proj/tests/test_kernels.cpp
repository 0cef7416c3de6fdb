#include "doctest.h"

#include "qbns/kernels.hpp"
#include "qbns/quasimorphism.hpp"

#include <random>
#include <stdexcept>

using namespace qbns;
namespace ks = qbns::kernels::serial;
namespace kp = qbns::kernels::parallel;

namespace {

struct ThreadGuard {
  int saved = kernels::thread_count();
  ~ThreadGuard() { kernels::set_thread_count(saved); }
};

const int kThreadCounts[] = {1, 2, 3, 8};

}  // namespace

TEST_CASE("argmax over pairs matches the serial reference, ties included") {
  ThreadGuard guard;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 40, m = 1 + rng() % 40;
    std::vector<int> values(n * m);
    for (auto& v : values) v = static_cast<int>(rng() % 5);  // many ties
    auto f = [&](std::size_t i, std::size_t j) -> std::optional<int> {
      if ((i + j) % 7 == 3) return std::nullopt;
      return values[i * m + j];
    };
    const auto ref = ks::argmax_pairs(n, m, f);
    for (int t : kThreadCounts) {
      kernels::set_thread_count(t);
      const auto par = kp::argmax_pairs(n, m, f);
      CHECK(par.value == ref.value);
      CHECK(par.where == ref.where);
    }
  }
  const auto empty = kp::argmax_pairs(0, 0, [](std::size_t, std::size_t) { return std::optional<int>(1); });
  CHECK_FALSE(empty.value);
}

TEST_CASE("first pair matches the serial reference") {
  ThreadGuard guard;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 60, m = 1 + rng() % 60;
    const std::size_t mod = 1 + rng() % 500;
    auto pred = [&](std::size_t i, std::size_t j) { return (i * 31 + j * 17) % mod == 0 && i + j > 3; };
    const auto ref = ks::first_pair(n, m, pred);
    for (int t : kThreadCounts) {
      kernels::set_thread_count(t);
      CHECK(kp::first_pair(n, m, pred) == ref);
    }
  }
}

TEST_CASE("map and upper pairs match the serial reference") {
  ThreadGuard guard;
  const GroupModel f2 = GroupModel::free_group(2);
  const auto ball = f2.ball(3);
  auto dist = [&](std::size_t i, std::size_t j) { return f2.distance(ball[i], ball[j]) < 3; };
  auto values = [&](std::size_t i) { return ball[i].length() * 3 + i % 5; };
  const auto ref_pairs = ks::upper_pairs_where(ball.size(), dist);
  const auto ref_map = ks::map_range(ball.size(), values);
  for (int t : kThreadCounts) {
    kernels::set_thread_count(t);
    CHECK(kp::upper_pairs_where(ball.size(), dist) == ref_pairs);
    CHECK(kp::map_range(ball.size(), values) == ref_map);
  }
}

TEST_CASE("sphere growth matches the serial reference") {
  ThreadGuard guard;
  for (const auto& model : {GroupModel::free_group(2), GroupModel::free_times_abelian(2, 1, "abc")}) {
    std::vector<GroupElement> a{model.identity()}, b{model.identity()};
    for (int r = 0; r < 5; ++r) {
      a = ks::next_sphere(model, a);
      kernels::set_thread_count(1 + r % 4);
      b = kp::next_sphere(model, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("exceptions propagate out of parallel regions") {
  ThreadGuard guard;
  kernels::set_thread_count(4);
  auto boom = [](std::size_t i) -> int {
    if (i == 37) throw std::runtime_error("boom");
    return 0;
  };
  CHECK_THROWS_AS(kp::map_range(100, boom), std::runtime_error);
  CHECK_THROWS_AS(kp::upper_pairs_where(50, [](std::size_t i, std::size_t) -> bool {
                    if (i == 7) throw std::runtime_error("boom");
                    return false;
                  }),
                  std::runtime_error);
}
