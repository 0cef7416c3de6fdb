#pragma once

// Data-parallel inner loops shared by the probes.
//
// Every kernel exists twice: serial:: is the reference implementation and
// parallel:: the OpenMP version. Both return identical results for every
// thread count; reductions break ties by the smallest linear index.

#include "qbns/group.hpp"

#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qbns::kernels {

void set_thread_count(int threads);
int thread_count();

struct PairIndex {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

template <class T>
struct PairArgmax {
  std::optional<T> value;
  PairIndex where;
};

namespace detail {

// Captures the first exception thrown inside a parallel region.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

template <class T>
bool better(const std::optional<T>& cand, std::size_t cand_index, const std::optional<T>& best,
            std::size_t best_index) {
  if (!cand) return false;
  if (!best) return true;
  if (*best < *cand) return true;
  return !(*cand < *best) && cand_index < best_index;
}

}  // namespace detail

namespace serial {

/// Maximum of f(i, j) over [0,n) x [0,m); f may return std::optional to skip a pair.
template <class F>
auto argmax_pairs(std::size_t n, std::size_t m, F&& f) {
  using R = std::decay_t<decltype(f(std::size_t{}, std::size_t{}))>;
  using T = typename R::value_type;
  PairArgmax<T> best;
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      R v = f(i, j);
      if (detail::better(v, i * m + j, best.value, best_index)) {
        best.value = std::move(v);
        best.where = {i, j};
        best_index = i * m + j;
      }
    }
  return best;
}

/// Smallest (row-major) pair satisfying pred.
template <class P>
std::optional<PairIndex> first_pair(std::size_t n, std::size_t m, P&& pred) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (pred(i, j)) return PairIndex{i, j};
  return std::nullopt;
}

template <class F>
auto map_range(std::size_t n, F&& f) {
  using R = std::decay_t<decltype(f(std::size_t{}))>;
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

/// Pairs (i, j) with i < j < n for which pred holds, in row-major order.
template <class P>
std::vector<PairIndex> upper_pairs_where(std::size_t n, P&& pred) {
  std::vector<PairIndex> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pred(i, j)) out.push_back({i, j});
  return out;
}

/// Elements of length r+1 adjacent to a sphere of radius r, shortlex sorted.
std::vector<GroupElement> next_sphere(const GroupModel& model, std::span<const GroupElement> sphere);

}  // namespace serial

namespace parallel {

template <class F>
auto argmax_pairs(std::size_t n, std::size_t m, F&& f) {
  using R = std::decay_t<decltype(f(std::size_t{}, std::size_t{}))>;
  using T = typename R::value_type;
  PairArgmax<T> best;
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  detail::ExceptionSlot errors;
  std::mutex merge;
  const long long total = static_cast<long long>(n * m);
#pragma omp parallel
  {
    std::optional<T> local;
    std::size_t local_index = std::numeric_limits<std::size_t>::max();
#pragma omp for schedule(dynamic, 64)
    for (long long k = 0; k < total; ++k) {
      errors.run([&] {
        const auto idx = static_cast<std::size_t>(k);
        R v = f(idx / m, idx % m);
        if (detail::better(v, idx, local, local_index)) {
          local = std::move(v);
          local_index = idx;
        }
      });
    }
    std::lock_guard lock(merge);
    if (detail::better(local, local_index, best.value, best_index)) {
      best.value = std::move(local);
      best_index = local_index;
      best.where = {local_index / m, local_index % m};
    }
  }
  errors.rethrow();
  return best;
}

template <class P>
std::optional<PairIndex> first_pair(std::size_t n, std::size_t m, P&& pred) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{none};
  detail::ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long row = 0; row < static_cast<long long>(n); ++row) {
    const auto i = static_cast<std::size_t>(row);
    if (i * m >= best.load(std::memory_order_relaxed)) continue;
    errors.run([&] {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t idx = i * m + j;
        if (idx >= best.load(std::memory_order_relaxed)) return;
        if (pred(i, j)) {
          std::size_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          return;
        }
      }
    });
  }
  errors.rethrow();
  if (best == none) return std::nullopt;
  return PairIndex{best / m, best % m};
}

template <class F>
auto map_range(std::size_t n, F&& f) {
  using R = std::decay_t<decltype(f(std::size_t{}))>;
  std::vector<std::optional<R>> slots(n);
  detail::ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < static_cast<long long>(n); ++k)
    errors.run([&] { slots[static_cast<std::size_t>(k)].emplace(f(static_cast<std::size_t>(k))); });
  errors.rethrow();
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class P>
std::vector<PairIndex> upper_pairs_where(std::size_t n, P&& pred) {
  std::vector<std::vector<PairIndex>> rows(n);
  detail::ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 8)
  for (long long row = 0; row < static_cast<long long>(n); ++row) {
    const auto i = static_cast<std::size_t>(row);
    errors.run([&] {
      for (std::size_t j = i + 1; j < n; ++j)
        if (pred(i, j)) rows[i].push_back({i, j});
    });
  }
  errors.rethrow();
  std::vector<PairIndex> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<GroupElement> next_sphere(const GroupModel& model, std::span<const GroupElement> sphere);

}  // namespace parallel

}  // namespace qbns::kernels
