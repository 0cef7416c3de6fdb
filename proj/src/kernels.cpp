#include "qbns/kernels.hpp"

#include <algorithm>

namespace qbns::kernels {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

void expand_into(const GroupModel& model, const GroupElement& g, std::size_t target,
                 std::vector<GroupElement>& out) {
  for (Generator s : model.symmetric_generators()) {
    GroupElement h = model.step(g, s);
    if (h.length() == target) out.push_back(std::move(h));
  }
}

std::vector<GroupElement> canonical(std::vector<GroupElement> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t sphere_radius(std::span<const GroupElement> sphere) {
  return sphere.empty() ? 0 : sphere.front().length();
}

}  // namespace

std::vector<GroupElement> serial::next_sphere(const GroupModel& model, std::span<const GroupElement> sphere) {
  const std::size_t target = sphere_radius(sphere) + 1;
  std::vector<GroupElement> out;
  for (const auto& g : sphere) expand_into(model, g, target, out);
  return canonical(std::move(out));
}

std::vector<GroupElement> parallel::next_sphere(const GroupModel& model, std::span<const GroupElement> sphere) {
  const std::size_t target = sphere_radius(sphere) + 1;
  auto pieces = parallel::map_range(sphere.size(), [&](std::size_t i) {
    std::vector<GroupElement> local;
    expand_into(model, sphere[i], target, local);
    return local;
  });
  std::vector<GroupElement> out;
  for (auto& p : pieces) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return canonical(std::move(out));
}

}  // namespace qbns::kernels
