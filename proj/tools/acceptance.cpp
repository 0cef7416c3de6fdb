// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qbns/cli/report.hpp"
#include "qbns/kernels.hpp"
#include "qbns/novikov.hpp"
#include "qbns/path.hpp"
#include "qbns/quasimorphism.hpp"
#include "qbns/rips.hpp"
#include "qbns/sigma.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace qbns;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

const GroupModel f2 = GroupModel::free_group(2);
const Quasimorphism psi = Quasimorphism::brooks(f2.parse_word("ab"));
const Quasimorphism psi_bar = Quasimorphism::homogenized(psi);
const GroupModel z2 = GroupModel::free_times_abelian(1, 1, "ac").with_ball_cap(40);
const Quasimorphism z2_hom = Quasimorphism::homomorphism({ExactReal(1), ExactReal(1)});

GroupElement random_reduced(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = rng() % (max_len + 1);
  std::vector<Generator> w;
  while (w.size() < len) {
    const Generator s{static_cast<std::uint16_t>(rng() % 2), rng() % 2 == 1};
    if (!w.empty() && w.back() == s.inverted()) continue;
    w.push_back(s);
  }
  return f2.reduce(w);
}

// Independent oracle: count ab minus BA starting in the middle copy of uuu,
// u the cyclic reduction of g.
ExactReal three_period_count(const GroupElement& g) {
  std::vector<Generator> u = g.free_part();
  while (u.size() >= 2 && u.front() == u.back().inverted()) {
    u.erase(u.begin());
    u.pop_back();
  }
  if (u.empty()) return ExactReal(0);
  std::vector<Generator> uuu;
  for (int k = 0; k < 3; ++k) uuu.insert(uuu.end(), u.begin(), u.end());
  const Generator a{0, false}, b{1, false};
  std::int64_t count = 0;
  for (std::size_t i = u.size(); i < 2 * u.size(); ++i) {
    if (uuu[i] == a && uuu[i + 1] == b) ++count;
    if (uuu[i] == b.inverted() && uuu[i + 1] == a.inverted()) --count;
  }
  return ExactReal(count);
}

Outcome criterion1() {
  std::mt19937_64 rng(2024);
  std::size_t checks = 0, failures = 0;
  for (int i = 0; i < 200; ++i) {
    const GroupElement g = random_reduced(rng, 6);
    const ExactReal base = homogenize_exact(f2, psi, g);
    if (base != three_period_count(g)) ++failures;
    for (std::int64_t n = -8; n <= 8; ++n) {
      ++checks;
      if (homogenize_exact(f2, psi, f2.power(g, n)) != ExactReal(n) * base) ++failures;
    }
  }
  const GroupElement comm = f2.parse("abAB");
  const ExactReal c = homogenize_exact(f2, psi, comm);
  const bool ok = failures == 0 && c == ExactReal(1) && three_period_count(comm) == ExactReal(1);
  return {ok, std::to_string(checks) + " power identities, " + std::to_string(failures) +
                  " failures; phi-bar([a,b]) = " + c.to_string()};
}

Outcome criterion2() {
  const auto est = defect_lower_bound(f2, psi, 4);
  const ExactReal d_bf = est.lower;
  const auto ball = f2.ball(6);
  const auto gaps = kernels::parallel::map_range(ball.size(), [&](std::size_t i) {
    return (psi.evaluate(f2, ball[i]) - psi_bar.homogeneous_value(f2, ball[i])).abs();
  });
  ExactReal worst{0};
  std::size_t violations = 0;
  for (const auto& g : gaps) {
    worst = max(worst, g);
    if (d_bf < g) ++violations;
  }
  return {violations == 0 && d_bf.sign() > 0,
          "D_bf = " + d_bf.to_string() + " over ball(4)^2; max gap " + worst.to_string() + " over " +
              std::to_string(ball.size()) + " elements of ball(6)"};
}

Outcome criterion3() {
  const auto cert = certify_aker_approximate_subgroup(f2, psi_bar, ExactReal(1), f2.parse("abAB"), 4);
  const bool ok = cert.passed() && cert.subset.witnesses.size() == 11 && !cert.members.empty();
  return {ok, std::to_string(cert.members.size()) + " members, " + std::to_string(cert.members.size() * cert.members.size()) +
                  " pairs, |X| = " + std::to_string(cert.subset.witnesses.size()) + ", " +
                  std::to_string(cert.counterexamples.size()) + " counterexamples"};
}

Outcome criterion4() {
  std::ostringstream detail;
  bool ok = true;
  for (const char* far : {"aaaaa", "ccccc", "aaacc", "AAAAA", "aaCCC"}) {
    const std::vector<GroupElement> pts{z2.identity(), z2.parse(far)};
    const auto p = connectivity_profile(z2, pts, 10);
    const bool good = p.monotone() && p.threshold && *p.threshold == 6 && p.separated_witness &&
                      verify_separation(z2, p.vertices, 5, *p.separated_witness) &&
                      verify_components(z2, p.vertices, 6, *p.connected_witness);
    ok = ok && good;
    detail << "{1," << far << "}: N=" << (p.threshold ? std::to_string(*p.threshold) : "none") << " ";
  }
  // Level sets of the homomorphism: profiles must be monotone and certified.
  for (LevelMode mode : {LevelMode::Aker, LevelMode::Positive}) {
    std::vector<GroupElement> sub;
    const LevelSubset level{z2_hom, mode, ExactReal(0)};
    for (auto& g : z2.ball(5))
      if (level.contains(z2, g)) sub.push_back(std::move(g));
    const auto p = connectivity_profile(z2, sub, 6);
    ok = ok && p.monotone() && p.threshold && verify_components(z2, p.vertices, *p.threshold, *p.connected_witness);
    detail << (mode == LevelMode::Aker ? "kernel" : "positive") << " ball(5): N="
           << (p.threshold ? std::to_string(*p.threshold) : "none") << " ";
  }
  return {ok, detail.str()};
}

Outcome criterion5() {
  const GroupModel m = f2z_model().with_ball_cap(12);
  const Quasimorphism phi = f2z_phi();
  std::vector<GroupElement> kernel;
  for (auto& g : m.ball(6))
    if (phi.evaluate(m, g).sign() == 0) kernel.push_back(std::move(g));
  std::mt19937_64 rng(99);
  ExactReal lo{0}, hi{0};
  std::size_t bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& g = kernel[rng() % kernel.size()];
    const auto& h = kernel[rng() % kernel.size()];
    const auto w = f2z_kernel_path_normalize(m, phi, geodesic(m, g, h));
    if (!replay_witness(m, phi, w, g, h)) ++bad;
    lo = min(lo, w.min_phi);
    hi = max(hi, w.max_phi);
  }
  const bool ok = bad == 0 && !(lo < ExactReal(-3)) && !(ExactReal(3) < hi);
  return {ok, "100 pairs from " + std::to_string(kernel.size()) + " kernel elements; min " + lo.to_string() +
                  ", max " + hi.to_string() + ", " + std::to_string(bad) + " replay failures"};
}

Outcome criterion6() {
  const GroupElement x = f2.parse("b"), c = f2.parse("abAB");
  const ExactReal d(1);
  const ExactReal phi_c = psi_bar.homogeneous_value(f2, c);
  ExactReal max_s{0};
  for (Generator s : f2.symmetric_generators()) max_s = max(max_s, psi_bar.homogeneous_value(f2, f2.element(s)).abs());
  std::optional<ExactReal> prev;
  bool ok = true;
  std::ostringstream detail;
  for (std::int64_t n = 1; n <= 6; ++n) {
    const auto p = free_group_obstruction_probe(f2, psi_bar, x, c, n, d);
    const ExactReal bound = (ExactReal(n) * phi_c - d * 2) / (max_s + d) - 1;
    ok = ok && (!prev || *prev < p.max_raw) && bound < p.max_raw;
    prev = p.max_raw;
    detail << "n=" << n << ":" << p.max_raw.to_string() << ">" << bound.to_string() << " ";
  }
  return {ok, detail.str()};
}

Outcome criterion7() {
  std::size_t unsat = 0, zero = 0, bad = 0;
  // (a) free group, two quasimorphisms.
  const CayleyTwoComplex hom_cx(f2, Quasimorphism::homomorphism({ExactReal(1), ExactReal(0)}), ExactReal(0));
  const CayleyTwoComplex brooks_cx(f2, psi_bar, ExactReal(1));
  const auto small = f2.ball(2);
  for (const auto* cx : {&hom_cx, &brooks_cx}) {
    const GroupElement c = cx == &hom_cx ? f2.parse("a") : f2.parse("abAB");
    for (const auto& a : small)
      for (const auto& b : small) {
        const Path q = geodesic(f2, a, b);
        const Chain1 z = ray_cycle(*cx, a, b, q, c, ExactReal(8));
        if (z.is_zero()) {
          ++zero;
          continue;
        }
        const auto r = windowed_boundary_solve(*cx, z, ExactReal(8));
        if (r.solved() || !verify_obstruction(*cx, z, r.columns, std::get<ObstructionCertificate>(r.outcome))) ++bad;
        else ++unsat;
      }
  }
  const bool part_a = bad == 0 && unsat > 0;

  // (b) Z^2 with D* = 0, pairs drawn from the closed positive half of ball(4).
  const CayleyTwoComplex cx(z2, z2_hom, ExactReal(0));
  std::vector<GroupElement> half;
  for (auto& g : z2.ball(4))
    if (z2_hom.homogeneous_value(z2, g).sign() >= 0) half.push_back(std::move(g));
  std::mt19937_64 rng(7);
  std::size_t solved = 0, extracted = 0;
  ExactReal worst{100};
  for (int i = 0; i < 20; ++i) {
    const auto& a = half[rng() % half.size()];
    const auto& b = half[rng() % half.size()];
    const Chain1 z = ray_cycle(cx, a, b, geodesic(z2, a, b), z2.parse("c"), ExactReal(8));
    const auto r = windowed_boundary_solve(cx, z, ExactReal(8));
    if (!r.solved()) continue;
    const auto& y = std::get<BoundarySolution>(r.outcome).y;
    if (!verify_boundary_solution(cx, z, y, r.window)) continue;
    ++solved;
    const auto x = keep_negative_and_extract_path(cx, y, z, a, b, z2.parse("c"));
    worst = min(worst, x.min_phi);
    if (x.residual_nonnegative && x.path.origin() == a && x.path.terminus() == b && !(x.min_phi < -cx.defect())) ++extracted;
  }
  const bool part_b = solved == 20 && extracted == 20;
  std::ostringstream detail;
  detail << "(a) " << unsat << " nonzero free-group cycles UNSAT and replayed, " << zero << " zero, " << bad
         << " bad; (b) " << solved << "/20 solved and verified, " << extracted
         << "/20 extracted paths with min >= 0 (worst " << worst.to_string() << ")";
  return {part_a && part_b, detail.str()};
}

Outcome criterion8() {
  const GroupElement c = z2.parse("c");
  ConstantsBundle b = compute_constants(z2, z2_hom, ExactReal(1), ExactReal(3), c);
  const QLibrary lib = q_library(z2, z2_hom, ExactReal(1), c, b.n, 30);
  if (!lib.complete()) return {false, "q-library incomplete at radius 30"};
  refine_bundle(b, lib);
  std::size_t ok_traces = 0, total_steps = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Path p = peaked_path(z2, z2_hom, b.defect, seed, 2, 8);
    const auto t = peak_reduction(z2, z2_hom, p, lib, b);
    bool decreasing = true;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const auto next = i + 1 < t.steps.size() ? std::pair{t.steps[i + 1].height, t.steps[i + 1].peaks}
                                               : std::pair{t.final_height, t.final_peaks};
      decreasing = decreasing && next < std::pair{t.steps[i].height, t.steps[i].peaks};
    }
    total_steps += t.steps.size();
    if (decreasing && t.height_ok && t.vertices_ok && t.floor_ok && !t.cap_hit) ++ok_traces;
  }
  return {ok_traces == 50, std::to_string(ok_traces) + "/50 traces good, " + std::to_string(total_steps) +
                               " steps; n = " + b.n.str() + ", M = " + b.m.to_string() + ", N = " + b.big_n.to_string()};
}

Outcome criterion9() {
  std::size_t configs = 0, mismatches = 0;
  std::string failing;
  for (const auto& entry : std::filesystem::directory_iterator(QBNS_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    std::ifstream in(entry.path());
    std::ostringstream text;
    text << in.rdbuf();
    std::string bodies[4];
    int k = 0;
    for (int rep = 0; rep < 2; ++rep)
      for (int threads : {1, 8}) bodies[k++] = cli::body_text(cli::run_config(text.str(), {std::nullopt, threads}).report);
    ++configs;
    if (!(bodies[0] == bodies[1] && bodies[0] == bodies[2] && bodies[0] == bodies[3])) {
      ++mismatches;
      failing += " " + entry.path().filename().string();
    }
  }
  return {configs > 0 && mismatches == 0,
          std::to_string(configs) + " configs, 4 runs each, " + std::to_string(mismatches) + " mismatches" + failing};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact homogenization", 10, criterion1},   {2, "Calegari bound", 120, criterion2},
      {3, "Aker certificate", 0, criterion3},        {4, "Rips constants", 0, criterion4},
      {5, "F2 x Z example", 30, criterion5},         {6, "free-group obstruction", 0, criterion6},
      {7, "Novikov windowed solver", 120, criterion7}, {8, "peak reduction", 60, criterion8},
      {9, "determinism", 0, criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.passed = false;
      o.detail += "; over the time limit";
    }
    failed += !o.passed;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.passed ? "PASS" : "FAIL") << "  [" << std::fixed
              << std::setprecision(2) << secs << " s] " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
