#include "qbns/quasimorphism.hpp"
#include "qbns/kernels.hpp"

#include <algorithm>
#include <sstream>
#include <variant>

namespace qbns {

struct Quasimorphism::Node {
  struct Hom {
    std::vector<ExactReal> values;
  };
  struct Brooks {
    std::vector<Generator> word;
    std::vector<Generator> inverse_word;
  };
  struct Combo {
    std::vector<std::pair<ExactReal, Quasimorphism>> terms;
  };
  struct Homog {
    Quasimorphism base;
  };
  std::variant<Hom, Brooks, Combo, Homog> data;
};

namespace {

std::vector<Generator> invert_word(const std::vector<Generator>& w) {
  std::vector<Generator> r(w.rbegin(), w.rend());
  for (auto& s : r) s = s.inverted();
  return r;
}

std::int64_t count_linear(const std::vector<Generator>& text, const std::vector<Generator>& w) {
  if (w.size() > text.size()) return 0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i + w.size() <= text.size(); ++i)
    if (std::equal(w.begin(), w.end(), text.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
  return count;
}

std::int64_t count_cyclic(const std::vector<Generator>& period, const std::vector<Generator>& w) {
  const std::size_t n = period.size();
  if (n == 0) return 0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool match = true;
    for (std::size_t j = 0; j < w.size() && match; ++j) match = period[(i + j) % n] == w[j];
    if (match) ++count;
  }
  return count;
}

std::vector<Generator> cyclic_reduction(std::vector<Generator> w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverted()) {
    ++lo;
    --hi;
  }
  return {w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi)};
}

}  // namespace

Quasimorphism Quasimorphism::homomorphism(std::vector<ExactReal> generator_values) {
  if (generator_values.empty()) throw PreconditionError("homomorphism needs generator values");
  return Quasimorphism(std::make_shared<Node>(Node{Node::Hom{std::move(generator_values)}}));
}

Quasimorphism Quasimorphism::brooks(std::vector<Generator> word) {
  if (word.empty()) throw PreconditionError("Brooks word must be non-empty");
  for (std::size_t i = 1; i < word.size(); ++i)
    if (word[i] == word[i - 1].inverted()) throw PreconditionError("Brooks word must be freely reduced");
  auto inv = invert_word(word);
  return Quasimorphism(std::make_shared<Node>(Node{Node::Brooks{std::move(word), std::move(inv)}}));
}

Quasimorphism Quasimorphism::combination(std::vector<std::pair<ExactReal, Quasimorphism>> terms) {
  if (terms.empty()) throw PreconditionError("combination needs at least one term");
  return Quasimorphism(std::make_shared<Node>(Node{Node::Combo{std::move(terms)}}));
}

Quasimorphism Quasimorphism::homogenized(Quasimorphism base) {
  return Quasimorphism(std::make_shared<Node>(Node{Node::Homog{std::move(base)}}));
}

Quasimorphism Quasimorphism::scaled(const ExactReal& lambda) const { return combination({{lambda, *this}}); }

QuasimorphismKind Quasimorphism::kind() const { return static_cast<QuasimorphismKind>(node_->data.index()); }

bool Quasimorphism::is_homomorphism() const {
  return std::visit(
      [](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom>) return true;
        if constexpr (std::is_same_v<T, Node::Brooks>) return false;
        if constexpr (std::is_same_v<T, Node::Combo>)
          return std::all_of(d.terms.begin(), d.terms.end(), [](const auto& t) { return t.second.is_homomorphism(); });
        if constexpr (std::is_same_v<T, Node::Homog>) return d.base.is_homomorphism();
      },
      node_->data);
}

bool Quasimorphism::is_homogeneous() const {
  return std::visit(
      [](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom>) return true;
        if constexpr (std::is_same_v<T, Node::Brooks>) return false;
        if constexpr (std::is_same_v<T, Node::Combo>)
          return std::all_of(d.terms.begin(), d.terms.end(), [](const auto& t) { return t.second.is_homogeneous(); });
        if constexpr (std::is_same_v<T, Node::Homog>) return true;
      },
      node_->data);
}

bool Quasimorphism::has_exact_homogenization() const {
  return std::visit(
      [](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom> || std::is_same_v<T, Node::Brooks>) return true;
        if constexpr (std::is_same_v<T, Node::Combo>)
          return std::all_of(d.terms.begin(), d.terms.end(), [](const auto& t) { return t.second.is_homogeneous(); });
        if constexpr (std::is_same_v<T, Node::Homog>) return d.base.has_exact_homogenization();
      },
      node_->data);
}

std::optional<ExactReal> Quasimorphism::known_defect_upper() const {
  if (is_homomorphism()) return ExactReal(0);
  return std::nullopt;
}

const std::vector<ExactReal>& Quasimorphism::generator_values() const {
  if (kind() != QuasimorphismKind::Homomorphism) throw PreconditionError("not a homomorphism");
  return std::get<Node::Hom>(node_->data).values;
}

const std::vector<Generator>& Quasimorphism::brooks_word() const {
  if (kind() != QuasimorphismKind::Brooks) throw PreconditionError("not a Brooks quasimorphism");
  return std::get<Node::Brooks>(node_->data).word;
}

const std::vector<std::pair<ExactReal, Quasimorphism>>& Quasimorphism::terms() const {
  if (kind() != QuasimorphismKind::Combination) throw PreconditionError("not a combination");
  return std::get<Node::Combo>(node_->data).terms;
}

const Quasimorphism& Quasimorphism::base() const {
  if (kind() != QuasimorphismKind::Homogenized) throw PreconditionError("not a homogenization");
  return std::get<Node::Homog>(node_->data).base;
}

void Quasimorphism::validate(const GroupModel& model) const {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom>) {
          if (d.values.size() != static_cast<std::size_t>(model.generator_count()))
            throw ModelMismatch("homomorphism has " + std::to_string(d.values.size()) + " values, model " +
                                model.describe() + " has " + std::to_string(model.generator_count()) +
                                " generators");
        } else if constexpr (std::is_same_v<T, Node::Brooks>) {
          for (Generator s : d.word)
            if (!model.is_free_generator(s))
              throw ModelMismatch("Brooks word must use free generators only");
        } else if constexpr (std::is_same_v<T, Node::Combo>) {
          for (const auto& t : d.terms) t.second.validate(model);
        } else {
          d.base.validate(model);
        }
      },
      node_->data);
}

ExactReal Quasimorphism::evaluate(const GroupModel& model, const GroupElement& g) const {
  model.validate(g);
  return std::visit(
      [&](const auto& d) -> ExactReal {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom>) {
          if (d.values.size() != static_cast<std::size_t>(model.generator_count()))
            throw ModelMismatch("homomorphism value count does not match " + model.describe());
          ExactReal sum;
          for (Generator s : g.free_part()) {
            if (s.inverse) sum -= d.values[s.index];
            else sum += d.values[s.index];
          }
          const auto& ab = g.abelian_part();
          for (std::size_t j = 0; j < ab.size(); ++j)
            if (ab[j] != 0) sum += d.values[static_cast<std::size_t>(model.free_rank()) + j] * ExactReal(ab[j]);
          return sum;
        } else if constexpr (std::is_same_v<T, Node::Brooks>) {
          return ExactReal(count_linear(g.free_part(), d.word) - count_linear(g.free_part(), d.inverse_word));
        } else if constexpr (std::is_same_v<T, Node::Combo>) {
          ExactReal sum;
          for (const auto& [coef, part] : d.terms) sum += coef * part.evaluate(model, g);
          return sum;
        } else {
          return d.base.homogeneous_value(model, g);
        }
      },
      node_->data);
}

ExactReal Quasimorphism::homogeneous_value(const GroupModel& model, const GroupElement& g) const {
  switch (kind()) {
    case QuasimorphismKind::Homomorphism:
      return evaluate(model, g);
    case QuasimorphismKind::Brooks:
      return homogenize_exact(model, *this, g);
    case QuasimorphismKind::Homogenized:
      return base().homogeneous_value(model, g);
    case QuasimorphismKind::Combination:
      if (!is_homogeneous())
        throw PreconditionError(
            "no exact homogenization for a combination with non-homogeneous parts; use homogenize_numeric");
      return evaluate(model, g);
  }
  return {};
}

std::string Quasimorphism::describe(const GroupModel& model) const {
  std::ostringstream os;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Node::Hom>) {
          os << "hom(";
          for (std::size_t i = 0; i < d.values.size(); ++i) {
            if (i) os << ",";
            if (i < model.names().size()) os << model.names()[i] << ":";
            os << d.values[i];
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, Node::Brooks>) {
          os << "brooks(" << model.format_word(d.word) << ")";
        } else if constexpr (std::is_same_v<T, Node::Combo>) {
          os << "(";
          for (std::size_t i = 0; i < d.terms.size(); ++i) {
            if (i) os << " + ";
            os << d.terms[i].first << "*" << d.terms[i].second.describe(model);
          }
          os << ")";
        } else {
          os << "bar(" << d.base.describe(model) << ")";
        }
      },
      node_->data);
  return os.str();
}

ExactReal homogenize_exact(const GroupModel& model, const Quasimorphism& brooks, const GroupElement& g) {
  model.validate(g);
  const auto& w = brooks.brooks_word();
  for (Generator s : w)
    if (!model.is_free_generator(s)) throw ModelMismatch("Brooks word must use free generators only");
  const auto period = cyclic_reduction(g.free_part());
  const auto winv = invert_word(w);
  return ExactReal(count_cyclic(period, w) - count_cyclic(period, winv));
}

Interval homogenize_numeric(const GroupModel& model, const Quasimorphism& phi, const GroupElement& g,
                            std::int64_t n, std::optional<ExactReal> defect_upper) {
  if (n < 1) throw PreconditionError("homogenize_numeric needs N >= 1");
  if (!defect_upper) defect_upper = phi.known_defect_upper();
  if (!defect_upper) throw PreconditionError("homogenize_numeric needs a finite upper defect bound");
  const ExactReal nn(n);
  const ExactReal centre = phi.evaluate(model, model.power(g, n)) / nn;
  const ExactReal half = *defect_upper / nn;
  return {centre - half, centre + half};
}

ExactReal witness_value(const GroupModel& model, const Quasimorphism& phi, const DefectWitness& w) {
  if (w.kind == DefectWitnessKind::Commutator) return phi.homogeneous_value(model, model.commutator(w.g, w.h));
  const bool homogeneous = phi.is_homogeneous();
  auto val = [&](const GroupElement& x) {
    return homogeneous ? phi.homogeneous_value(model, x) : phi.evaluate(model, x);
  };
  return (val(w.g) + val(w.h) - val(model.multiply(w.g, w.h))).abs();
}

DefectEstimate defect_lower_bound(const GroupModel& model, const Quasimorphism& phi, std::size_t radius,
                                  std::optional<ExactReal> user_upper) {
  phi.validate(model);
  const auto ball = model.ball(radius);
  const bool homogeneous = phi.is_homogeneous();
  auto value = [&](const GroupElement& x) {
    return homogeneous ? phi.homogeneous_value(model, x) : phi.evaluate(model, x);
  };
  const auto values = kernels::parallel::map_range(ball.size(), [&](std::size_t i) { return value(ball[i]); });

  const auto three = kernels::parallel::argmax_pairs(ball.size(), ball.size(), [&](std::size_t i, std::size_t j) {
    return std::optional<ExactReal>((values[i] + values[j] - value(model.multiply(ball[i], ball[j]))).abs());
  });

  DefectEstimate est;
  est.witness = {DefectWitnessKind::ThreeTerm, ball[three.where.i], ball[three.where.j], *three.value};
  std::ostringstream prov;
  prov << "three-term max over ball(" << radius << ")^2";
  if (homogeneous) {
    const auto comm = kernels::parallel::argmax_pairs(ball.size(), ball.size(), [&](std::size_t i, std::size_t j) {
      return std::optional<ExactReal>(phi.homogeneous_value(model, model.commutator(ball[i], ball[j])));
    });
    prov << "; commutator sup over ball(" << radius << ")^2";
    if (!(*comm.value < *three.value))
      est.witness = {DefectWitnessKind::Commutator, ball[comm.where.i], ball[comm.where.j], *comm.value};
  }
  est.lower = est.witness.value;

  if (user_upper) {
    est.upper = user_upper;
    prov << "; upper bound user-supplied";
  } else if (auto known = phi.known_defect_upper()) {
    est.upper = known;
    prov << "; upper bound 0 (homomorphism)";
  } else {
    prov << "; upper bound unknown";
  }
  if (est.upper && *est.upper < est.lower)
    throw PreconditionError("supplied defect upper bound " + est.upper->to_string() + " is below the certified lower bound " +
                            est.lower.to_string());
  est.provenance = prov.str();
  return est;
}

Membership LevelSubset::membership(const GroupModel& model, const GroupElement& g) const {
  const ExactReal v = phi.homogeneous_value(model, g);
  if (mode == LevelMode::Positive) return v.sign() > 0 ? Membership::In : Membership::Out;
  return v.abs() <= ExactReal(2) * defect ? Membership::In : Membership::Out;
}

std::optional<ScalingElement> find_scaling_element(const GroupModel& model, const Quasimorphism& phi,
                                                   const ExactReal& defect, std::size_t radius) {
  if (defect.sign() <= 0) throw PreconditionError("find_scaling_element needs D* > 0");
  const auto ball = model.ball(radius);
  const ExactReal low = ExactReal(4) * defect / ExactReal(5);
  const auto hit = kernels::parallel::first_pair(ball.size(), ball.size(), [&](std::size_t i, std::size_t j) {
    const ExactReal v = phi.homogeneous_value(model, model.commutator(ball[i], ball[j]));
    return low < v && v <= defect;
  });
  if (!hit) return std::nullopt;
  ScalingElement s;
  s.g = ball[hit->i];
  s.h = ball[hit->j];
  s.c = model.commutator(s.g, s.h);
  s.value = phi.homogeneous_value(model, s.c);
  s.length = s.c.length();
  return s;
}

std::vector<int> shift_search_order(int max_shift) {
  std::vector<int> order{0};
  for (int m = 1; m <= max_shift; ++m) {
    order.push_back(m);
    order.push_back(-m);
  }
  return order;
}

AkerCertificate certify_aker_approximate_subgroup(const GroupModel& model, const Quasimorphism& phi,
                                                  const ExactReal& defect, const GroupElement& c,
                                                  std::size_t radius) {
  if (defect.sign() < 0) throw PreconditionError("D* must be non-negative");
  model.validate(c);
  AkerCertificate cert;
  cert.max_shift = defect.sign() == 0 ? 0 : 5;
  const LevelSubset aker{phi, LevelMode::Aker, defect};

  std::vector<GroupElement> powers;  // indexed by m + max_shift
  for (int m = -cert.max_shift; m <= cert.max_shift; ++m) powers.push_back(model.power(c, m));
  for (int m = cert.max_shift; m >= -cert.max_shift; --m)
    cert.subset.witnesses.push_back(powers[static_cast<std::size_t>(m + cert.max_shift)]);
  cert.subset.contains = [model, aker](const GroupElement& g) { return aker.contains(model, g); };

  for (auto& g : model.ball(radius))
    if (aker.contains(model, g)) cert.members.push_back(std::move(g));

  const auto order = shift_search_order(cert.max_shift);
  constexpr int kNoShift = 1000;
  const std::size_t n = cert.members.size();
  const auto rows = kernels::parallel::map_range(n, [&](std::size_t i) {
    std::vector<int> row(n, kNoShift);
    for (std::size_t j = 0; j < n; ++j) {
      const GroupElement gh = model.multiply(cert.members[i], cert.members[j]);
      for (int m : order) {
        if (aker.contains(model, model.multiply(gh, powers[static_cast<std::size_t>(m + cert.max_shift)]))) {
          row[j] = m;
          break;
        }
      }
    }
    return row;
  });
  cert.shifts.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cert.shifts.push_back(rows[i][j]);
      if (rows[i][j] == kNoShift) cert.counterexamples.emplace_back(i, j);
    }
  return cert;
}

}  // namespace qbns
