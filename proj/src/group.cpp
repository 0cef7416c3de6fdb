#include "qbns/group.hpp"
#include "qbns/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace qbns {

namespace {

// Walks the normal-form word of an element letter by letter without materializing it.
class LetterCursor {
 public:
  explicit LetterCursor(const GroupElement& g) : g_(g) { skip_empty(); }

  bool done() const { return free_pos_ >= g_.free_part().size() && ab_index_ >= g_.abelian_part().size(); }

  // (block, index, inverse): free letters sort before abelian letters.
  std::tuple<int, int, bool> key() const {
    if (free_pos_ < g_.free_part().size()) {
      const Generator s = g_.free_part()[free_pos_];
      return {0, s.index, s.inverse};
    }
    return {1, static_cast<int>(ab_index_), g_.abelian_part()[ab_index_] < 0};
  }

  void advance() {
    if (free_pos_ < g_.free_part().size()) {
      ++free_pos_;
    } else {
      ++ab_used_;
    }
    skip_empty();
  }

 private:
  void skip_empty() {
    if (free_pos_ < g_.free_part().size()) return;
    while (ab_index_ < g_.abelian_part().size() &&
           ab_used_ >= static_cast<std::uint64_t>(std::llabs(g_.abelian_part()[ab_index_]))) {
      ++ab_index_;
      ab_used_ = 0;
    }
  }

  const GroupElement& g_;
  std::size_t free_pos_ = 0;
  std::size_t ab_index_ = 0;
  std::uint64_t ab_used_ = 0;
};

void push_reduced(std::vector<Generator>& word, Generator s) {
  if (!word.empty() && word.back() == s.inverted()) {
    word.pop_back();
  } else {
    word.push_back(s);
  }
}

}  // namespace

bool GroupElement::is_identity() const {
  return free_.empty() && std::all_of(abelian_.begin(), abelian_.end(), [](auto v) { return v == 0; });
}

std::size_t GroupElement::length() const {
  std::size_t len = free_.size();
  for (auto v : abelian_) len += static_cast<std::size_t>(std::llabs(v));
  return len;
}

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
  if (auto c = a.length() <=> b.length(); c != 0) return c;
  if (a.abelian_.empty() && b.abelian_.empty()) {
    return std::lexicographical_compare_three_way(a.free_.begin(), a.free_.end(), b.free_.begin(),
                                                  b.free_.end());
  }
  LetterCursor x(a);
  LetterCursor y(b);
  while (!x.done() && !y.done()) {
    if (auto c = x.key() <=> y.key(); c != 0) return c;
    x.advance();
    y.advance();
  }
  return std::strong_ordering::equal;
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (Generator s : g.free_part()) mix((static_cast<std::size_t>(s.index) << 1) | (s.inverse ? 1U : 0U));
  mix(0xabcdef);
  for (auto v : g.abelian_part()) mix(static_cast<std::size_t>(v));
  return h;
}

GroupModel::GroupModel(GroupKind kind, int free_rank, int abelian_rank, std::string names)
    : kind_(kind), free_rank_(free_rank), abelian_rank_(abelian_rank), names_(std::move(names)) {
  if (free_rank_ < 0 || abelian_rank_ < 0 || free_rank_ + abelian_rank_ == 0)
    throw PreconditionError("group model needs at least one generator");
  if (free_rank_ + abelian_rank_ > 26) throw PreconditionError("at most 26 generators are supported");
  if (names_.empty()) {
    for (int i = 0; i < free_rank_ + abelian_rank_; ++i) names_.push_back(static_cast<char>('a' + i));
  }
  if (static_cast<int>(names_.size()) != free_rank_ + abelian_rank_)
    throw PreconditionError("expected " + std::to_string(free_rank_ + abelian_rank_) + " generator names, got '" +
                            names_ + "'");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const char ch = names_[i];
    if (!std::islower(static_cast<unsigned char>(ch)))
      throw PreconditionError("generator names must be lower-case letters, got '" + names_ + "'");
    if (names_.find(ch) != i) throw PreconditionError("duplicate generator name in '" + names_ + "'");
  }
  for (int i = 0; i < generator_count(); ++i) {
    symmetric_.push_back({static_cast<std::uint16_t>(i), false});
    symmetric_.push_back({static_cast<std::uint16_t>(i), true});
  }
}

GroupModel GroupModel::free_group(int rank, std::string names) {
  if (rank < 1) throw PreconditionError("free group rank must be >= 1");
  return GroupModel(GroupKind::Free, rank, 0, std::move(names));
}

GroupModel GroupModel::free_times_abelian(int rank, int abelian_rank, std::string names) {
  return GroupModel(GroupKind::FreeTimesAbelian, rank, abelian_rank, std::move(names));
}

GroupModel GroupModel::with_ball_cap(std::size_t cap) const {
  GroupModel m = *this;
  m.ball_cap_ = cap;
  return m;
}

GroupElement GroupModel::identity() const {
  return GroupElement({}, std::vector<std::int64_t>(static_cast<std::size_t>(abelian_rank_), 0));
}

void GroupModel::validate(Generator s) const {
  if (s.index >= generator_count())
    throw ModelMismatch("generator index " + std::to_string(s.index) + " out of range for " + describe());
}

void GroupModel::validate(const GroupElement& g) const {
  if (g.abelian_part().size() != static_cast<std::size_t>(abelian_rank_))
    throw ModelMismatch("element has abelian rank " + std::to_string(g.abelian_part().size()) + ", model " +
                        describe());
  for (Generator s : g.free_part())
    if (s.index >= free_rank_) throw ModelMismatch("element uses a non-free generator in its free part");
}

GroupElement GroupModel::element(Generator s) const { return step(identity(), s); }

GroupElement GroupModel::step(const GroupElement& g, Generator s) const {
  validate(s);
  GroupElement r = g;
  if (s.index < free_rank_) {
    push_reduced(r.free_, s);
  } else {
    r.abelian_[s.index - free_rank_] += s.inverse ? -1 : 1;
  }
  return r;
}

GroupElement GroupModel::reduce(std::span<const Generator> word) const {
  GroupElement r = identity();
  for (Generator s : word) {
    validate(s);
    if (s.index < free_rank_) {
      push_reduced(r.free_, s);
    } else {
      r.abelian_[s.index - free_rank_] += s.inverse ? -1 : 1;
    }
  }
  return r;
}

GroupElement GroupModel::multiply(const GroupElement& g, const GroupElement& h) const {
  validate(g);
  validate(h);
  GroupElement r = g;
  for (Generator s : h.free_) push_reduced(r.free_, s);
  for (std::size_t i = 0; i < r.abelian_.size(); ++i) r.abelian_[i] += h.abelian_[i];
  return r;
}

GroupElement GroupModel::inverse(const GroupElement& g) const {
  validate(g);
  GroupElement r = g;
  std::reverse(r.free_.begin(), r.free_.end());
  for (auto& s : r.free_) s = s.inverted();
  for (auto& v : r.abelian_) v = -v;
  return r;
}

GroupElement GroupModel::power(const GroupElement& g, std::int64_t m) const {
  const GroupElement base = m < 0 ? inverse(g) : g;
  GroupElement r = identity();
  for (std::int64_t i = 0; i < (m < 0 ? -m : m); ++i) r = multiply(r, base);
  return r;
}

GroupElement GroupModel::commutator(const GroupElement& g, const GroupElement& h) const {
  return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
}

std::size_t GroupModel::distance(const GroupElement& g, const GroupElement& h) const {
  return multiply(inverse(g), h).length();
}

std::optional<Generator> GroupModel::step_between(const GroupElement& g, const GroupElement& h) const {
  const GroupElement d = multiply(inverse(g), h);
  if (d.length() != 1) return std::nullopt;
  if (!d.free_.empty()) return d.free_.front();
  for (std::size_t i = 0; i < d.abelian_.size(); ++i)
    if (d.abelian_[i] != 0) return Generator{static_cast<std::uint16_t>(free_rank_ + i), d.abelian_[i] < 0};
  return std::nullopt;
}

void GroupModel::check_radius(std::size_t radius) const {
  if (radius > ball_cap_) throw CapExceeded("ball radius", radius, ball_cap_);
}

std::vector<GroupElement> GroupModel::ball(std::size_t radius) const {
  check_radius(radius);
  std::vector<GroupElement> out{identity()};
  std::vector<GroupElement> sphere{identity()};
  for (std::size_t r = 0; r < radius; ++r) {
    sphere = kernels::parallel::next_sphere(*this, sphere);
    out.insert(out.end(), sphere.begin(), sphere.end());
  }
  return out;
}

std::vector<Generator> GroupModel::normal_word(const GroupElement& g) const {
  validate(g);
  std::vector<Generator> w = g.free_;
  for (std::size_t i = 0; i < g.abelian_.size(); ++i) {
    const auto v = g.abelian_[i];
    for (std::int64_t k = 0; k < std::llabs(v); ++k)
      w.push_back({static_cast<std::uint16_t>(free_rank_ + i), v < 0});
  }
  return w;
}

char GroupModel::letter(Generator s) const {
  validate(s);
  const char ch = names_[s.index];
  return s.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch))) : ch;
}

std::vector<Generator> GroupModel::parse_word(std::string_view text) const {
  std::vector<Generator> word;
  for (char ch : text) {
    if (ch == '1' || std::isspace(static_cast<unsigned char>(ch))) continue;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto pos = names_.find(lower);
    if (pos == std::string::npos)
      throw ModelMismatch(std::string("unknown generator letter '") + ch + "' for " + describe());
    word.push_back({static_cast<std::uint16_t>(pos), ch != lower});
  }
  return word;
}

GroupElement GroupModel::parse(std::string_view text) const {
  const auto word = parse_word(text);
  return reduce(word);
}

std::string GroupModel::format_word(std::span<const Generator> word) const {
  std::string s;
  for (Generator g : word) s.push_back(letter(g));
  return s;
}

std::string GroupModel::format(const GroupElement& g) const {
  if (g.is_identity()) return "1";
  const auto w = normal_word(g);
  return format_word(w);
}

std::string GroupModel::describe() const {
  std::ostringstream os;
  if (kind_ == GroupKind::Free) {
    os << "F" << free_rank_;
  } else {
    os << "F" << free_rank_ << "xZ^" << abelian_rank_;
  }
  os << "<" << names_ << ">";
  return os.str();
}

}  // namespace qbns
