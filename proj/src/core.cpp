#include "learnspace/core.hpp"

#include <algorithm>
#include <sstream>

#include "text_lines.hpp"

namespace learnspace {

Domain::Domain(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto& l = labels_[i];
    if (l.empty()) throw ValidationError("empty concept label at position " + std::to_string(i));
    if (l.find_first_of(", \t\r\n{}#") != std::string::npos)
      throw ValidationError("concept label '" + l + "' contains a reserved character");
    if (!index_.emplace(l, static_cast<ConceptId>(i)).second)
      throw ValidationError("duplicate concept label '" + l + "'");
  }
}

std::optional<ConceptId> Domain::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ConceptId Domain::index_of(std::string_view label) const {
  auto id = find(label);
  if (!id) throw ValidationError("unknown concept '" + std::string(label) + "'");
  return *id;
}

State State::full(std::size_t n) {
  State s(n);
  for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = ~std::uint64_t{0};
  if (n % 64) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return s;
}

State State::from_indices(std::size_t n, std::initializer_list<ConceptId> ids) {
  State s(n);
  for (auto c : ids) s.set(c);
  return s;
}

State State::from_indices(std::size_t n, const std::vector<ConceptId>& ids) {
  State s(n);
  for (auto c : ids) s.set(c);
  return s;
}

std::size_t State::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool State::none() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool State::is_subset_of(const State& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

bool State::intersects(const State& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

State& State::operator|=(const State& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

State& State::operator&=(const State& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

State& State::subtract(const State& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

std::vector<ConceptId> State::elements() const {
  std::vector<ConceptId> out;
  for_each([&](ConceptId c) { out.push_back(c); });
  return out;
}

std::size_t State::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ n_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool canonical_less(const State& a, const State& b) {
  auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  // Lexicographic on sorted indices: the first differing concept decides;
  // the state holding the smaller concept sorts first.
  for (std::size_t i = 0; i < a.word_count(); ++i) {
    auto x = a.words()[i] ^ b.words()[i];
    if (x) {
      auto low = x & (~x + 1);
      return (a.words()[i] & low) != 0;
    }
  }
  return false;
}

std::string format_state(const Domain& d, const State& s) {
  if (s.none()) return "{}";
  std::string out;
  s.for_each([&](ConceptId c) {
    if (!out.empty()) out += ',';
    out += d.label(c);
  });
  return out;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_labels(std::string_view text, std::size_t line) {
  std::vector<std::string> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (tok.empty() || tok.find_first_of(" \t") != std::string_view::npos)
      throw ParseError("malformed concept list '" + std::string(text) + "'", line);
    out.emplace_back(tok);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

State parse_concept_list(const Domain& d, std::string_view text) {
  State s(d.size());
  for (const auto& l : split_labels(text, 0)) s.set(d.index_of(l));
  return s;
}

State parse_state(const Domain& d, std::string_view text) {
  text = trim(text);
  if (text == "{}") return State(d.size());
  return parse_concept_list(d, text);
}

SetFamily::SetFamily(Domain domain, std::vector<State> states) : domain_(std::move(domain)) {
  if (states.size() > kMaxStates)
    throw CapacityError("explicit family exceeds " + std::to_string(kMaxStates) + " states");
  index_.reserve(states.size());
  states_.reserve(states.size());
  for (auto& s : states) {
    if (s.universe() != domain_.size())
      throw ValidationError("state over a domain of different size");
    if (index_.insert(s).second) states_.push_back(std::move(s));
  }
  std::sort(states_.begin(), states_.end(), canonical_less);
}

State SetFamily::ground() const {
  State g(domain_.size());
  for (const auto& s : states_) g |= s;
  return g;
}

Domain make_domain(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    labels.push_back(n <= 26 ? std::string(1, static_cast<char>('A' + i)) : "c" + std::to_string(i));
  return Domain(std::move(labels));
}

SetFamily powerset(const Domain& d) {
  const auto n = d.size();
  if (n >= 25) throw CapacityError("powerset too large for an explicit family");
  std::vector<State> states;
  states.reserve(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    State s(n);
    if (n) s.words()[0] = m;
    states.push_back(std::move(s));
  }
  return SetFamily(d, std::move(states));
}

bool is_accessible(const SetFamily& family) {
  for (const auto& s : family) {
    if (s.none()) continue;
    bool ok = false;
    s.for_each([&](ConceptId c) {
      if (!ok && family.contains(s.without(c))) ok = true;
    });
    if (!ok) return false;
  }
  return true;
}

bool is_union_closed(const SetFamily& family) {
  const auto& st = family.states();
  for (std::size_t i = 0; i < st.size(); ++i)
    for (std::size_t j = i + 1; j < st.size(); ++j)
      if (!family.contains(st[i] | st[j])) return false;
  return true;
}

bool is_intersection_closed(const SetFamily& family) {
  const auto& st = family.states();
  for (std::size_t i = 0; i < st.size(); ++i)
    for (std::size_t j = i + 1; j < st.size(); ++j)
      if (!family.contains(st[i] & st[j])) return false;
  return true;
}

bool is_learning_space(const SetFamily& family) {
  return family.contains(State(family.domain().size())) && is_accessible(family) &&
         is_union_closed(family);
}

Fringes state_fringes_bruteforce(const SetFamily& family, const State& s) {
  if (!family.contains(s)) throw ValidationError("state is not a member of the family");
  const auto n = family.domain().size();
  Fringes f{State(n), State(n)};
  for (std::size_t c = 0; c < n; ++c) {
    auto id = static_cast<ConceptId>(c);
    if (s.test(id)) {
      if (family.contains(s.without(id))) f.inner.set(id);
    } else if (family.contains(s.with(id))) {
      f.outer.set(id);
    }
  }
  return f;
}


Domain parse_domain_header(std::string_view line, std::size_t line_no) {
  constexpr std::string_view kPrefix = "domain:";
  if (line.substr(0, kPrefix.size()) != kPrefix)
    throw ParseError("expected 'domain: ...' header", line_no);
  try {
    return Domain(split_labels(line.substr(kPrefix.size()), line_no));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_no);
  }
}

SetFamily parse_states(std::string_view text) {
  detail::LineReader r(text);
  auto header = r.next();
  if (!header) throw ParseError("missing 'domain:' header", r.line_no);
  Domain d = parse_domain_header(*header, r.line_no);
  std::vector<State> states;
  while (auto line = r.next()) {
    try {
      states.push_back(parse_state(d, *line));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), r.line_no);
    }
  }
  return SetFamily(std::move(d), std::move(states));
}

std::string join_labels(const Domain& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += d.labels()[i];
  }
  return out;
}

std::string serialize_states(const SetFamily& family) {
  std::string out = "domain: " + join_labels(family.domain()) + "\n";
  for (const auto& s : family) {
    out += format_state(family.domain(), s);
    out += '\n';
  }
  return out;
}

}  // namespace learnspace
