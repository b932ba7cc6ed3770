#include "learnspace/adaptation.hpp"

#include <algorithm>

namespace learnspace {

namespace {

StateSet as_set(const std::vector<State>& v) { return StateSet(v.begin(), v.end()); }

// Outer fringe of a state from its mex vector.
State outer_from_mex(const SequenceSpace& sp, std::span<const int> m) {
  State out(sp.n());
  for (std::size_t i = 0; i < sp.k(); ++i)
    if (m[i] < static_cast<int>(sp.n())) out.set(sp.sequence(i)[static_cast<std::size_t>(m[i])]);
  return out;
}

// Outer fringe of s + {y}, given the mex vector of s.
State outer_after_adding(const SequenceSpace& sp, const State& s, std::span<const int> m, ConceptId y) {
  const auto n = static_cast<int>(sp.n());
  State out(sp.n());
  for (std::size_t i = 0; i < sp.k(); ++i) {
    int v = m[i];
    if (v < n && sp.sequence(i)[static_cast<std::size_t>(v)] == y) {
      ++v;
      while (v < n) {
        const auto c = sp.sequence(i)[static_cast<std::size_t>(v)];
        if (!s.test(c) && c != y) break;
        ++v;
      }
    }
    if (v < n) out.set(sp.sequence(i)[static_cast<std::size_t>(v)]);
  }
  return out;
}

std::string describe(const SequenceSpace& sp, const State& s) { return "{" + format_state(sp.domain(), s) + "}"; }

int predecessors(const State& s, const MembershipOracle& member) {
  int count = 0;
  s.for_each([&](ConceptId c) {
    if (count < 2 && member(s.without(c))) ++count;
  });
  return count;
}

}  // namespace

std::vector<State> space_inner_fringe(const SequenceSpace& sp) {
  const auto base = base_of_sequences(sp);
  const auto in_base = as_set(base.sets);
  std::vector<State> out;
  for (const auto& s : base.sets) {
    if (s.is_full()) continue;
    bool extends = false;
    for (std::size_t c = 0; c < sp.n() && !extends; ++c) {
      const auto x = static_cast<ConceptId>(c);
      if (!s.test(x) && in_base.contains(s.with(x))) extends = true;
    }
    if (!extends) out.push_back(s);
  }
  return out;
}

std::vector<State> space_outer_fringe(const SequenceSpace& sp) {
  std::vector<State> out;
  struct Visitor {
    const SequenceSpace& sp;
    std::vector<State>& out;
    void enter(ConceptId, const State& s, std::span<const int> m, int) {
      const State outer = outer_from_mex(sp, m);
      State candidates = State::full(sp.n()) - s - outer;
      outer.for_each([&](ConceptId y) { candidates &= outer_after_adding(sp, s, m, y); });
      candidates.for_each([&](ConceptId x) { out.push_back(s.with(x)); });
    }
    void leave(ConceptId, const State&, std::span<const int>, int) {}
  } v{sp, out};
  traverse_states(sp, v);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

SpaceFringe space_fringe(const SequenceSpace& sp) { return {space_inner_fringe(sp), space_outer_fringe(sp)}; }

Adapted remove_state(const SequenceSpace& sp, const State& s) {
  if (s.universe() != sp.n()) throw ValidationError("state over a domain of different size");
  if (!contains(sp, s)) throw ValidationError(describe(sp, s) + " is not a state of the space");
  const auto base = base_of_sequences(sp);
  const auto in_base = as_set(base.sets);
  if (!in_base.contains(s))
    throw ValidationError("cannot remove " + describe(sp, s) + ": it is not a base set (it has several predecessors)");
  if (s.is_full()) throw ValidationError("cannot remove " + describe(sp, s) + ": it is the whole domain");
  for (std::size_t c = 0; c < sp.n(); ++c) {
    const auto x = static_cast<ConceptId>(c);
    if (!s.test(x) && in_base.contains(s.with(x)))
      throw ValidationError("cannot remove " + describe(sp, s) + ": " + describe(sp, s.with(x)) +
                            " is a base set with it as its only predecessor");
  }

  MembershipOracle member = [&](const State& t) { return t != s && contains(sp, t); };
  // A state of the smaller space has one predecessor only if it already had
  // one, or had two of which one was s.
  StateSet candidates;
  for (const auto& b : base.sets)
    if (b != s) candidates.insert(b);
  for (std::size_t c = 0; c < sp.n(); ++c) {
    const auto x = static_cast<ConceptId>(c);
    if (!s.test(x) && contains(sp, s.with(x))) candidates.insert(s.with(x));
  }
  std::vector<State> new_base;
  for (const auto& t : candidates)
    if (predecessors(t, member) == 1) new_base.push_back(t);
  std::sort(new_base.begin(), new_base.end(), canonical_less);
  auto m = minimize_from_base({sp.domain(), std::move(new_base)}, member);
  return {std::move(m.space), std::move(m.base)};
}

Adapted add_state(const SequenceSpace& sp, const State& t) {
  if (t.universe() != sp.n()) throw ValidationError("set over a domain of different size");
  if (contains(sp, t)) throw ValidationError("cannot add " + describe(sp, t) + ": it is already a state");
  // The only possible predecessor; two would make t a union of states.
  std::optional<ConceptId> last;
  t.for_each([&](ConceptId x) {
    if (!last && contains(sp, t.without(x))) last = x;
  });
  if (!last) throw ValidationError("cannot add " + describe(sp, t) + ": no predecessor is a state");
  const State s = t.without(*last);
  const auto m = mex(sp, s);
  bool closed = true;
  outer_from_mex(sp, m).for_each([&](ConceptId y) {
    if (closed && !contains(sp, t.with(y))) closed = false;
  });
  if (!closed)
    throw ValidationError("cannot add " + describe(sp, t) + ": the result would not be closed under union");

  MembershipOracle member = [&](const State& u) { return u == t || contains(sp, u); };
  std::vector<State> new_base{t};
  for (const auto& b : base_of_sequences(sp).sets)
    if (predecessors(b, member) == 1) new_base.push_back(b);
  std::sort(new_base.begin(), new_base.end(), canonical_less);
  auto r = minimize_from_base({sp.domain(), std::move(new_base)}, member);
  return {std::move(r.space), std::move(r.base)};
}

}  // namespace learnspace
