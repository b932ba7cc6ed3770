#include <doctest.h>

#include "fixtures.hpp"
#include "learnspace/adaptation.hpp"
#include "oracles.hpp"

using namespace learnspace;
using fixtures::st;

namespace {

SetFamily with(const SetFamily& f, const State& t) {
  std::vector<State> v(f.states());
  v.push_back(t);
  return SetFamily(f.domain(), v);
}

SetFamily without(const SetFamily& f, const State& t) {
  std::vector<State> v;
  for (const auto& s : f)
    if (s != t) v.push_back(s);
  return SetFamily(f.domain(), v);
}

std::vector<State> sorted(std::vector<State> v) {
  std::sort(v.begin(), v.end(), canonical_less);
  return v;
}

}  // namespace

TEST_CASE("space fringes of small examples") {
  auto sp = fixtures::fig4();
  const auto& d = sp.domain();
  auto fam = sequence_family(sp);
  auto removable = space_inner_fringe(sp);
  for (const auto& s : removable) CHECK(is_learning_space(without(fam, s)));
  // Base {A},{C},{A,B},{B,C}: {A} extends to the base set {A,B}, {C} to {B,C}.
  CHECK(removable == std::vector<State>{st(d, "AB"), st(d, "BC")});
  auto addable = space_outer_fringe(sp);
  CHECK(std::find(addable.begin(), addable.end(), st(d, "B")) != addable.end());
  CHECK(is_learning_space(with(fam, st(d, "B"))));

  auto single = SequenceSpace::from_strings({"A"});
  CHECK(space_inner_fringe(single).empty());
  CHECK(space_inner_fringe(SequenceSpace::from_strings({"ABC"})).empty());
  CHECK(space_outer_fringe(SequenceSpace::from_strings({"ABC", "BCA", "CAB"})).empty());
}

TEST_CASE("space fringes agree with exhaustive edit oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 120; ++t) {
    auto sp = oracle::random_sequence_space(1 + t % 8, 1 + t % 4, rng);
    auto [removable, addable] = oracle::space_edits(sequence_family(sp));
    CHECK(space_inner_fringe(sp) == sorted(removable));
    CHECK(space_outer_fringe(sp) == sorted(addable));
  }
}

TEST_CASE("add and remove states") {
  auto sp = fixtures::fig4();
  const auto& d = sp.domain();
  auto added = add_state(sp, st(d, "B"));
  CHECK(sequence_family(added.space) == powerset(d));
  CHECK(added.space.k() == 3);
  CHECK_THROWS_AS(add_state(sp, st(d, "AB")), ValidationError);
  CHECK_THROWS_AS(remove_state(sp, State::full(3)), ValidationError);
  CHECK_THROWS_AS(remove_state(sp, st(d, "A")), ValidationError);
  CHECK_THROWS_AS(remove_state(sp, st(d, "B")), ValidationError);
  auto back = remove_state(added.space, st(d, "B"));
  CHECK(sequence_family(back.space) == sequence_family(sp));
  try {
    remove_state(SequenceSpace::from_strings({"ABC", "CBA"}), st(d, "AC"));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("not a base set") != std::string::npos);
  }
}

TEST_CASE("edits produce the expected families, bases, and round trips") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 80; ++t) {
    auto sp = oracle::random_sequence_space(2 + t % 7, 1 + t % 4, rng);
    auto fam = sequence_family(sp);
    const auto old_base = base_of_sequences(sp).sets;
    for (const auto& s : space_inner_fringe(sp)) {
      auto r = remove_state(sp, s);
      auto expected = without(fam, s);
      CHECK(sequence_family(r.space) == expected);
      CHECK(r.base.sets == oracle::base_sets(expected));
      CHECK(r.space.k() == minimize(expected).dim_c());
      // Remaining base members plus some one-element extensions of s.
      for (const auto& b : r.base.sets) {
        const bool kept = std::find(old_base.begin(), old_base.end(), b) != old_base.end();
        CHECK((kept || (s.is_subset_of(b) && b.count() == s.count() + 1)));
      }
      CHECK(sequence_family(add_state(r.space, s).space) == fam);
    }
    for (const auto& a : space_outer_fringe(sp)) {
      auto r = add_state(sp, a);
      auto expected = with(fam, a);
      CHECK(sequence_family(r.space) == expected);
      CHECK(r.base.sets == oracle::base_sets(expected));
      // The added set with every old base member not of the form a + {y}.
      std::vector<State> formula{a};
      for (const auto& b : old_base)
        if (!(a.is_subset_of(b) && b.count() == a.count() + 1)) formula.push_back(b);
      CHECK(r.base.sets == sorted(formula));
      CHECK(sequence_family(remove_state(r.space, a).space) == fam);
    }
  }
}
