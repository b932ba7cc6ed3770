#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "learnspace/fibers_algebra.hpp"
#include "oracles.hpp"

using namespace learnspace;
using fixtures::st;

namespace {

SetFamily nonempty_closure(const Domain& d, const std::vector<State>& gens) {
  auto all = oracle::union_closure(d, gens);
  std::vector<State> out;
  for (const auto& s : all)
    if (!s.none()) out.push_back(s);
  return SetFamily(d, out);
}

GeneratorFamily generators(const std::string& labels, const std::vector<std::string>& sets) {
  auto d = fixtures::letters(labels);
  std::vector<State> s;
  for (const auto& x : sets) s.push_back(st(d, x));
  return GeneratorFamily(d, s);
}

std::size_t object_named(const SemilatticeTable& t, const std::string& name) {
  for (std::size_t x = 0; x < t.size(); ++x)
    if (t.name(x) == name) return x;
  FAIL("no object named " << name);
  return 0;
}

}  // namespace

TEST_CASE("fiber of the three-concept space") {
  auto sp = fixtures::fig4();
  const auto& d = sp.domain();
  auto f = fiber(sp, st(d, "B"), State(3));
  CHECK(f == fixtures::family("ABC", {"AB", "ABC", "BC"}));
  CHECK_FALSE(is_accessible(f));

  CHECK(fiber(sp, State(3), State(3)) == sequence_family(sp));
  CHECK(fiber(sp, State::full(3), State(3)) == fixtures::family("ABC", {"ABC"}));
  CHECK_THROWS_AS(fiber(sp, st(d, "AB"), st(d, "B")), ValidationError);
}

TEST_CASE("fibers agree across representations and inherit closure and grading") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    auto sp = oracle::random_sequence_space(n, 1 + rng() % 3, rng);
    auto h = oracle::random_hasse(n, 0.3, rng);
    auto fam = sequence_family(sp);
    State k(n), u(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto r = rng() % 4;
      if (r == 0) k.set(static_cast<ConceptId>(c));
      if (r == 1) u.set(static_cast<ConceptId>(c));
    }
    auto fs = fiber(sp, k, u);
    CHECK(fs == fiber(fam, k, u));
    std::vector<State> expect;
    for (const auto& s : fam)
      if (k.is_subset_of(s) && !s.intersects(u)) expect.push_back(s);
    CHECK(fs == SetFamily(sp.domain(), expect));
    CHECK(is_union_closed(fs));
    CHECK(oracle::is_well_graded(fs));

    auto fh = fiber(h, k, u);
    CHECK(is_union_closed(fh));
    CHECK(is_intersection_closed(fh));
    CHECK(oracle::is_well_graded(fh));

    // A nonempty fiber is an upper subfamily of the states lying inside its
    // union, and so is recognized from its own sets.
    if (fs.empty()) continue;
    const auto top = fs.ground();
    std::vector<State> inside;
    for (const auto& s : fam)
      if (s.is_subset_of(top)) inside.push_back(s);
    CHECK(oracle::is_upper_subfamily(fs, SetFamily(sp.domain(), inside)));

    std::vector<State> gens;
    for (const auto& s : fs)
      if (!s.none()) gens.push_back(s);
    if (gens.empty()) continue;
    auto rec = recognize_upper_subfamily(GeneratorFamily(sp.domain(), gens));
    REQUIRE(rec.has_value());
  }
}

TEST_CASE("closure membership") {
  auto g = generators("abc", {"a", "b"});
  CHECK(closure_membership(g, st(g.domain(), "a")));
  CHECK(closure_membership(g, st(g.domain(), "ab")));
  CHECK_FALSE(closure_membership(g, st(g.domain(), "ac")));
  CHECK(closure_membership(g, State(3)));
  CHECK_THROWS_AS(generators("ab", {"a", "a"}), ValidationError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto gens = oracle::random_generators(n, 1 + rng() % 10, rng);
    GeneratorFamily gf(make_domain(n), gens);
    auto closure = oracle::union_closure(gf.domain(), gens);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      auto s = oracle::from_mask(n, m);
      REQUIRE(closure_membership(gf, s) == closure.contains(s));
    }
  }
}

TEST_CASE("safety matches its definition and is closed under union") {
  // With a single generator ab, the prefix a is safe: a joined with ab is ab.
  auto g = generators("ab", {"ab"});
  CHECK(is_safe(g, st(g.domain(), "a")));
  CHECK(is_safe(g, State(2)));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    auto gens = oracle::random_generators(n, 1 + rng() % 6, rng);
    GeneratorFamily gf(make_domain(n), gens);
    auto f = nonempty_closure(gf.domain(), gens);
    std::vector<State> safe;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      auto s = oracle::from_mask(n, m);
      bool expect = std::all_of(f.begin(), f.end(), [&](const State& t) { return f.contains(s | t); });
      REQUIRE(is_safe(gf, s) == expect);
      if (expect) safe.push_back(s);
    }
    for (const auto& a : safe)
      for (const auto& b : safe) CHECK(is_safe(gf, a | b));
  }
}

TEST_CASE("upper subfamily recognition on small examples") {
  auto g9 = generators("abcde", fixtures::fig9_generators());
  CHECK(oracle::is_well_graded(nonempty_closure(g9.domain(), g9.sets())));
  CHECK_FALSE(recognize_upper_subfamily(g9).has_value());

  auto single = generators("ABCD", {"A", "B", "C", "D"});
  auto ps = recognize_upper_subfamily(single);
  REQUIRE(ps.has_value());
  CHECK(sequence_family(*ps) == powerset(ps->domain()));

  auto pairs = generators("ABC", {"AB", "AC", "BC"});
  auto l = recognize_upper_subfamily(pairs);
  REQUIRE(l.has_value());
  auto lf = sequence_family(*l);
  CHECK(is_learning_space(lf));
  CHECK(oracle::is_upper_subfamily(nonempty_closure(pairs.domain(), pairs.sets()), lf));

  // Concepts outside every generator are dropped from the result.
  auto partial = generators("ABCD", {"B", "BD"});
  auto lp = recognize_upper_subfamily(partial);
  REQUIRE(lp.has_value());
  CHECK(lp->domain() == fixtures::letters("BD"));
}

TEST_CASE("upper subfamily recognition matches exhaustive search over learning spaces") {
  std::mt19937_64 rng(21);
  std::size_t recognized = 0, rejected = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto spaces = oracle::all_learning_spaces(n);
    const auto d = make_domain(n);
    for (int trial = 0; trial < (n <= 2 ? 40 : 250); ++trial) {
      auto gens = oracle::random_generators(n, 1 + rng() % 5, rng);
      State ground(n);
      for (const auto& s : gens) ground |= s;
      if (!ground.is_full()) continue;
      GeneratorFamily gf(d, gens);
      auto f = nonempty_closure(d, gens);
      const bool exists = std::any_of(spaces.begin(), spaces.end(),
                                      [&](const SetFamily& l) { return oracle::is_upper_subfamily(f, l); });
      auto got = recognize_upper_subfamily(gf);
      REQUIRE(got.has_value() == exists);
      if (got) {
        ++recognized;
        CHECK(oracle::is_upper_subfamily(f, sequence_family(*got)));
      } else {
        ++rejected;
      }
    }
  }
  CHECK(recognized > 20);
  CHECK(rejected > 20);
}

TEST_CASE("join of sequence spaces") {
  auto abc = SequenceSpace::from_strings({"ABC"});
  auto cba = SequenceSpace::from_strings({"CBA"});
  CHECK(sequence_family(join(abc, cba)) == fixtures::fig4_family());
  CHECK(sequence_family(join(abc, abc)) == sequence_family(abc));
  CHECK_THROWS_AS(join(abc, SequenceSpace::from_strings({"AB"})), ValidationError);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto a = oracle::random_sequence_space(n, 1 + rng() % 2, rng);
    auto b = oracle::random_sequence_space(n, 1 + rng() % 2, rng);
    auto c = oracle::random_sequence_space(n, 1, rng);
    auto fa = sequence_family(a), fb = sequence_family(b);
    std::vector<State> pairwise;
    for (const auto& s : fa)
      for (const auto& t : fb) pairwise.push_back(s | t);
    auto ab = sequence_family(join(a, b));
    CHECK(ab == SetFamily(a.domain(), pairwise));
    CHECK(ab == sequence_family(join(b, a)));
    CHECK(sequence_family(join(join(a, b), c)) == sequence_family(join(a, join(b, c))));
    CHECK(sequence_family(join(a, a)) == fa);
  }
}

TEST_CASE("semilattice tables validate their laws") {
  CHECK_NOTHROW(SemilatticeTable({{0, 1}, {1, 1}}, 0));
  CHECK_THROWS_AS(SemilatticeTable({}, 0), ValidationError);
  CHECK_THROWS_AS(SemilatticeTable({{0, 1}, {1, 1}}, 1), ValidationError);        // identity law
  CHECK_THROWS_AS(SemilatticeTable({{0, 1}, {0, 1}}, 0), ValidationError);        // not commutative
  CHECK_THROWS_AS(SemilatticeTable({{0, 1}, {1, 0}}, 0), ValidationError);        // not idempotent
  CHECK_THROWS_AS(SemilatticeTable({{0, 1}, {1}}, 0), ValidationError);           // ragged
  CHECK_THROWS_AS(SemilatticeTable({{0, 2}, {2, 1}}, 0), ValidationError);        // out of range
  // Commutative, idempotent, with identity, but 1(23) = 1 while (12)3 = 3.
  CHECK_THROWS_AS(SemilatticeTable({{0, 1, 2, 3}, {1, 1, 3, 1}, {2, 3, 2, 3}, {3, 1, 3, 3}}, 0),
                  ValidationError);

  CHECK_THROWS_AS(SemilatticeTable::from_family(fixtures::family("AB", {"A", "AB"})), ValidationError);
  CHECK_THROWS_AS(SemilatticeTable::from_family(fixtures::family("AB", {"", "A", "B"})), ValidationError);
}

TEST_CASE("semilattice text format") {
  auto t = SemilatticeTable::from_family(fixtures::fig10_left());
  auto text = serialize_semilattice(t);
  auto back = parse_semilattice(text);
  CHECK(back.table() == t.table());
  CHECK(back.identity() == t.identity());

  auto parsed = parse_semilattice("# two objects\nobjects: 2\nidentity: 0\n0 1\n1 1\n");
  CHECK(parsed.size() == 2);
  CHECK(parsed.product(0, 1) == 1);

  auto line_of = [](const std::string& text) {
    try {
      parse_semilattice(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("objects 2\n") == 1);
  CHECK(line_of("objects: 2\nidentity: x\n") == 2);
  CHECK(line_of("objects: 2\nidentity: 0\n0 1\n1\n") == 4);
  CHECK(line_of("objects: 2\nidentity: 0\n0 1\n1 z\n") == 4);
  CHECK(line_of("objects: 2\nidentity: 0\n0 1\n") == 3);
  CHECK_THROWS_AS(parse_semilattice("objects: 2\nidentity: 0\n0 0\n0 1\n"), ValidationError);
}

TEST_CASE("classification on the boolean semilattice of a 2-set") {
  auto t = SemilatticeTable::from_family(powerset(fixtures::letters("ab")));
  auto c = classify_elements(t);
  const std::vector<std::size_t> singles{object_named(t, "a"), object_named(t, "b")};
  auto sorted_singles = singles;
  std::sort(sorted_singles.begin(), sorted_singles.end());
  CHECK(c.irreducibles == sorted_singles);
  CHECK(c.primes == sorted_singles);
  // The singular objects are the coatoms, each with the top as successor.
  const auto top = object_named(t, "a,b");
  REQUIRE(c.singulars.size() == 2);
  for (const auto& s : c.singulars) CHECK(s.successor == top);
}

TEST_CASE("classification properties on random tables") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = oracle::random_table(12, rng);
    auto c = classify_elements(t);
    for (auto p : c.primes) CHECK(std::binary_search(c.irreducibles.begin(), c.irreducibles.end(), p));
    for (std::size_t x = 0; x < t.size(); ++x) {
      std::size_t prod = t.identity();
      for (auto i : c.irreducibles)
        if (t.divides(i, x)) prod = t.product(prod, i);
      CHECK(prod == x);
    }
    // Each irreducible has exactly one object directly below it.
    for (auto p : c.irreducibles) {
      std::size_t below = 0;
      for (std::size_t q = 0; q < t.size(); ++q) {
        if (q == p || !t.divides(q, p)) continue;
        bool covered = true;
        for (std::size_t z = 0; z < t.size(); ++z)
          if (z != p && z != q && t.divides(q, z) && t.divides(z, p)) covered = false;
        below += covered;
      }
      CHECK(below == 1);
    }
  }
}

TEST_CASE("separated equalizers on the two non-antimatroid semilattices") {
  for (const auto& f : {fixtures::fig10_left(), fixtures::fig10_right()}) {
    auto t = SemilatticeTable::from_family(f);
    auto r = has_separated_equalizers(t);
    REQUIRE_FALSE(r.separated);
    REQUIRE(r.witness.has_value());
    CHECK(t.name(r.witness->x) == "{}");
    CHECK(t.name(r.witness->y) == "a,b");
    const auto& w = *r.witness;
    CHECK(t.product(w.x, w.a) != t.product(w.x, w.b));
    CHECK(t.product(w.y, w.a) == t.product(w.y, w.b));
  }
  auto left = SemilatticeTable::from_family(fixtures::fig10_left());
  auto rep = to_antimatroid(left);
  CHECK(rep.injective);
  CHECK(rep.union_homomorphism);
  CHECK_FALSE(rep.is_learning_space);
  CHECK_FALSE(is_accessible(rep.family));
}

TEST_CASE("antimatroid representation") {
  auto t = SemilatticeTable::from_family(fixtures::fig4_family());
  auto rep = to_antimatroid(t);
  CHECK(rep.separation.separated);
  CHECK(rep.injective);
  CHECK(rep.union_homomorphism);
  CHECK(rep.is_learning_space);
  CHECK(rep.family.size() == 7);

  auto one = to_antimatroid(SemilatticeTable({{0}}, 0));
  CHECK(one.family.size() == 1);
  CHECK(one.family.states()[0].none());
  CHECK(one.is_learning_space);

  std::mt19937_64 rng(29);
  std::size_t antimatroids = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    auto sp = oracle::random_sequence_space(n, 1 + rng() % 3, rng);
    auto st_table = SemilatticeTable::from_family(sequence_family(sp));
    auto r = to_antimatroid(st_table);
    CHECK(r.separation.separated);
    CHECK(r.injective);
    CHECK(r.union_homomorphism);
    CHECK(r.is_learning_space);
    antimatroids += r.is_learning_space;
  }
  CHECK(antimatroids == 120);

  for (int trial = 0; trial < 200; ++trial) {
    auto table = oracle::random_table(12, rng);
    auto r = to_antimatroid(table);
    CHECK(r.injective);
    CHECK(r.union_homomorphism);
    CHECK(r.is_learning_space == r.separation.separated);
  }
}

TEST_CASE("quasi-ordinal representation") {
  auto boolean = SemilatticeTable::from_family(powerset(fixtures::letters("abc")));
  auto b = to_quasi_ordinal(boolean);
  REQUIRE(b.diagram.has_value());
  CHECK(b.diagram->size() == 3);
  CHECK(b.diagram->edges().empty());

  auto fig4 = to_quasi_ordinal(SemilatticeTable::from_family(fixtures::fig4_family()));
  CHECK_FALSE(fig4.diagram.has_value());
  REQUIRE(fig4.irreducible_not_prime.has_value());

  // Chain 0 < 1 < 2 < 3 < 4 under max.
  std::vector<std::vector<std::size_t>> op(5, std::vector<std::size_t>(5));
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) op[x][y] = std::max(x, y);
  auto chain = to_quasi_ordinal(SemilatticeTable(op, 0));
  REQUIRE(chain.diagram.has_value());
  CHECK(chain.diagram->size() == 4);
  CHECK(chain.diagram->edges().size() == 3);
  CHECK(chain.diagram->max_out_degree() == 1);

  std::mt19937_64 rng(31);
  std::size_t ok = 0, failed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto t = oracle::random_table(12, rng);
    auto r = to_quasi_ordinal(t);
    CHECK(r.diagram.has_value() == oracle::is_distributive(t));
    if (!r.diagram) {
      ++failed;
      continue;
    }
    ++ok;
    auto lower = lower_set_family(*r.diagram);
    CHECK(lower.size() == t.size());
    for (std::size_t x = 0; x < t.size(); ++x) {
      CHECK(lower.contains(r.sets[x]));
      for (std::size_t y = 0; y < t.size(); ++y) CHECK(r.sets[t.product(x, y)] == (r.sets[x] | r.sets[y]));
    }
  }
  CHECK(ok > 20);
  CHECK(failed > 20);
}
