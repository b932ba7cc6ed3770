#include "learnspace/fibers_algebra.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "learnspace/base_dimension.hpp"
#include "text_lines.hpp"

namespace learnspace {

namespace {

void check_fiber_args(std::size_t n, const State& know, const State& unknow) {
  if (know.universe() != n || unknow.universe() != n)
    throw ValidationError("fiber sets are over a domain of different size");
  if (know.intersects(unknow)) throw ValidationError("known and unknown sets overlap");
}

template <typename Enumerate>
SetFamily filtered(const Domain& d, const State& know, const State& unknow, Enumerate&& each) {
  check_fiber_args(d.size(), know, unknow);
  std::vector<State> out;
  each([&](const State& s) {
    if (know.is_subset_of(s) && !s.intersects(unknow)) out.push_back(s);
  });
  return SetFamily(d, std::move(out));
}

}  // namespace

SetFamily fiber(const SequenceSpace& sp, const State& know, const State& unknow) {
  return filtered(sp.domain(), know, unknow, [&](auto&& f) { enumerate_states(sp, f); });
}

SetFamily fiber(const HasseDiagram& h, const State& know, const State& unknow) {
  return filtered(h.domain(), know, unknow, [&](auto&& f) { enumerate_lower_sets(h, f); });
}

SetFamily fiber(const SetFamily& family, const State& know, const State& unknow) {
  return filtered(family.domain(), know, unknow, [&](auto&& f) {
    for (const auto& s : family) f(s);
  });
}

GeneratorFamily::GeneratorFamily(Domain domain, std::vector<State> sets)
    : domain_(std::move(domain)), sets_(std::move(sets)) {
  StateSet seen;
  for (const auto& s : sets_) {
    if (s.universe() != domain_.size()) throw ValidationError("generator over a domain of different size");
    if (!seen.insert(s).second) throw ValidationError("duplicate generator " + format_state(domain_, s));
  }
}

GeneratorFamily GeneratorFamily::from_family(const SetFamily& family) {
  return GeneratorFamily(family.domain(), family.states());
}

bool closure_membership(const GeneratorFamily& gen, const State& s) {
  State cover(s.universe());
  for (const auto& t : gen.sets())
    if (t.is_subset_of(s)) cover |= t;
  return cover == s;
}

bool is_safe(const GeneratorFamily& gen, const State& s) {
  for (const auto& t : gen.sets())
    if (!t.none() && !closure_membership(gen, s | t)) return false;
  return true;
}

std::optional<std::vector<ConceptId>> reachable_order(const GeneratorFamily& gen, const State& s) {
  std::vector<ConceptId> order;
  State cur(s.universe());
  while (cur != s) {
    ConceptId next = -1;
    (s - cur).for_each([&](ConceptId x) {
      if (next < 0 && is_safe(gen, cur.with(x))) next = x;
    });
    if (next < 0) return std::nullopt;
    cur.set(next);
    order.push_back(next);
  }
  return order;
}

std::optional<SequenceSpace> recognize_upper_subfamily(const GeneratorFamily& gen) {
  const auto n = gen.domain().size();
  State ground(n);
  for (const auto& s : gen.sets()) ground |= s;

  const auto kept = ground.elements();
  std::vector<int> local(n, -1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    local[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
    labels.push_back(gen.domain().label(kept[i]));
  }
  Domain sub(std::move(labels));
  const auto m = kept.size();
  if (m == 0) return SequenceSpace(sub, {});

  // The space is generated by all prefixes of the greedy orders.
  StateSet seen;
  std::vector<State> prefixes;
  for (const auto& s : gen.sets()) {
    if (s.none()) continue;
    auto order = reachable_order(gen, s);
    if (!order) return std::nullopt;
    State p(m);
    for (auto x : *order) {
      p.set(local[static_cast<std::size_t>(x)]);
      if (seen.insert(p).second) prefixes.push_back(p);
    }
  }
  GeneratorFamily space_gen(sub, prefixes);
  const MembershipOracle member = [&](const State& s) { return closure_membership(space_gen, s); };

  std::vector<State> base;
  for (const auto& p : prefixes) {
    int preds = 0;
    p.for_each([&](ConceptId x) {
      if (preds < 2 && member(p.without(x))) ++preds;
    });
    if (preds == 1) base.push_back(p);
  }
  std::sort(base.begin(), base.end(), canonical_less);
  return minimize_from_base(BaseFamily{sub, std::move(base)}, member).space;
}

SequenceSpace join(const SequenceSpace& a, const SequenceSpace& b) {
  if (!(a.domain() == b.domain())) throw ValidationError("cannot join spaces over different domains");
  auto seqs = a.sequences();
  seqs.insert(seqs.end(), b.sequences().begin(), b.sequences().end());
  return SequenceSpace(a.domain(), std::move(seqs));
}

// ---------------------------------------------------------------------------

SemilatticeTable::SemilatticeTable(std::vector<std::vector<std::size_t>> op, std::size_t identity,
                                   std::vector<std::string> names)
    : op_(std::move(op)), identity_(identity), names_(std::move(names)) {
  const auto m = op_.size();
  if (m == 0) throw ValidationError("a semilattice needs at least one object");
  if (identity_ >= m) throw ValidationError("identity index out of range");
  if (!names_.empty() && names_.size() != m) throw ValidationError("one name per object is required");
  for (const auto& row : op_) {
    if (row.size() != m) throw ValidationError("operation table is not square");
    for (auto v : row)
      if (v >= m) throw ValidationError("operation table entry out of range");
  }
  auto law = [](const std::string& what, std::size_t x, std::size_t y) {
    return ValidationError(what + " fails at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  };
  for (std::size_t x = 0; x < m; ++x) {
    if (op_[x][x] != x) throw law("idempotence", x, x);
    if (op_[identity_][x] != x) throw law("identity", identity_, x);
    for (std::size_t y = 0; y < m; ++y) {
      if (op_[x][y] != op_[y][x]) throw law("commutativity", x, y);
      for (std::size_t z = 0; z < m; ++z)
        if (op_[op_[x][y]][z] != op_[x][op_[y][z]])
          throw ValidationError("associativity fails at (" + std::to_string(x) + ", " + std::to_string(y) +
                                ", " + std::to_string(z) + ")");
    }
  }
}

SemilatticeTable SemilatticeTable::from_family(const SetFamily& family) {
  const auto& states = family.states();
  const auto m = states.size();
  std::unordered_map<State, std::size_t, StateHash> index;
  for (std::size_t i = 0; i < m; ++i) index.emplace(states[i], i);
  auto e = index.find(State(family.domain().size()));
  if (e == index.end()) throw ValidationError("family does not contain the empty set");
  std::vector<std::vector<std::size_t>> op(m, std::vector<std::size_t>(m));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) {
    names.push_back(format_state(family.domain(), states[i]));
    for (std::size_t j = 0; j < m; ++j) {
      auto it = index.find(states[i] | states[j]);
      if (it == index.end()) throw ValidationError("family is not closed under union");
      op[i][j] = it->second;
    }
  }
  return SemilatticeTable(std::move(op), e->second, std::move(names));
}

std::string SemilatticeTable::name(std::size_t x) const {
  return names_.empty() ? std::to_string(x) : names_[x];
}

SemilatticeTable parse_semilattice(std::string_view text) {
  detail::LineReader r(text);
  auto header_value = [&](std::string_view key) -> std::size_t {
    auto line = r.next();
    if (!line || line->rfind(key, 0) != 0) throw ParseError("expected '" + std::string(key) + " N' header", r.line_no);
    auto v = trim(std::string_view(*line).substr(key.size()));
    try {
      std::size_t used = 0;
      const auto n = std::stoull(std::string(v), &used);
      if (used != v.size()) throw std::invalid_argument("trailing text");
      return n;
    } catch (const std::exception&) {
      throw ParseError("bad number in '" + std::string(key) + "' header", r.line_no);
    }
  };
  const auto m = header_value("objects:");
  const auto identity = header_value("identity:");
  std::vector<std::vector<std::size_t>> op;
  while (auto line = r.next()) {
    std::istringstream row(*line);
    std::vector<std::size_t> entries;
    std::string tok;
    while (row >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("non-numeric table entry '" + tok + "'", r.line_no);
      entries.push_back(std::stoull(tok));
    }
    if (entries.size() != m)
      throw ParseError("expected " + std::to_string(m) + " entries, got " + std::to_string(entries.size()), r.line_no);
    op.push_back(std::move(entries));
  }
  if (op.size() != m)
    throw ParseError("expected " + std::to_string(m) + " rows, got " + std::to_string(op.size()), r.line_no);
  return SemilatticeTable(std::move(op), identity);
}

std::string serialize_semilattice(const SemilatticeTable& t) {
  std::string out = "objects: " + std::to_string(t.size()) + "\nidentity: " + std::to_string(t.identity()) + "\n";
  for (const auto& row : t.table()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(row[j]);
    }
    out += '\n';
  }
  return out;
}

ElementClasses classify_elements(const SemilatticeTable& t) {
  const auto m = t.size();
  ElementClasses c;
  for (std::size_t x = 0; x < m; ++x) {
    if (x == t.identity()) continue;
    bool irreducible = true, prime = true;
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t z = 0; z < m; ++z) {
        const auto yz = t.product(y, z);
        if (yz == x && y != x && z != x) irreducible = false;
        if (t.divides(x, yz) && !t.divides(x, y) && !t.divides(x, z)) prime = false;
      }
    if (irreducible) c.irreducibles.push_back(x);
    if (prime) c.primes.push_back(x);
  }
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<std::size_t> above;
    for (std::size_t x = 0; x < m; ++x)
      if (x != s && t.divides(s, x)) above.push_back(x);
    for (auto cand : above) {
      if (std::all_of(above.begin(), above.end(), [&](std::size_t x) { return t.divides(cand, x); })) {
        c.singulars.push_back({s, cand});
        break;
      }
    }
  }
  return c;
}

SeparationCheck has_separated_equalizers(const SemilatticeTable& t) {
  const auto m = t.size();
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      if (x == y || !t.divides(x, y)) continue;
      bool between = false;
      for (std::size_t z = 0; z < m && !between; ++z)
        between = z != x && z != y && t.divides(x, z) && t.divides(z, y);
      if (between) continue;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const auto xa = t.product(x, a), xb = t.product(x, b), ya = t.product(y, a), yb = t.product(y, b);
          if (xa != xb && xa != ya && ya == yb && yb != xb) return {false, EqualizingWitness{x, y, a, b}};
        }
    }
  return {};
}

AntimatroidRepresentation to_antimatroid(const SemilatticeTable& t) {
  const auto m = t.size();
  const auto singulars = classify_elements(t).singulars;
  std::vector<std::string> labels;
  for (const auto& s : singulars) labels.push_back("s" + std::to_string(s.object));

  AntimatroidRepresentation r;
  r.domain = Domain(std::move(labels));
  for (std::size_t x = 0; x < m; ++x) {
    State n(singulars.size());
    for (std::size_t i = 0; i < singulars.size(); ++i)
      if (!t.divides(x, singulars[i].object)) n.set(static_cast<ConceptId>(i));
    r.sets.push_back(std::move(n));
  }
  r.family = SetFamily(r.domain, r.sets);
  r.injective = r.family.size() == m;
  r.union_homomorphism = true;
  for (std::size_t x = 0; x < m && r.union_homomorphism; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (r.sets[t.product(x, y)] != (r.sets[x] | r.sets[y])) {
        r.union_homomorphism = false;
        break;
      }
  r.is_learning_space = is_learning_space(r.family);
  r.separation = has_separated_equalizers(t);
  return r;
}

QuasiOrdinalRepresentation to_quasi_ordinal(const SemilatticeTable& t) {
  auto c = classify_elements(t);
  QuasiOrdinalRepresentation r;
  r.primes = c.primes;
  if (c.irreducibles != c.primes) {
    std::vector<std::size_t> diff;
    std::set_difference(c.irreducibles.begin(), c.irreducibles.end(), c.primes.begin(), c.primes.end(),
                        std::back_inserter(diff));
    if (!diff.empty()) r.irreducible_not_prime = diff.front();
    return r;
  }
  const auto k = r.primes.size();
  std::vector<std::string> labels;
  for (auto p : r.primes) labels.push_back("p" + std::to_string(p));
  Domain d(std::move(labels));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && t.divides(r.primes[i], r.primes[j]))
        edges.emplace_back(static_cast<ConceptId>(i), static_cast<ConceptId>(j));
  r.diagram = transitive_reduction(d, edges);
  for (std::size_t x = 0; x < t.size(); ++x) {
    State p(k);
    for (std::size_t i = 0; i < k; ++i)
      if (t.divides(r.primes[i], x)) p.set(static_cast<ConceptId>(i));
    r.sets.push_back(std::move(p));
  }
  return r;
}

}  // namespace learnspace
