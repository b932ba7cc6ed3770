#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"
#include "learnspace/sequence_space.hpp"

namespace learnspace {

// ---------------------------------------------------------------------------
// Fibers and upper subfamilies

/// States that contain every concept of `know` and none of `unknow`.
SetFamily fiber(const SequenceSpace& sp, const State& know, const State& unknow);
SetFamily fiber(const HasseDiagram& h, const State& know, const State& unknow);
SetFamily fiber(const SetFamily& family, const State& know, const State& unknow);

/// A family of sets standing for its closure under union.
class GeneratorFamily {
public:
  GeneratorFamily(Domain domain, std::vector<State> sets);  // throws on duplicates
  static GeneratorFamily from_family(const SetFamily& family);

  const Domain& domain() const { return domain_; }
  const std::vector<State>& sets() const { return sets_; }

private:
  Domain domain_;
  std::vector<State> sets_;
};

/// True iff s is the union of the generators it contains.
bool closure_membership(const GeneratorFamily& gen, const State& s);

/// True iff s joined with any nonempty generated set stays generated. Checking
/// against each generator suffices, since safe sets are closed under union.
bool is_safe(const GeneratorFamily& gen, const State& s);

/// Greedy safe ordering of s (concepts tried in index order), or nothing if
/// some prefix cannot be extended.
std::optional<std::vector<ConceptId>> reachable_order(const GeneratorFamily& gen, const State& s);

/// If the generated family is an upper subfamily of some learning space, a
/// sequence representation of one such space, over the concepts the
/// generators cover (in domain order).
std::optional<SequenceSpace> recognize_upper_subfamily(const GeneratorFamily& gen);

/// Pairwise unions of the states of two spaces on the same domain.
SequenceSpace join(const SequenceSpace& a, const SequenceSpace& b);

// ---------------------------------------------------------------------------
// Semilattices

/// A finite commutative idempotent monoid given by its full operation table.
class SemilatticeTable {
public:
  /// Validates the monoid, commutativity and idempotence laws exhaustively.
  SemilatticeTable(std::vector<std::vector<std::size_t>> op, std::size_t identity,
                   std::vector<std::string> names = {});

  /// The union semilattice of a union-closed family containing the empty set.
  static SemilatticeTable from_family(const SetFamily& family);

  std::size_t size() const { return op_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t product(std::size_t x, std::size_t y) const { return op_[x][y]; }
  /// x | y: some z has xz = y, equivalently xy = y.
  bool divides(std::size_t x, std::size_t y) const { return op_[x][y] == y; }
  const std::vector<std::vector<std::size_t>>& table() const { return op_; }
  /// Display name of an object: its given name or its index.
  std::string name(std::size_t x) const;
  bool has_names() const { return !names_.empty(); }

private:
  std::vector<std::vector<std::size_t>> op_;
  std::size_t identity_ = 0;
  std::vector<std::string> names_;
};

/// `.semilattice` text: `objects: m`, `identity: i`, then m rows of m indices.
SemilatticeTable parse_semilattice(std::string_view text);
std::string serialize_semilattice(const SemilatticeTable& t);

struct Singular {
  std::size_t object;
  std::size_t successor;
  bool operator==(const Singular&) const = default;
};

struct ElementClasses {
  std::vector<std::size_t> irreducibles;
  std::vector<std::size_t> primes;
  std::vector<Singular> singulars;
};

/// The identity is never counted as irreducible or prime.
ElementClasses classify_elements(const SemilatticeTable& t);

/// x | y with xa != xb and xa != ya = yb != xb.
struct EqualizingWitness {
  std::size_t x, y, a, b;
};

struct SeparationCheck {
  bool separated = true;
  std::optional<EqualizingWitness> witness;  // first unseparated pair, by (x, y) index
};

SeparationCheck has_separated_equalizers(const SemilatticeTable& t);

struct AntimatroidRepresentation {
  Domain domain;               // one concept per singular object
  std::vector<State> sets;     // N(x) for every object x
  SetFamily family;
  bool injective = false;
  bool union_homomorphism = false;
  bool is_learning_space = false;
  SeparationCheck separation;
};

/// Maps x to N(x), the singular objects that x does not divide.
AntimatroidRepresentation to_antimatroid(const SemilatticeTable& t);

struct QuasiOrdinalRepresentation {
  std::optional<HasseDiagram> diagram;  // on the primes, ordered by divisibility
  std::vector<std::size_t> primes;
  std::vector<State> sets;  // P_x for every object x, when successful
  std::optional<std::size_t> irreducible_not_prime;
};

/// Succeeds iff every irreducible is prime.
QuasiOrdinalRepresentation to_quasi_ordinal(const SemilatticeTable& t);

}  // namespace learnspace
