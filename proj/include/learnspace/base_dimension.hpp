#pragma once

#include <functional>
#include <vector>

#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"
#include "learnspace/sequence_space.hpp"

namespace learnspace {

using MembershipOracle = std::function<bool(const State&)>;

/// The unique base of a learning space: the states with exactly one predecessor.
struct BaseFamily {
  Domain domain;
  std::vector<State> sets;  // canonical order
};

BaseFamily base_of_family(const SetFamily& family);
BaseFamily base_of_sequences(const SequenceSpace& sp);
/// For a quasi-ordinal space the base sets are the principal down-sets {y : y <= x}.
BaseFamily base_of_hasse(const HasseDiagram& h);

/// Minimum chain cover of a family under strict inclusion. Chains hold indices
/// into the input vector, smallest set first.
struct ChainCover {
  std::vector<std::vector<std::size_t>> chains;
  std::size_t matching_size = 0;
};

ChainCover chain_cover(const std::vector<State>& sets);

/// A learning sequence of the space having every chain set as a prefix. Each
/// chain set is ordered by repeatedly removing its smallest removable concept.
std::vector<ConceptId> extend_chain_to_sequence(const Domain& domain, const MembershipOracle& member,
                                                std::vector<State> chain);

/// Same for a quasi-ordinal space, via depth-first search of the diagram in
/// O(m + n) after sorting concepts by their smallest containing chain set.
std::vector<ConceptId> extend_chain_to_sequence(const HasseDiagram& h, const std::vector<State>& chain);

struct Minimized {
  SequenceSpace space;
  BaseFamily base;
  ChainCover cover;
  std::size_t dim_c() const { return cover.chains.size(); }
};

/// Builds a minimum sequence representation from a known base. The membership
/// oracle must accept exactly the unions of base sets.
Minimized minimize_from_base(BaseFamily base, const MembershipOracle& member);

Minimized minimize(const SequenceSpace& sp);
Minimized minimize(const HasseDiagram& h);
Minimized minimize(const SetFamily& family);

struct DimensionReport {
  std::size_t n = 0;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
  bool order_dim_is_2 = false;
};

DimensionReport dimensions(const SequenceSpace& sp);
DimensionReport dimensions(const HasseDiagram& h);
DimensionReport dimensions(const SetFamily& family);

struct BasicWords {
  std::vector<std::vector<ConceptId>> words;
  bool truncated = false;
};

/// Every ordering of the domain whose prefixes are all states, in
/// lexicographic order of concept indices, stopping after `limit` words.
BasicWords enumerate_basic_words(const Domain& domain, const MembershipOracle& member, std::size_t limit);

struct HierarchyJoin {
  bool is_join = false;
  std::vector<int> color;  // per base set, 0 or 1; empty when not bipartite
};

/// Two base sets conflict when they are neither disjoint nor nested; the space
/// is a join of two hierarchies iff that conflict graph is bipartite.
HierarchyJoin is_join_of_two_hierarchies(const BaseFamily& base);

}  // namespace learnspace
