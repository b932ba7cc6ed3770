#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "learnspace/core.hpp"

namespace learnspace {

using Edge = std::pair<ConceptId, ConceptId>;

/// Strict partial order over a domain, stored as up/down bit rows.
class PartialOrder {
public:
  PartialOrder() = default;
  /// `relation` must already be irreflexive and transitive.
  PartialOrder(Domain domain, const std::vector<Edge>& relation);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }
  bool less(ConceptId x, ConceptId y) const { return above_[x].test(y); }
  const State& above(ConceptId x) const { return above_[x]; }  // {y : x < y}
  const State& below(ConceptId y) const { return below_[y]; }  // {x : x < y}

  /// The lower set {y : y <= x}.
  State down_set(ConceptId x) const { return below_[x].with(x); }

private:
  Domain domain_;
  std::vector<State> above_;
  std::vector<State> below_;
};

/// Covering relation of a partial order. Rejects cycles, self-loops and
/// transitive edges at construction.
class HasseDiagram {
public:
  HasseDiagram() = default;
  HasseDiagram(Domain domain, std::vector<Edge> edges);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<ConceptId>& successors(ConceptId x) const { return out_[x]; }
  const std::vector<ConceptId>& prerequisites(ConceptId y) const { return in_[y]; }
  std::size_t max_out_degree() const;

private:
  Domain domain_;
  std::vector<Edge> edges_;
  std::vector<std::vector<ConceptId>> out_;
  std::vector<std::vector<ConceptId>> in_;
};

/// Hasse diagram of the transitive closure of an arbitrary DAG.
HasseDiagram transitive_reduction(const Domain& domain, const std::vector<Edge>& dag_edges);
HasseDiagram hasse_from_order(const PartialOrder& order);

PartialOrder order_from_hasse(const HasseDiagram& h);
bool is_lower_set(const HasseDiagram& h, const State& s);

/// Concepts sorted by longest incoming path length, ties by domain index.
std::vector<ConceptId> topological_order(const HasseDiagram& h);

Fringes fringe_qos(const HasseDiagram& h, const State& s);
HasseDiagram restrict(const HasseDiagram& h, const State& keep);

/// |Δ(x,y)| - 1, where Δ collects x, y and every concept compared differently to them.
int concept_distance(const PartialOrder& o, ConceptId x, ConceptId y);

// `.hasse` text format.
HasseDiagram parse_hasse(std::string_view text);
std::string serialize_hasse(const HasseDiagram& h);

struct TraversalStats {
  std::uint64_t states = 0;
  std::uint64_t edge_visits = 0;  // lower-set traversal: Hasse edges touched
  std::uint64_t word_ops = 0;     // sequence traversal: bit-vector word operations
};

namespace detail {

// Reverse-search traversal of the predecessor tree of lower sets, where the
// predecessor removes the concept latest in topological order. Scratch state is
// owned by the traversal, so concurrent traversals of one diagram are fine.
template <typename Visitor>
class LowerSetTraversal {
public:
  LowerSetTraversal(const HasseDiagram& h, Visitor& v) : h_(h), v_(v), state_(h.size()) {
    const auto order = topological_order(h);
    rank_.resize(h.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank_[order[i]] = static_cast<int>(i);
    missing_.resize(h.size());
    for (std::size_t y = 0; y < h.size(); ++y)
      missing_[y] = static_cast<int>(h.prerequisites(static_cast<ConceptId>(y)).size());
    levels_.resize(h.size() + 1);
  }

  TraversalStats run() {
    auto& root = levels_[0];
    root.clear();
    for (std::size_t y = 0; y < h_.size(); ++y)
      if (missing_[y] == 0) root.push_back(static_cast<ConceptId>(y));
    std::sort(root.begin(), root.end(), [&](auto a, auto b) { return rank_[a] < rank_[b]; });
    ++stats_.states;
    v_.enter(-1, state_);
    descend(0);
    v_.leave(-1, state_);
    return stats_;
  }

private:
  void descend(std::size_t depth) {
    // levels_[depth] holds children(S) in topological order; it is stable while
    // we iterate since deeper levels use their own buffers.
    const auto& children = levels_[depth];
    for (std::size_t i = 0; i < children.size(); ++i) {
      const ConceptId x = children[i];
      state_.set(x);
      ++stats_.states;
      auto& next = levels_[depth + 1];
      next.assign(children.begin() + static_cast<std::ptrdiff_t>(i) + 1, children.end());
      const auto before = next.size();
      for (ConceptId y : h_.successors(x)) {
        ++stats_.edge_visits;
        if (--missing_[y] == 0) next.push_back(y);
      }
      if (next.size() != before) {
        std::sort(next.begin(), next.end(), [&](auto a, auto b) { return rank_[a] < rank_[b]; });
      }
      v_.enter(x, state_);
      descend(depth + 1);
      v_.leave(x, state_);
      for (ConceptId y : h_.successors(x)) {
        ++stats_.edge_visits;
        ++missing_[y];
      }
      state_.reset(x);
    }
  }

  const HasseDiagram& h_;
  Visitor& v_;
  State state_;
  std::vector<int> rank_;
  std::vector<int> missing_;
  std::vector<std::vector<ConceptId>> levels_;
  TraversalStats stats_;
};

template <typename F>
struct EnterOnly {
  F& f;
  void enter(ConceptId, const State& s) { f(s); }
  void leave(ConceptId, const State&) {}
};

}  // namespace detail

/// Depth-first traversal with enter/leave hooks. `added` is -1 at the root.
template <typename Visitor>
TraversalStats traverse_lower_sets(const HasseDiagram& h, Visitor& visitor) {
  return detail::LowerSetTraversal<Visitor>(h, visitor).run();
}

/// Visits every lower set exactly once, parent before child. Returns the count.
template <typename F>
std::uint64_t enumerate_lower_sets(const HasseDiagram& h, F&& visit) {
  detail::EnterOnly<std::remove_reference_t<F>> v{visit};
  return traverse_lower_sets(h, v).states;
}

SetFamily lower_set_family(const HasseDiagram& h);

}  // namespace learnspace
