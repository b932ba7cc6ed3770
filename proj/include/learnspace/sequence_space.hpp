#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"

namespace learnspace {

/// Per-sequence prefix lengths; coordinate i is in [0, n].
using MexVector = std::vector<int>;

/// A learning space given as all unions of prefixes of k learning sequences.
class SequenceSpace {
public:
  SequenceSpace() = default;
  /// Every sequence must be a permutation of the domain. Duplicates are dropped.
  SequenceSpace(Domain domain, std::vector<std::vector<ConceptId>> sequences);

  static SequenceSpace from_labels(Domain domain, const std::vector<std::vector<std::string>>& seqs);
  /// Shorthand for single-character labels, e.g. {"ABC", "CBA"}.
  static SequenceSpace from_strings(const std::vector<std::string>& seqs);

  const Domain& domain() const { return domain_; }
  std::size_t n() const { return domain_.size(); }
  std::size_t k() const { return sequences_.size(); }
  const std::vector<std::vector<ConceptId>>& sequences() const { return sequences_; }
  const std::vector<ConceptId>& sequence(std::size_t i) const { return sequences_[i]; }
  int position(std::size_t i, ConceptId c) const { return positions_[i][static_cast<std::size_t>(c)]; }
  std::size_t dropped_duplicates() const { return dropped_duplicates_; }

private:
  Domain domain_;
  std::vector<std::vector<ConceptId>> sequences_;
  std::vector<std::vector<int>> positions_;
  std::size_t dropped_duplicates_ = 0;
};

MexVector mex(const SequenceSpace& sp, const State& s);
State up(const SequenceSpace& sp, const MexVector& v);
bool contains(const SequenceSpace& sp, const State& s);

/// Decrements the last nonzero coordinate of mex(s) until up() first changes.
State predecessor(const SequenceSpace& sp, const State& s);

struct Successor {
  State state;
  MexVector mex;
  std::size_t branch;
};

/// Exactly the states whose predecessor is `s`, in branch order.
std::vector<Successor> successors(const SequenceSpace& sp, const State& s);

Fringes fringes(const SequenceSpace& sp, const State& s);
SequenceSpace project(const SequenceSpace& sp, const State& keep);
State union_via_mex(const SequenceSpace& sp, const State& s, const State& t);

/// Index of the last sequence needed to express `s` as a union of prefixes.
std::size_t prefix_depth(const SequenceSpace& sp, const State& s, const MexVector& m);

SetFamily sequence_family(const SequenceSpace& sp);

// `.seqs` text format.
SequenceSpace parse_seqs(std::string_view text);
std::string serialize_seqs(const SequenceSpace& sp);

namespace detail {

// Depth-first traversal of the predecessor tree rooted at the empty state.
// Per sequence i the bit vector B_i has bit j set iff sequence i's j-th concept
// is in the current state; mex values are found as first zero bits of B_i.
template <typename Visitor>
class SequenceTraversal {
public:
  SequenceTraversal(const SequenceSpace& sp, Visitor& v)
      : sp_(sp), v_(v), n_(sp.n()), k_(sp.k()), words_((sp.n() + 64) / 64), state_(sp.n()) {
    bits_.assign(k_ * words_, 0);
    mex_.assign((n_ + 1) * k_, 0);
    branches_.resize(n_ + 1);
    seen_.assign(n_, 0);
  }

  TraversalStats run() {
    ++stats_.states;
    if (n_ == 0 || k_ == 0) {
      for (auto& m : mex_) m = static_cast<int>(n_);
    }
    notify_enter(-1, 0, -1);
    descend(0, 0);
    notify_leave(-1, 0, -1);
    return stats_;
  }

private:
  std::span<const int> mex_at(std::size_t depth) const {
    return {mex_.data() + depth * k_, k_};
  }

  void notify_enter(ConceptId added, std::size_t depth, int branch) {
    if constexpr (requires { v_.enter(added, state_, mex_at(depth), branch); })
      v_.enter(added, state_, mex_at(depth), branch);
    else
      v_.enter(added, state_);
  }

  void notify_leave(ConceptId added, std::size_t depth, int branch) {
    if constexpr (requires { v_.leave(added, state_, mex_at(depth), branch); })
      v_.leave(added, state_, mex_at(depth), branch);
    else
      v_.leave(added, state_);
  }

  // First zero bit of B_j at or after position `from`; all bits below `from` are set.
  int first_zero(std::size_t j, int from) {
    const std::uint64_t* b = bits_.data() + j * words_;
    for (std::size_t w = static_cast<std::size_t>(from) >> 6; w < words_; ++w) {
      ++stats_.word_ops;
      // Force the bits below `from` inside this word to one, then x ^ (x + 1)
      // is 2^(z+1) - 1 where z is the first zero.
      std::uint64_t x = b[w];
      if (w == (static_cast<std::size_t>(from) >> 6) && (from & 63))
        x |= (std::uint64_t{1} << (from & 63)) - 1;
      if (x != ~std::uint64_t{0}) {
        const auto z = std::bit_width(x ^ (x + 1)) - 1;
        return std::min(static_cast<int>(w * 64 + static_cast<std::size_t>(z)), static_cast<int>(n_));
      }
    }
    return static_cast<int>(n_);
  }

  void toggle(ConceptId x) {
    state_.flip(x);
    for (std::size_t j = 0; j < k_; ++j) {
      const auto p = static_cast<std::size_t>(sp_.position(j, x));
      bits_[j * words_ + (p >> 6)] ^= std::uint64_t{1} << (p & 63);
    }
    stats_.word_ops += k_;
  }

  void descend(std::size_t depth, std::size_t p) {
    const int* cur = mex_.data() + depth * k_;
    auto& branches = branches_[depth];
    branches.clear();
    ++stamp_;
    for (std::size_t j = 0; j < k_; ++j) {
      if (cur[j] >= static_cast<int>(n_)) continue;
      const ConceptId fe = sp_.sequence(j)[static_cast<std::size_t>(cur[j])];
      if (seen_[static_cast<std::size_t>(fe)] == stamp_) continue;
      seen_[static_cast<std::size_t>(fe)] = stamp_;
      if (j >= p) branches.push_back(j);
    }
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      const std::size_t i = branches_[depth][bi];
      const int* m = mex_.data() + depth * k_;
      int* next = mex_.data() + (depth + 1) * k_;
      const ConceptId x = sp_.sequence(i)[static_cast<std::size_t>(m[i])];
      toggle(x);
      ++stats_.states;
      for (std::size_t j = 0; j < i; ++j) next[j] = m[j];
      for (std::size_t j = i; j < k_; ++j)
        next[j] = (m[j] == sp_.position(j, x)) ? first_zero(j, m[j]) : m[j];
      notify_enter(x, depth + 1, static_cast<int>(i));
      descend(depth + 1, i);
      notify_leave(x, depth + 1, static_cast<int>(i));
      toggle(x);
    }
  }

  const SequenceSpace& sp_;
  Visitor& v_;
  std::size_t n_, k_, words_;
  State state_;
  std::vector<std::uint64_t> bits_;
  std::vector<int> mex_;
  std::vector<std::vector<std::size_t>> branches_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
  TraversalStats stats_;
};

}  // namespace detail

/// Depth-first traversal of all states with enter/leave hooks; the visitor may
/// take (added, state) or (added, state, mex, branch).
template <typename Visitor>
TraversalStats traverse_states(const SequenceSpace& sp, Visitor& visitor) {
  return detail::SequenceTraversal<Visitor>(sp, visitor).run();
}

template <typename F>
std::uint64_t enumerate_states(const SequenceSpace& sp, F&& visit) {
  detail::EnterOnly<std::remove_reference_t<F>> v{visit};
  return traverse_states(sp, v).states;
}

}  // namespace learnspace
