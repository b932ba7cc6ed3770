#include "learnspace/base_dimension.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "learnspace/matching.hpp"

namespace learnspace {

namespace {

std::vector<State> sorted(StateSet s) {
  std::vector<State> out(s.begin(), s.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

void check_chain(const std::vector<State>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!chain[i - 1].is_subset_of(chain[i]))
      throw ValidationError("chain sets are not nested");
}

void sort_by_size(std::vector<State>& chain) {
  std::stable_sort(chain.begin(), chain.end(),
                   [](const State& a, const State& b) { return a.count() < b.count(); });
}

}  // namespace

BaseFamily base_of_family(const SetFamily& family) {
  if (!is_learning_space(family)) throw ValidationError("input family is not a learning space");
  std::vector<State> out;
  for (const auto& s : family) {
    if (s.none()) continue;
    int preds = 0;
    s.for_each([&](ConceptId c) {
      if (preds < 2 && family.contains(s.without(c))) ++preds;
    });
    if (preds == 1) out.push_back(s);
  }
  return {family.domain(), out};
}

BaseFamily base_of_sequences(const SequenceSpace& sp) {
  const auto n = sp.n(), k = sp.k();
  StateSet found;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& seq = sp.sequence(i);
    State s = State::full(n);
    MexVector m(k, static_cast<int>(n));
    // Longest prefix first; removing the last concept x only lowers mex values.
    for (std::size_t len = n; len >= 1; --len) {
      const ConceptId x = seq[len - 1];
      const int pi = sp.position(i, x);
      bool base = true;
      for (std::size_t j = 0; j < k && base; ++j) {
        const int pj = sp.position(j, x);
        if (j != i && pj != pi && pj <= m[j]) base = false;
      }
      if (base) found.insert(s);
      s.reset(x);
      for (std::size_t j = 0; j < k; ++j) m[j] = std::min(m[j], sp.position(j, x));
    }
  }
  return {sp.domain(), sorted(std::move(found))};
}

BaseFamily base_of_hasse(const HasseDiagram& h) {
  const auto order = order_from_hasse(h);
  std::vector<State> out;
  for (std::size_t x = 0; x < h.size(); ++x) out.push_back(order.down_set(static_cast<ConceptId>(x)));
  std::sort(out.begin(), out.end(), canonical_less);
  return {h.domain(), out};
}

ChainCover chain_cover(const std::vector<State>& sets) {
  const auto m = sets.size();
  std::vector<std::vector<int>> adj(m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v)
      if (u != v && sets[u] != sets[v] && sets[u].is_subset_of(sets[v])) adj[u].push_back(static_cast<int>(v));
  const auto match = hopcroft_karp(m, m, adj);
  ChainCover cover;
  cover.matching_size = match.size;
  for (std::size_t u = 0; u < m; ++u) {
    if (match.right_to_left[u] >= 0) continue;  // not the start of a chain
    auto& chain = cover.chains.emplace_back();
    for (int v = static_cast<int>(u); v >= 0; v = match.left_to_right[static_cast<std::size_t>(v)])
      chain.push_back(static_cast<std::size_t>(v));
  }
  return cover;
}

std::vector<ConceptId> extend_chain_to_sequence(const Domain& domain, const MembershipOracle& member,
                                                std::vector<State> chain) {
  const auto n = domain.size();
  sort_by_size(chain);
  check_chain(chain);
  for (const auto& s : chain)
    if (!member(s)) throw ValidationError("chain set is not a state: " + format_state(domain, s));
  chain.push_back(State::full(n));
  if (!member(chain.back())) throw ValidationError("the full domain is not a state");

  // Stage by stage: order the next chain set by peeling off removable concepts
  // (smallest index first), then append the concepts not yet placed.
  std::vector<ConceptId> seq;
  State placed(n);
  std::vector<ConceptId> tau;
  for (const auto& target : chain) {
    tau.clear();
    State cur = target;
    while (!cur.none()) {
      ConceptId drop = -1;
      cur.for_each([&](ConceptId x) {
        if (drop < 0 && member(cur.without(x))) drop = x;
      });
      if (drop < 0) throw ValidationError("state has no predecessor: " + format_state(domain, cur));
      tau.push_back(drop);
      cur.reset(drop);
    }
    for (auto it = tau.rbegin(); it != tau.rend(); ++it) {
      if (placed.test(*it)) continue;
      placed.set(*it);
      seq.push_back(*it);
    }
  }
  return seq;
}

std::vector<ConceptId> extend_chain_to_sequence(const HasseDiagram& h, const std::vector<State>& chain) {
  const auto n = h.size();
  std::vector<State> ch(chain);
  sort_by_size(ch);
  check_chain(ch);
  std::vector<std::size_t> key(n, n + 1);
  for (const auto& s : ch) {
    if (!is_lower_set(h, s)) throw ValidationError("chain set is not a lower set: " + format_state(h.domain(), s));
    s.for_each([&](ConceptId x) { key[x] = std::min(key[x], s.count()); });
  }
  std::vector<ConceptId> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  std::stable_sort(starts.begin(), starts.end(), [&](ConceptId a, ConceptId b) { return key[a] > key[b]; });

  std::vector<char> visited(n, 0);
  std::vector<ConceptId> post;
  post.reserve(n);
  std::vector<std::pair<ConceptId, std::size_t>> stack;
  for (auto root : starts) {
    if (visited[root]) continue;
    visited[root] = 1;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [x, i] = stack.back();
      const auto& succ = h.successors(x);
      if (i < succ.size()) {
        const ConceptId y = succ[i++];
        if (!visited[y]) {
          visited[y] = 1;
          stack.emplace_back(y, 0);
        }
      } else {
        post.push_back(x);
        stack.pop_back();
      }
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

Minimized minimize_from_base(BaseFamily base, const MembershipOracle& member) {
  auto cover = chain_cover(base.sets);
  std::vector<std::vector<ConceptId>> seqs;
  for (const auto& chain : cover.chains) {
    std::vector<State> sets;
    for (auto i : chain) sets.push_back(base.sets[i]);
    seqs.push_back(extend_chain_to_sequence(base.domain, member, std::move(sets)));
  }
  if (seqs.empty() && !base.domain.empty()) throw ValidationError("empty base over a nonempty domain");
  SequenceSpace sp(base.domain, std::move(seqs));
  return {std::move(sp), std::move(base), std::move(cover)};
}

Minimized minimize(const SequenceSpace& sp) {
  return minimize_from_base(base_of_sequences(sp), [&](const State& s) { return contains(sp, s); });
}

Minimized minimize(const HasseDiagram& h) {
  auto base = base_of_hasse(h);
  auto cover = chain_cover(base.sets);
  std::vector<std::vector<ConceptId>> seqs;
  for (const auto& chain : cover.chains) {
    std::vector<State> sets;
    for (auto i : chain) sets.push_back(base.sets[i]);
    seqs.push_back(extend_chain_to_sequence(h, sets));
  }
  SequenceSpace sp(h.domain(), std::move(seqs));
  return {std::move(sp), std::move(base), std::move(cover)};
}

Minimized minimize(const SetFamily& family) {
  if (!family.ground().is_full())
    throw ValidationError("some concepts belong to no state: " +
                          format_state(family.domain(), State::full(family.domain().size()) - family.ground()));
  return minimize_from_base(base_of_family(family), [&](const State& s) { return family.contains(s); });
}

namespace {

DimensionReport report(std::size_t n, const BaseFamily& base) {
  DimensionReport r;
  r.n = n;
  r.dim_b = base.sets.size();
  r.dim_c = chain_cover(base.sets).chains.size();
  r.order_dim_is_2 = r.dim_c == 2;
  return r;
}

}  // namespace

DimensionReport dimensions(const SequenceSpace& sp) { return report(sp.n(), base_of_sequences(sp)); }
DimensionReport dimensions(const HasseDiagram& h) { return report(h.size(), base_of_hasse(h)); }
DimensionReport dimensions(const SetFamily& family) {
  return report(family.domain().size(), base_of_family(family));
}

BasicWords enumerate_basic_words(const Domain& domain, const MembershipOracle& member, std::size_t limit) {
  const auto n = domain.size();
  BasicWords out;
  std::vector<ConceptId> word;
  State cur(n);
  auto rec = [&](auto&& self) -> bool {  // false once the limit is hit
    if (word.size() == n) {
      if (out.words.size() == limit) {
        out.truncated = true;
        return false;
      }
      out.words.push_back(word);
      return true;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const auto x = static_cast<ConceptId>(c);
      if (cur.test(x) || !member(cur.with(x))) continue;
      cur.set(x);
      word.push_back(x);
      const bool go_on = self(self);
      word.pop_back();
      cur.reset(x);
      if (!go_on) return false;
    }
    return true;
  };
  if (member(cur)) rec(rec);
  return out;
}

HierarchyJoin is_join_of_two_hierarchies(const BaseFamily& base) {
  const auto m = base.sets.size();
  std::vector<std::vector<std::size_t>> conflict(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& a = base.sets[i];
      const auto& b = base.sets[j];
      if (a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a)) {
        conflict[i].push_back(j);
        conflict[j].push_back(i);
      }
    }
  HierarchyJoin r;
  r.color.assign(m, -1);
  for (std::size_t s = 0; s < m; ++s) {
    if (r.color[s] >= 0) continue;
    r.color[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : conflict[u]) {
        if (r.color[v] < 0) {
          r.color[v] = 1 - r.color[u];
          q.push(v);
        } else if (r.color[v] == r.color[u]) {
          r.color.clear();
          return r;
        }
      }
    }
  }
  r.is_join = true;
  return r;
}

}  // namespace learnspace
