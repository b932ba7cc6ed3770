#include "learnspace/quasi_ordinal.hpp"

#include <queue>
#include <set>

#include "text_lines.hpp"

namespace learnspace {

namespace {

void check_endpoints(const Domain& d, const std::vector<Edge>& edges) {
  for (auto [x, y] : edges) {
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= d.size() ||
        static_cast<std::size_t>(y) >= d.size())
      throw ValidationError("edge endpoint outside the domain");
    if (x == y) throw StructuralError("self-loop on '" + d.label(x) + "'");
  }
}

// Kahn's algorithm; throws on a cycle.
std::vector<ConceptId> kahn_order(std::size_t n, const std::vector<std::vector<ConceptId>>& out) {
  std::vector<int> indeg(n, 0);
  for (const auto& succ : out)
    for (auto y : succ) ++indeg[y];
  std::queue<ConceptId> q;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push(static_cast<ConceptId>(i));
  std::vector<ConceptId> order;
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    order.push_back(x);
    for (auto y : out[x])
      if (--indeg[y] == 0) q.push(y);
  }
  if (order.size() != n) throw StructuralError("cycle detected in prerequisite graph");
  return order;
}

// Strict reachability rows: reach[x] = {y : directed path x ~> y of length >= 1}.
std::vector<State> reachability(std::size_t n, const std::vector<std::vector<ConceptId>>& out) {
  auto order = kahn_order(n, out);
  std::vector<State> reach(n, State(n));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (auto y : out[*it]) {
      reach[*it].set(y);
      reach[*it] |= reach[y];
    }
  }
  return reach;
}

std::vector<std::vector<ConceptId>> adjacency(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<ConceptId>> out(n);
  for (auto [x, y] : edges) out[x].push_back(y);
  return out;
}

}  // namespace

PartialOrder::PartialOrder(Domain domain, const std::vector<Edge>& relation)
    : domain_(std::move(domain)) {
  const auto n = domain_.size();
  check_endpoints(domain_, relation);
  above_.assign(n, State(n));
  below_.assign(n, State(n));
  for (auto [x, y] : relation) {
    above_[x].set(y);
    below_[y].set(x);
  }
  for (std::size_t x = 0; x < n; ++x) {
    above_[x].for_each([&](ConceptId y) {
      if (!above_[y].is_subset_of(above_[x]))
        throw StructuralError("relation is not transitive");
      if (above_[y].test(static_cast<ConceptId>(x)))
        throw StructuralError("relation is not antisymmetric");
    });
  }
}

HasseDiagram::HasseDiagram(Domain domain, std::vector<Edge> edges)
    : domain_(std::move(domain)), edges_(std::move(edges)) {
  const auto n = domain_.size();
  check_endpoints(domain_, edges_);
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw StructuralError("duplicate edge");
  out_ = adjacency(n, edges_);
  in_.assign(n, {});
  for (auto [x, y] : edges_) in_[y].push_back(x);
  const auto reach = reachability(n, out_);
  for (auto [x, y] : edges_) {
    for (auto z : out_[x]) {
      if (z != y && reach[z].test(y))
        throw StructuralError("transitive edge " + domain_.label(x) + " -> " + domain_.label(y) +
                              " (implied via " + domain_.label(z) + ")");
    }
  }
}

std::size_t HasseDiagram::max_out_degree() const {
  std::size_t m = 0;
  for (const auto& o : out_) m = std::max(m, o.size());
  return m;
}

HasseDiagram transitive_reduction(const Domain& domain, const std::vector<Edge>& dag_edges) {
  check_endpoints(domain, dag_edges);
  const auto n = domain.size();
  const auto reach = reachability(n, adjacency(n, dag_edges));
  std::vector<Edge> covers;
  for (std::size_t x = 0; x < n; ++x) {
    reach[x].for_each([&](ConceptId y) {
      // x -> y is a cover iff no z with x < z < y.
      bool covered = true;
      reach[x].for_each([&](ConceptId z) {
        if (covered && reach[z].test(y)) covered = false;
      });
      if (covered) covers.emplace_back(static_cast<ConceptId>(x), y);
    });
  }
  return HasseDiagram(domain, std::move(covers));
}

HasseDiagram hasse_from_order(const PartialOrder& order) {
  std::vector<Edge> rel;
  for (std::size_t x = 0; x < order.size(); ++x)
    order.above(static_cast<ConceptId>(x)).for_each([&](ConceptId y) {
      rel.emplace_back(static_cast<ConceptId>(x), y);
    });
  return transitive_reduction(order.domain(), rel);
}

PartialOrder order_from_hasse(const HasseDiagram& h) {
  const auto n = h.size();
  std::vector<std::vector<ConceptId>> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = h.successors(static_cast<ConceptId>(x));
  const auto reach = reachability(n, out);
  std::vector<Edge> rel;
  for (std::size_t x = 0; x < n; ++x)
    reach[x].for_each([&](ConceptId y) { rel.emplace_back(static_cast<ConceptId>(x), y); });
  return PartialOrder(h.domain(), rel);
}

bool is_lower_set(const HasseDiagram& h, const State& s) {
  for (auto [x, y] : h.edges())
    if (!s.test(x) && s.test(y)) return false;
  return true;
}

std::vector<ConceptId> topological_order(const HasseDiagram& h) {
  const auto n = h.size();
  std::vector<std::vector<ConceptId>> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = h.successors(static_cast<ConceptId>(x));
  const auto order = kahn_order(n, out);
  std::vector<int> depth(n, 0);
  for (auto x : order)
    for (auto y : out[x]) depth[y] = std::max(depth[y], depth[x] + 1);
  std::vector<ConceptId> result(order);
  std::sort(result.begin(), result.end(), [&](ConceptId a, ConceptId b) {
    return depth[a] != depth[b] ? depth[a] < depth[b] : a < b;
  });
  return result;
}

Fringes fringe_qos(const HasseDiagram& h, const State& s) {
  if (!is_lower_set(h, s)) throw ValidationError("state is not a lower set of the diagram");
  State candidates = State::full(h.size());
  for (auto [x, y] : h.edges()) {
    if (!s.test(x)) candidates.reset(y);
    if (s.test(y)) candidates.reset(x);
  }
  return Fringes{candidates & s, candidates - s};
}

HasseDiagram restrict(const HasseDiagram& h, const State& keep) {
  const auto order = order_from_hasse(h);
  const auto kept = keep.elements();
  std::vector<std::string> labels;
  std::vector<int> new_index(h.size(), -1);
  for (auto c : kept) {
    new_index[c] = static_cast<int>(labels.size());
    labels.push_back(h.domain().label(c));
  }
  std::vector<Edge> rel;
  for (auto x : kept)
    for (auto y : kept)
      if (order.less(x, y)) rel.emplace_back(new_index[x], new_index[y]);
  return transitive_reduction(Domain(std::move(labels)), rel);
}

int concept_distance(const PartialOrder& o, ConceptId x, ConceptId y) {
  State delta(o.size());
  delta.set(x);
  delta.set(y);
  delta |= o.below(x) - o.below(y);
  delta |= o.below(y) - o.below(x);
  delta |= o.above(x) - o.above(y);
  delta |= o.above(y) - o.above(x);
  return static_cast<int>(delta.count()) - 1;
}

HasseDiagram parse_hasse(std::string_view text) {
  detail::LineReader r(text);
  auto header = r.next();
  if (!header) throw ParseError("missing 'domain:' header", r.line_no);
  Domain d = parse_domain_header(*header, r.line_no);
  std::vector<Edge> edges;
  while (auto line = r.next()) {
    std::istringstream ls(*line);
    std::string kw, a, b, extra;
    ls >> kw >> a >> b;
    if (kw != "edge" || a.empty() || b.empty() || (ls >> extra))
      throw ParseError("expected 'edge X Y'", r.line_no);
    auto x = d.find(a), y = d.find(b);
    if (!x) throw ParseError("unknown concept '" + a + "'", r.line_no);
    if (!y) throw ParseError("unknown concept '" + b + "'", r.line_no);
    edges.emplace_back(*x, *y);
  }
  return HasseDiagram(std::move(d), std::move(edges));
}

std::string serialize_hasse(const HasseDiagram& h) {
  std::string out = "domain: " + join_labels(h.domain()) + "\n";
  for (auto [x, y] : h.edges()) out += "edge " + h.domain().label(x) + " " + h.domain().label(y) + "\n";
  return out;
}

SetFamily lower_set_family(const HasseDiagram& h) {
  std::vector<State> states;
  enumerate_lower_sets(h, [&](const State& s) {
    if (states.size() == SetFamily::kMaxStates)
      throw CapacityError("lower-set family exceeds explicit-family capacity");
    states.push_back(s);
  });
  return SetFamily(h.domain(), std::move(states));
}

}  // namespace learnspace
