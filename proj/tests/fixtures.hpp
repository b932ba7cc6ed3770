#pragma once

#include <string>
#include <vector>

#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"
#include "learnspace/sequence_space.hpp"

namespace fixtures {

using namespace learnspace;

inline Domain letters(const std::string& s) {
  std::vector<std::string> labels;
  for (char c : s) labels.emplace_back(1, c);
  return Domain(labels);
}

inline State st(const Domain& d, const std::string& s) {
  State out(d.size());
  for (char c : s) out.set(d.index_of(std::string(1, c)));
  return out;
}

inline HasseDiagram diagram(const std::string& labels, const std::vector<std::string>& edges) {
  auto d = letters(labels);
  std::vector<Edge> e;
  for (const auto& xy : edges) e.emplace_back(d.index_of(xy.substr(0, 1)), d.index_of(xy.substr(1, 1)));
  return HasseDiagram(d, e);
}

/// The eight-concept prerequisite diagram with two long chains used throughout.
inline HasseDiagram fig1() {
  return diagram("ABCDEFGH", {"AC", "CE", "EG", "BD", "DF", "FH", "AD", "FG"});
}

/// Complete bipartite shape: 2n/3 bottom concepts each below all n/3 top concepts.
inline HasseDiagram fig2(std::size_t n) {
  const auto bottoms = 2 * n / 3;
  auto d = make_domain(n);
  std::vector<Edge> e;
  for (std::size_t b = 0; b < bottoms; ++b)
    for (std::size_t t = bottoms; t < n; ++t) e.emplace_back(static_cast<ConceptId>(b), static_cast<ConceptId>(t));
  return HasseDiagram(d, e);
}

inline SequenceSpace fig4() { return SequenceSpace::from_strings({"ABC", "CBA"}); }
inline SequenceSpace fig5() { return SequenceSpace::from_strings({"ABCDEF", "BDFCAE", "CBEFAD"}); }

inline SetFamily fig4_family() {
  auto d = letters("ABC");
  std::vector<State> s;
  for (const char* x : {"", "A", "C", "AB", "AC", "BC", "ABC"}) s.push_back(st(d, x));
  return SetFamily(d, s);
}

inline SetFamily family(const std::string& labels, const std::vector<std::string>& sets) {
  auto d = letters(labels);
  std::vector<State> s;
  for (const auto& x : sets) s.push_back(st(d, x));
  return SetFamily(d, s);
}

/// Generators of the arcs of the five-cycle a-b-e-d-c-a: well-graded and
/// union-closed, yet no upper subfamily of a learning space.
inline std::vector<std::string> fig9_generators() { return {"ab", "ac", "be", "cd", "de"}; }

inline SetFamily fig10_left() { return family("abc", {"", "ab", "ac", "bc", "abc"}); }
inline SetFamily fig10_right() { return family("abc", {"", "c", "ab", "bc", "abc"}); }

}  // namespace fixtures
