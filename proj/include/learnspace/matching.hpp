#pragma once

#include <cstddef>
#include <vector>

namespace learnspace {

struct Matching {
  std::vector<int> left_to_right;  // -1 when unmatched
  std::vector<int> right_to_left;
  std::size_t size = 0;
};

/// Maximum bipartite matching by Hopcroft-Karp. `adj[u]` lists the right
/// vertices adjacent to left vertex u. Runs in O(E sqrt(V)).
Matching hopcroft_karp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adj);

}  // namespace learnspace
