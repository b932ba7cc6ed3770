#include "learnspace/matching.hpp"

#include <limits>
#include <queue>

namespace learnspace {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

class HopcroftKarp {
public:
  HopcroftKarp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adj)
      : adj_(adj), dist_(left), it_(left) {
    m_.left_to_right.assign(left, -1);
    m_.right_to_left.assign(right, -1);
  }

  Matching run() {
    while (layer()) {
      std::fill(it_.begin(), it_.end(), 0);
      for (std::size_t u = 0; u < adj_.size(); ++u)
        if (m_.left_to_right[u] < 0 && augment(static_cast<int>(u))) ++m_.size;
    }
    return std::move(m_);
  }

private:
  // BFS from free left vertices; true if some free right vertex is reachable.
  bool layer() {
    std::queue<int> q;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (m_.left_to_right[u] < 0) {
        dist_[u] = 0;
        q.push(static_cast<int>(u));
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj_[u]) {
        const int w = m_.right_to_left[v];
        if (w < 0) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  // DFS along the layered graph; each edge is tried at most once per phase.
  bool augment(int u) {
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      const int v = adj_[u][i];
      const int w = m_.right_to_left[v];
      if (w < 0 || (dist_[w] == dist_[u] + 1 && augment(w))) {
        m_.left_to_right[u] = v;
        m_.right_to_left[v] = u;
        ++i;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> dist_;
  std::vector<std::size_t> it_;
  Matching m_;
};

}  // namespace

Matching hopcroft_karp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adj) {
  return HopcroftKarp(left, right, adj).run();
}

}  // namespace learnspace
