#include <algorithm>
#include <iterator>
#include <set>
#include <utility>

#include "saddlegkb/spd_factor.hpp"

namespace saddlegkb {

std::vector<std::size_t> minimum_degree_ordering(const SparseSymMatrix& m) {
  const auto n = m.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : m.matrix().row(i).cols) {
      if (j != i) adj[i].push_back(j);
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> queue;  // (degree, node)
  for (std::size_t i = 0; i < n; ++i) queue.emplace(adj[i].size(), i);

  std::vector<std::size_t> perm;
  perm.reserve(n);
  std::vector<std::size_t> merged;
  while (!queue.empty()) {
    const auto node = queue.begin()->second;
    queue.erase(queue.begin());
    perm.push_back(node);

    const auto clique = std::move(adj[node]);
    adj[node].clear();
    for (auto a : clique) {
      auto& na = adj[a];
      queue.erase({na.size(), a});
      merged.clear();
      std::set_union(na.begin(), na.end(), clique.begin(), clique.end(), std::back_inserter(merged));
      na.clear();
      for (auto b : merged) {
        if (b != a && b != node) na.push_back(b);
      }
      queue.emplace(na.size(), a);
    }
  }
  return perm;
}

}  // namespace saddlegkb
