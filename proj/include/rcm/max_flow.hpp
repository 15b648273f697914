#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace rcm {

/// Dinic's algorithm with integer capacities. Tuned for unit-capacity grid
/// graphs, where it runs in O(E sqrt(E)).
class MaxFlow {
 public:
  static constexpr std::int64_t kInfinite = std::numeric_limits<std::int32_t>::max();

  explicit MaxFlow(std::size_t nodes = 0);

  std::size_t add_node();
  std::size_t node_count() const noexcept { return head_.size(); }

  /// Arc u -> v with capacity `cap`.
  void add_arc(std::size_t u, std::size_t v, std::int64_t cap);
  /// Undirected edge: capacity `cap` in each direction.
  void add_edge(std::size_t u, std::size_t v, std::int64_t cap);

  /// Maximum s-t flow; may be called once per graph.
  std::int64_t solve(std::size_t s, std::size_t t);

 private:
  struct Arc {
    std::uint32_t to;
    std::uint32_t next;
    std::int64_t cap;
  };

  void link(std::size_t u, std::size_t v, std::int64_t cap_uv, std::int64_t cap_vu);
  bool levels(std::size_t s, std::size_t t);
  std::int64_t push(std::size_t s, std::size_t t, std::int64_t limit);

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> head_;
  std::vector<Arc> arcs_;
  std::vector<std::int32_t> level_;
  std::vector<std::uint32_t> cursor_;
};

}  // namespace rcm
