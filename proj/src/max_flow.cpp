#include "rcm/max_flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcm {

MaxFlow::MaxFlow(std::size_t nodes) : head_(nodes, kNone) {}

std::size_t MaxFlow::add_node() {
  head_.push_back(kNone);
  return head_.size() - 1;
}

void MaxFlow::link(std::size_t u, std::size_t v, std::int64_t cap_uv, std::int64_t cap_vu) {
  if (u >= head_.size() || v >= head_.size()) throw std::out_of_range("MaxFlow: node out of range");
  if (cap_uv < 0 || cap_vu < 0) throw std::invalid_argument("MaxFlow: negative capacity");
  // Paired arcs sit at indices 2k and 2k+1, so arc ^ 1 is the reverse arc.
  arcs_.push_back({static_cast<std::uint32_t>(v), head_[u], cap_uv});
  head_[u] = static_cast<std::uint32_t>(arcs_.size() - 1);
  arcs_.push_back({static_cast<std::uint32_t>(u), head_[v], cap_vu});
  head_[v] = static_cast<std::uint32_t>(arcs_.size() - 1);
}

void MaxFlow::add_arc(std::size_t u, std::size_t v, std::int64_t cap) { link(u, v, cap, 0); }

void MaxFlow::add_edge(std::size_t u, std::size_t v, std::int64_t cap) { link(u, v, cap, cap); }

bool MaxFlow::levels(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
  level_[s] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const std::uint32_t x = queue[i];
    for (std::uint32_t a = head_[x]; a != kNone; a = arcs_[a].next) {
      const Arc& arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[x] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[t] >= 0;
}

// Iterative blocking-flow search along level-increasing arcs.
std::int64_t MaxFlow::push(std::size_t s, std::size_t t, std::int64_t limit) {
  std::int64_t total = 0;
  std::vector<std::uint32_t> path;  // arcs from s to the current node
  std::size_t x = s;
  while (total < limit) {
    if (x == t) {
      std::int64_t f = limit - total;
      for (auto a : path) f = std::min(f, arcs_[a].cap);
      for (auto a : path) {
        arcs_[a].cap -= f;
        arcs_[a ^ 1u].cap += f;
      }
      total += f;
      path.clear();
      x = s;
      continue;
    }
    std::uint32_t& a = cursor_[x];
    while (a != kNone && (arcs_[a].cap <= 0 || level_[arcs_[a].to] != level_[x] + 1)) a = arcs_[a].next;
    if (a == kNone) {
      if (x == s) break;
      level_[x] = -1;  // dead end
      path.pop_back();
      x = path.empty() ? s : arcs_[path.back()].to;
      continue;
    }
    path.push_back(a);
    x = arcs_[a].to;
  }
  return total;
}

std::int64_t MaxFlow::solve(std::size_t s, std::size_t t) {
  if (s >= head_.size() || t >= head_.size()) throw std::out_of_range("MaxFlow: terminal out of range");
  if (s == t) throw std::invalid_argument("MaxFlow: source equals sink");
  level_.assign(head_.size(), -1);
  cursor_.resize(head_.size());
  std::int64_t flow = 0;
  while (levels(s, t)) {
    std::copy(head_.begin(), head_.end(), cursor_.begin());
    flow += push(s, t, std::numeric_limits<std::int64_t>::max());
  }
  return flow;
}

}  // namespace rcm
