#include "rcm/events.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <map>
#include <sstream>

#include "rcm/disjoint_set.hpp"
#include "rcm/max_flow.hpp"

namespace rcm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

EventSpec make(EventShape s) {
  EventSpec ev{std::move(s), SymmetryTransform::identity()};
  validate(ev);
  return ev;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("event: " + what);
}

Region edge_box(const LatticeEdge& e) {
  const Vertex h = e.head();
  return {e.anchor.x, h.x, e.anchor.y, h.y};
}

std::vector<std::uint32_t> column(const Region& box, int x, int y0, int y1) {
  std::vector<std::uint32_t> out;
  for (int y = y0; y <= y1; ++y) out.push_back(static_cast<std::uint32_t>(box.vertex_index({x, y})));
  return out;
}

std::vector<std::uint32_t> row(const Region& box, int y, int x0, int x1) {
  std::vector<std::uint32_t> out;
  for (int x = x0; x <= x1; ++x) out.push_back(static_cast<std::uint32_t>(box.vertex_index({x, y})));
  return out;
}

std::vector<std::vector<std::uint32_t>> crossing_terminals(const Region& box, CrossingDirection d) {
  if (d == CrossingDirection::left_right)
    return {column(box, box.x_min(), box.y_min(), box.y_max()), column(box, box.x_max(), box.y_min(), box.y_max())};
  return {row(box, box.y_min(), box.x_min(), box.x_max()), row(box, box.y_max(), box.x_min(), box.x_max())};
}

std::vector<std::vector<std::uint32_t>> terminals_of(const EventSpec& ev, const Region& box) {
  return std::visit(
      Overloaded{
          [&](const shape::CrossingH&) { return crossing_terminals(box, CrossingDirection::left_right); },
          [&](const shape::CrossingV&) { return crossing_terminals(box, CrossingDirection::bottom_top); },
          [&](const shape::BoxCrossing& s) { return crossing_terminals(box, s.direction); },
          [&](const shape::HalfCrossing& s) {
            return std::vector{column(box, -s.n, -s.n, s.n), column(box, s.n, s.alpha, s.beta)};
          },
          [&](const shape::Cross& s) {
            return std::vector{column(box, -s.n, -s.n, -s.alpha), column(box, -s.n, s.alpha, s.n),
                               column(box, s.n, -s.n, -s.alpha), column(box, s.n, s.alpha, s.n)};
          },
          [&](const shape::PointToOrigin& s) {
            return std::vector<std::vector<std::uint32_t>>{
                {static_cast<std::uint32_t>(box.vertex_index({0, 0}))},
                {static_cast<std::uint32_t>(box.vertex_index(s.x))}};
          },
          [&](const shape::Strip&) { return crossing_terminals(box, CrossingDirection::left_right); },
          [&](const shape::DualStrip&) { return crossing_terminals(box, CrossingDirection::bottom_top); },
          [&](const shape::EdgeOpen& s) {
            return std::vector<std::vector<std::uint32_t>>{
                {static_cast<std::uint32_t>(box.vertex_index(s.edge.tail()))},
                {static_cast<std::uint32_t>(box.vertex_index(s.edge.head()))}};
          },
          [&](const shape::BoxToBoundary& s) {
            std::vector<std::uint32_t> inner, outer;
            for (std::size_t v = 0; v < box.vertex_count(); ++v) {
              const Vertex w = box.vertex_at(v);
              if (std::abs(w.x) <= s.n && std::abs(w.y) <= s.n) inner.push_back(static_cast<std::uint32_t>(v));
              if (box.on_boundary(w)) outer.push_back(static_cast<std::uint32_t>(v));
            }
            return std::vector{inner, outer};
          },
      },
      ev.shape);
}

// Linear part of a placement: optional reflection in the x-axis, then `rot` quarter turns.
SymmetryTransform linear_part(bool flip, int rot) {
  SymmetryTransform t = flip ? SymmetryTransform::reflection_x_axis() : SymmetryTransform::identity();
  for (int i = 0; i < rot; ++i) t = t.then(SymmetryTransform::rotation_quarter());
  return t;
}

}  // namespace

EventSpec crossing_h(int a, int b) { return make(shape::CrossingH{a, b}); }
EventSpec crossing_v(int a, int b) { return make(shape::CrossingV{a, b}); }
EventSpec box_crossing(const Region& box, CrossingDirection direction) {
  return make(shape::BoxCrossing{box, direction});
}
EventSpec half_crossing(int n, int alpha, int beta) { return make(shape::HalfCrossing{n, alpha, beta}); }
EventSpec cross_event(int n, int alpha) { return make(shape::Cross{n, alpha}); }
EventSpec point_to_origin(Vertex x) { return make(shape::PointToOrigin{x}); }
EventSpec strip_crossing(int n) { return make(shape::Strip{n}); }
EventSpec dual_strip_crossing(int n) { return make(shape::DualStrip{n}); }
EventSpec edge_open(const LatticeEdge& e) { return make(shape::EdgeOpen{e}); }
EventSpec box_to_boundary(int n, int R) { return make(shape::BoxToBoundary{n, R}); }

void validate(const EventSpec& ev) {
  std::visit(Overloaded{
                 [](const shape::CrossingH& s) { require(s.a >= 0 && s.b >= 0, "crossing-h needs a, b >= 0"); },
                 [](const shape::CrossingV& s) { require(s.a >= 0 && s.b >= 0, "crossing-v needs a, b >= 0"); },
                 [](const shape::BoxCrossing&) {},
                 [](const shape::HalfCrossing& s) {
                   require(s.n >= 1 && -s.n <= s.alpha && s.alpha <= s.beta && s.beta <= s.n,
                           "half-crossing needs n >= 1 and -n <= alpha <= beta <= n");
                 },
                 [](const shape::Cross& s) {
                   require(s.n >= 1 && 0 <= s.alpha && s.alpha <= s.n, "cross needs n >= 1 and 0 <= alpha <= n");
                 },
                 [](const shape::PointToOrigin&) {},
                 [](const shape::Strip& s) { require(s.n >= 1, "strip needs n >= 1"); },
                 [](const shape::DualStrip& s) { require(s.n >= 1, "dual-strip needs n >= 1"); },
                 [](const shape::EdgeOpen&) {},
                 [](const shape::BoxToBoundary& s) {
                   require(0 <= s.n && s.n <= s.R, "box-to-boundary needs 0 <= n <= R");
                 },
             },
             ev.shape);
}

std::string_view kind_name(const EventSpec& ev) {
  static constexpr std::string_view names[] = {"crossing-h", "crossing-v", "box-crossing", "half-crossing",
                                                "cross",      "point-to-origin", "strip", "dual-strip",
                                                "edge-open",  "box-to-boundary"};
  return names[ev.shape.index()];
}

Region base_box(const EventSpec& ev) {
  return std::visit(Overloaded{
                        [](const shape::CrossingH& s) { return Region(-s.a, s.a, -s.b, s.b); },
                        [](const shape::CrossingV& s) { return Region(-s.a, s.a, -s.b, s.b); },
                        [](const shape::BoxCrossing& s) { return s.box; },
                        [](const shape::HalfCrossing& s) { return Region(-s.n, s.n, -s.n, s.n); },
                        [](const shape::Cross& s) { return Region(-s.n, s.n, -s.n, s.n); },
                        [](const shape::PointToOrigin& s) {
                          const int n = std::max(std::abs(s.x.x), std::abs(s.x.y));
                          return Region(-n, n, -n, n);
                        },
                        [](const shape::Strip& s) { return Region(0, 2 * s.n + 1, 0, 2 * s.n); },
                        [](const shape::DualStrip& s) { return Region(0, 2 * s.n, -1, 2 * s.n); },
                        [](const shape::EdgeOpen& s) { return edge_box(s.edge); },
                        [](const shape::BoxToBoundary& s) { return Region(-s.R, s.R, -s.R, s.R); },
                    },
                    ev.shape);
}

Region support(const EventSpec& ev) { return ev.placement.apply(base_box(ev)); }

EventSpec image_of(const EventSpec& ev, const SymmetryTransform& t) {
  return EventSpec{ev.shape, ev.placement.then(t)};
}

EventDetector::EventDetector(const EventSpec& ev, const Region& r) : region_(r), local_(base_box(ev)) {
  validate(ev);
  const Region& box = local_.region();
  const Region image = ev.placement.apply(box);
  if (!r.contains(image))
    throw EventSupportError(std::string(kind_name(ev)) + " event needs " + image.to_string() +
                            ", which is not inside " + r.to_string());
  edge_map_.resize(box.edge_count());
  for (std::size_t e = 0; e < box.edge_count(); ++e) edge_map_[e] = r.edge_index(ev.placement.apply(box.edge_at(e)));
  terminals_ = terminals_of(ev, box);

  // A vertex common to every terminal set makes the event certain.
  std::vector<std::uint8_t> hits(box.vertex_count(), 0);
  for (const auto& set : terminals_) {
    std::vector<std::uint8_t> in(box.vertex_count(), 0);
    for (auto v : set) in[v] = 1;
    for (std::size_t v = 0; v < in.size(); ++v) hits[v] += in[v];
  }
  terminals_overlap_ = std::any_of(hits.begin(), hits.end(), [&](auto h) { return h == terminals_.size(); });
}

bool EventDetector::evaluate(const Configuration& c, const std::vector<std::uint8_t>* closed) const {
  if (c.size() != region_.edge_count()) throw std::invalid_argument("event: configuration does not match region");
  if (terminals_overlap_) return true;
  auto usable = [&](std::size_t e) { return local_open(c, e) && !(closed && (*closed)[e]); };

  if (terminals_.size() == 2) {
    // Search outward from the first set; clusters are usually small.
    std::vector<std::uint8_t> state(local_.vertex_count(), 0);  // 1 target, 2 seen
    for (auto v : terminals_[1]) state[v] = 1;
    std::vector<std::uint32_t> stack;
    for (auto v : terminals_[0]) {
      state[v] = 2;
      stack.push_back(v);
    }
    while (!stack.empty()) {
      const std::uint32_t x = stack.back();
      stack.pop_back();
      std::size_t deg = 0;
      const auto* nb = local_.neighbors(x, deg);
      for (std::size_t i = 0; i < deg; ++i) {
        if (!usable(nb[i].edge)) continue;
        auto& s = state[nb[i].vertex];
        if (s == 1) return true;
        if (s == 0) {
          s = 2;
          stack.push_back(nb[i].vertex);
        }
      }
    }
    return false;
  }

  DisjointSet ds(local_.vertex_count());
  for (std::size_t e = 0; e < edge_map_.size(); ++e)
    if (usable(e)) ds.unite(local_.ends(e)[0], local_.ends(e)[1]);
  const std::uint32_t full = (std::uint32_t{1} << terminals_.size()) - 1;
  std::vector<std::uint32_t> mask(local_.vertex_count(), 0);
  for (std::size_t k = 0; k < terminals_.size(); ++k) {
    for (auto v : terminals_[k]) {
      auto& m = mask[ds.find(v)];
      m |= std::uint32_t{1} << k;
      if (m == full) return true;
    }
  }
  return false;
}

bool EventDetector::operator()(const Configuration& c) const { return evaluate(c, nullptr); }

int EventDetector::hamming(const Configuration& c) const {
  if (!evaluate(c, nullptr)) return 0;
  if (terminals_overlap_) return kNoComplement;

  if (terminals_.size() == 2) {
    // Menger: the fewest closures separating the two sides equals the
    // maximum number of edge-disjoint open paths between them.
    const std::size_t nv = local_.vertex_count();
    MaxFlow flow(nv + 2);
    const std::size_t s = nv, t = nv + 1;
    for (std::size_t e = 0; e < edge_map_.size(); ++e)
      if (local_open(c, e)) flow.add_edge(local_.ends(e)[0], local_.ends(e)[1], 1);
    for (auto v : terminals_[0]) flow.add_arc(s, v, MaxFlow::kInfinite);
    for (auto v : terminals_[1]) flow.add_arc(v, t, MaxFlow::kInfinite);
    return static_cast<int>(flow.solve(s, t));
  }

  std::vector<std::size_t> open;
  for (std::size_t e = 0; e < edge_map_.size(); ++e)
    if (local_open(c, e)) open.push_back(e);
  if (open.size() > kGenericHammingBound)
    throw std::length_error("hamming: this event has no max-flow form and " + std::to_string(open.size()) +
                            " open edges in its support; exhaustive search is limited to " +
                            std::to_string(kGenericHammingBound));
  const std::uint32_t m = static_cast<std::uint32_t>(open.size());
  std::vector<std::uint8_t> closed(edge_map_.size(), 0);
  for (std::uint32_t k = 1; k <= m; ++k) {
    // Every k-subset of the open edges, by Gosper's hack.
    for (std::uint32_t set = (std::uint32_t{1} << k) - 1; set < (std::uint32_t{1} << m);) {
      for (std::uint32_t i = 0; i < m; ++i) closed[open[i]] = (set >> i) & 1u;
      if (!evaluate(c, &closed)) return static_cast<int>(k);
      const std::uint32_t low = set & (~set + 1);
      const std::uint32_t ripple = set + low;
      set = (((ripple ^ set) >> 2) / low) | ripple;
    }
  }
  return kNoComplement;
}

bool detect(const EventSpec& ev, const Configuration& c, const Region& r) { return EventDetector(ev, r)(c); }

Event as_predicate(const EventSpec& ev, const Region& r) {
  return [detector = EventDetector(ev, r)](const Configuration& c) { return detector(c); };
}

int count_disjoint_crossings(const Configuration& c, const Region& r, const Region& box,
                             CrossingDirection direction) {
  return EventDetector(box_crossing(box, direction), r).hamming(c);
}

int count_disjoint_crossings(const Configuration& c, const Region& r, int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("count_disjoint_crossings: a, b must be >= 0");
  if (a == 0) throw std::invalid_argument("count_disjoint_crossings: a = 0 gives a degenerate box");
  return count_disjoint_crossings(c, r, Region(-a, a, -b, b), CrossingDirection::left_right);
}

int hamming_to_complement(const Configuration& c, const Region& r, const EventSpec& ev) {
  return EventDetector(ev, r).hamming(c);
}

std::string to_string(const EventSpec& ev) {
  std::ostringstream os;
  os << kind_name(ev);
  std::visit(Overloaded{
                 [&](const shape::CrossingH& s) { os << " a=" << s.a << " b=" << s.b; },
                 [&](const shape::CrossingV& s) { os << " a=" << s.a << " b=" << s.b; },
                 [&](const shape::BoxCrossing& s) {
                   os << " x0=" << s.box.x_min() << " x1=" << s.box.x_max() << " y0=" << s.box.y_min()
                      << " y1=" << s.box.y_max() << " vertical=" << (s.direction == CrossingDirection::bottom_top);
                 },
                 [&](const shape::HalfCrossing& s) {
                   os << " n=" << s.n << " alpha=" << s.alpha << " beta=" << s.beta;
                 },
                 [&](const shape::Cross& s) { os << " n=" << s.n << " alpha=" << s.alpha; },
                 [&](const shape::PointToOrigin& s) { os << " x=" << s.x.x << " y=" << s.x.y; },
                 [&](const shape::Strip& s) { os << " n=" << s.n; },
                 [&](const shape::DualStrip& s) { os << " n=" << s.n; },
                 [&](const shape::EdgeOpen& s) {
                   os << " x=" << s.edge.anchor.x << " y=" << s.edge.anchor.y
                      << " vertical=" << (s.edge.orientation == Orientation::vertical);
                 },
                 [&](const shape::BoxToBoundary& s) { os << " n=" << s.n << " R=" << s.R; },
             },
             ev.shape);
  if (!ev.placement.is_identity()) {
    const Vertex t = ev.placement.apply(Vertex{0, 0});
    const auto shift = SymmetryTransform::translation(t.x, t.y);
    for (int flip = 0; flip < 2; ++flip) {
      for (int rot = 0; rot < 4; ++rot) {
        if (linear_part(flip, rot).then(shift) != ev.placement) continue;
        if (flip) os << " flip=1";
        if (rot) os << " rot=" << rot;
        if (t.x) os << " dx=" << t.x;
        if (t.y) os << " dy=" << t.y;
        return os.str();
      }
    }
  }
  return os.str();
}

EventSpec parse_event(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string kind;
  if (!(is >> kind)) throw std::invalid_argument("event: empty description");
  std::map<std::string, int> kv;
  for (std::string tok; is >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("event: expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size())
      throw std::invalid_argument("event: '" + key + "' needs an integer value, got '" + val + "'");
    if (!kv.emplace(key, v).second) throw std::invalid_argument("event: duplicate key '" + key + "'");
  }
  auto take = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("event: " + kind + " requires '" + key + "'");
    const int v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_or = [&](const char* key, int fallback) { return kv.count(key) ? take(key) : fallback; };

  EventSpec ev;
  if (kind == "crossing-h") {
    const int a = take("a");
    ev = crossing_h(a, take("b"));
  } else if (kind == "crossing-v") {
    const int a = take("a");
    ev = crossing_v(a, take("b"));
  } else if (kind == "box-crossing") {
    const int x0 = take("x0"), x1 = take("x1"), y0 = take("y0"), y1 = take("y1");
    ev = box_crossing(Region(x0, x1, y0, y1),
                      take_or("vertical", 0) ? CrossingDirection::bottom_top : CrossingDirection::left_right);
  } else if (kind == "half-crossing") {
    const int n = take("n"), alpha = take("alpha");
    ev = half_crossing(n, alpha, take("beta"));
  } else if (kind == "cross") {
    const int n = take("n");
    ev = cross_event(n, take("alpha"));
  } else if (kind == "point-to-origin") {
    const int x = take("x");
    ev = point_to_origin({x, take("y")});
  } else if (kind == "strip") {
    ev = strip_crossing(take("n"));
  } else if (kind == "dual-strip") {
    ev = dual_strip_crossing(take("n"));
  } else if (kind == "edge-open") {
    const int x = take("x"), y = take("y");
    ev = edge_open({{x, y}, take_or("vertical", 0) ? Orientation::vertical : Orientation::horizontal});
  } else if (kind == "box-to-boundary") {
    const int n = take("n");
    ev = box_to_boundary(n, take("R"));
  } else {
    throw std::invalid_argument("event: unknown kind '" + kind + "'");
  }

  const int flip = take_or("flip", 0);
  const int rot = take_or("rot", 0);
  const int dx = take_or("dx", 0);
  const int dy = take_or("dy", 0);
  if (flip != 0 && flip != 1) throw std::invalid_argument("event: flip must be 0 or 1");
  if (rot < 0 || rot > 3) throw std::invalid_argument("event: rot must be in 0..3");
  if (!kv.empty()) throw std::invalid_argument("event: unknown key '" + kv.begin()->first + "' for " + kind);
  ev.placement = linear_part(flip == 1, rot).then(SymmetryTransform::translation(dx, dy));
  return ev;
}

}  // namespace rcm
