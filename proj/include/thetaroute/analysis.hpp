#ifndef THETAROUTE_ANALYSIS_HPP
#define THETAROUTE_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thetaroute/geometry.hpp"
#include "thetaroute/graph.hpp"
#include "thetaroute/report.hpp"
#include "thetaroute/router.hpp"

namespace thetaroute {

inline constexpr long double kRatioBound = 17.0L;
inline constexpr long double kRelTol = 1e-9L;

// ---------------------------------------------------------------------------
// Phases

struct Phase {
  VertexId base;
  VertexId greedy_target;
  std::vector<VertexId> tail;  // vertices reached by the sweeping steps after the greedy edge
  VertexId next_base;
};

struct PhaseDecomposition {
  std::vector<VertexId> prefix;  // s..p_1 when the route opens with sweeps, else empty
  std::vector<Phase> phases;
};

inline void check_trace_shape(const RouteTrace& trace) {
  if (trace.steps.empty()) {
    if (trace.source != trace.target) throw std::invalid_argument("empty trace between distinct vertices");
    return;
  }
  if (trace.steps.front().from != trace.source) throw std::invalid_argument("trace does not start at source");
  if (trace.steps.back().to != trace.target) throw std::invalid_argument("trace does not end at target");
  for (std::size_t i = 1; i < trace.steps.size(); ++i)
    if (trace.steps[i].from != trace.steps[i - 1].to)
      throw std::invalid_argument("trace breaks between steps " + std::to_string(i - 1) + " and " +
                                  std::to_string(i));
}

inline PhaseDecomposition decompose_phases(const RouteTrace& trace) {
  check_trace_shape(trace);
  PhaseDecomposition d;
  std::size_t i = 0;
  const auto& st = trace.steps;
  while (i < st.size() && st[i].kind == StepKind::Sweeping) {
    if (d.prefix.empty()) d.prefix.push_back(st[i].from);
    d.prefix.push_back(st[i].to);
    ++i;
  }
  while (i < st.size()) {
    Phase ph{st[i].from, st[i].to, {}, st[i].to};
    ++i;
    while (i < st.size() && st[i].kind == StepKind::Sweeping) {
      ph.tail.push_back(st[i].to);
      ++i;
    }
    if (!ph.tail.empty()) ph.next_base = ph.tail.back();
    d.phases.push_back(std::move(ph));
  }
  return d;
}

inline std::vector<Step> reassemble(const PhaseDecomposition& d) {
  std::vector<Step> out;
  for (std::size_t i = 1; i < d.prefix.size(); ++i) out.push_back({d.prefix[i - 1], d.prefix[i], StepKind::Sweeping});
  for (const auto& ph : d.phases) {
    out.push_back({ph.base, ph.greedy_target, StepKind::Greedy});
    VertexId prev = ph.greedy_target;
    for (VertexId v : ph.tail) {
      out.push_back({prev, v, StepKind::Sweeping});
      prev = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical-frame geometry

inline Frame frame_of(const ThetaGraph& g, const RouteTrace& trace) { return {g.points[trace.target], trace.canon}; }

inline const Diagonal& minus_diagonal() {
  static const Diagonal d{{Coord(0), Coord(0)}, Slope::Minus};
  return d;
}

// Intersection of the slope -1 diagonal of the origin with the slope +1 line through p.
inline Point bar(const Point& p) { return diagonal_projection(p, minus_diagonal()); }

struct BoundingTriangle {
  std::size_t phase_index = 0;
  Point base;
  std::array<Point, 3> vertices;
  Quadrant quadrant = Quadrant::West;  // of the base vertex
  bool degenerate = false;
};

// p and q are canonical-frame coordinates with t at the origin.
inline BoundingTriangle bounding_triangle(const Point& p, const Point& q, std::size_t phase_index = 0) {
  const Point origin{Coord(0), Coord(0)};
  if (p == origin) throw std::domain_error("bounding triangle with base at the target");
  BoundingTriangle tri;
  tri.phase_index = phase_index;
  tri.base = p;
  tri.quadrant = quadrant_of(origin, p);
  Coord d = q.y - q.x;  // slope +1 line through q: y = x + d
  Point a, b;
  if (tri.quadrant == Quadrant::North || tri.quadrant == Quadrant::South) {
    a = {-p.y, p.y};
    b = {p.y - d, p.y};
  } else {
    a = {p.x, -p.x};
    b = {p.x, p.x + d};
  }
  tri.vertices = {a, b, bar(q)};
  tri.degenerate = orient(a, b, tri.vertices[2]).sign() == 0;
  return tri;
}

struct PhaseRecord {
  Point p, q, next;      // p_i, q_i, p_{i+1}
  Point p_bar, q_bar, next_bar;
  Coord l1_pq;           // L1(p_i, q_i)
  Coord l1_q_next_bar;   // L1(q_i, bar p_{i+1})
  Coord l1_p_p_bar;      // L1(p_i, bar p_i)
  Coord phi;
  Coord l1_p_bar_q_bar;  // L1(bar p_i, bar q_i)
  Quadrant quadrant;
};

struct PotentialLedger {
  Point s, p1, p1_bar, p1_prime;
  std::vector<PhaseRecord> records;
};

inline PotentialLedger build_ledger(const ThetaGraph& g, const RouteTrace& trace, const PhaseDecomposition& d) {
  Frame f = frame_of(g, trace);
  const Point origin{Coord(0), Coord(0)};
  PotentialLedger led;
  led.s = f(g.points[trace.source]);
  led.p1 = d.phases.empty() ? origin : f(g.points[d.phases.front().base]);
  led.p1_bar = bar(led.p1);
  led.p1_prime = vertical_projection_onto(led.p1, minus_diagonal());
  for (const auto& ph : d.phases) {
    PhaseRecord r;
    r.p = f(g.points[ph.base]);
    r.q = f(g.points[ph.greedy_target]);
    r.next = f(g.points[ph.next_base]);
    r.p_bar = bar(r.p);
    r.q_bar = bar(r.q);
    r.next_bar = bar(r.next);
    r.l1_pq = l1(r.p, r.q);
    r.l1_q_next_bar = l1(r.q, r.next_bar);
    r.l1_p_p_bar = l1(r.p, r.p_bar);
    r.phi = r.l1_pq + r.l1_q_next_bar - r.l1_p_p_bar;
    r.l1_p_bar_q_bar = l1(r.p_bar, r.q_bar);
    r.quadrant = quadrant_of(origin, r.p);
    led.records.push_back(std::move(r));
  }
  return led;
}

inline std::vector<BoundingTriangle> bounding_triangles(const PotentialLedger& led) {
  std::vector<BoundingTriangle> out;
  for (std::size_t i = 0; i < led.records.size(); ++i)
    out.push_back(bounding_triangle(led.records[i].p, led.records[i].q, i));
  return out;
}

// ---------------------------------------------------------------------------
// Checkers

inline bool within_rel(long double lhs, long double rhs) { return lhs <= rhs * (1 + kRelTol) + kRelTol * 1e-6L; }

inline CheckResult check_linf_monotone(const ThetaGraph& g, const RouteTrace& trace) {
  CheckResult r{"linf_monotone"};
  Frame f = frame_of(g, trace);
  const Point origin{Coord(0), Coord(0)};
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    Coord a = linf(f(g.points[trace.steps[i].from]), origin);
    Coord b = linf(f(g.points[trace.steps[i].to]), origin);
    r.quantity({{"step", i}, {"from", rational_json(a)}, {"to", rational_json(b)}});
    if (a < b) r.witness({{"step", i}, {"from", rational_json(a)}, {"to", rational_json(b)}});
  }
  return r;
}

inline CheckResult check_decomposition(const RouteTrace& trace, const PhaseDecomposition& d) {
  CheckResult r{"decomposition_reassembly"};
  auto steps = reassemble(d);
  if (steps != trace.steps) r.witness({{"reason", "reassembled steps differ from trace"}});
  for (std::size_t i = 0; i < d.phases.size(); ++i)
    if (i + 1 < d.phases.size() && d.phases[i].next_base != d.phases[i + 1].base)
      r.witness({{"phase", i}, {"reason", "next base mismatch"}});
  if (!d.phases.empty() && d.phases.back().next_base != trace.target)
    r.witness({{"reason", "last phase does not end at target"}});
  r.quantity({{"prefix_vertices", d.prefix.size()}, {"phases", d.phases.size()}});
  return r;
}

// Emptiness of every bounding triangle over all points, plus the claim that
// each lies in the closed quadrant of its base vertex. A base sitting on a
// diagonal may have its triangle in either adjacent quadrant.
namespace detail {

struct Box {
  double lo[2], hi[2];
};

// Float box around the triangle, padded well past any rounding in the
// conversions, so points outside it can skip the exact test.
inline Box padded_box(const std::array<Point, 3>& v) {
  Box b{{HUGE_VAL, HUGE_VAL}, {-HUGE_VAL, -HUGE_VAL}};
  double mag = 1;
  for (const auto& p : v) {
    double c[2] = {p.x.to_double(), p.y.to_double()};
    for (int i = 0; i < 2; ++i) {
      b.lo[i] = std::min(b.lo[i], c[i]);
      b.hi[i] = std::max(b.hi[i], c[i]);
      mag = std::max(mag, std::fabs(c[i]));
    }
  }
  double pad = 1e-9 * mag;
  for (int i = 0; i < 2; ++i) {
    b.lo[i] -= pad;
    b.hi[i] += pad;
  }
  return b;
}

inline bool in_box(const Box& b, double x, double y) {
  return x >= b.lo[0] && x <= b.hi[0] && y >= b.lo[1] && y <= b.hi[1];
}

}  // namespace detail

// Points are given lazily: approx(v) is a float image of vertex v in the
// canonical frame, exact(v) the rational one.
template <class Approx, class Exact>
inline CheckReport check_bounding_empty_with(std::size_t n, Approx approx, Exact exact,
                                             const std::vector<BoundingTriangle>& triangles) {
  CheckResult empty{"bounding_triangles_empty"};
  CheckResult single{"bounding_triangles_single_quadrant"};
  const Point origin{Coord(0), Coord(0)};
  for (const auto& tri : triangles) {
    const auto& [a, b, c] = tri.vertices;
    empty.quantity({{"phase", tri.phase_index}, {"a", point_json(a)}, {"b", point_json(b)}, {"c", point_json(c)},
                    {"degenerate", tri.degenerate}});
    if (!tri.degenerate) {
      detail::Box box = detail::padded_box(tri.vertices);
      for (std::size_t v = 0; v < n; ++v) {
        auto [x, y] = approx(v);
        if (!detail::in_box(box, x, y)) continue;
        Point p = exact(v);
        if (strictly_inside_triangle(a, b, c, p))
          empty.witness({{"phase", tri.phase_index}, {"vertex", v}, {"point", point_json(p)}});
      }
    }
    std::optional<Quadrant> found;
    for (Quadrant q : {tri.quadrant, Quadrant::North, Quadrant::South, Quadrant::East, Quadrant::West}) {
      if (in_closed_quadrant(origin, a, q) && in_closed_quadrant(origin, b, q) && in_closed_quadrant(origin, c, q)) {
        found = q;
        break;
      }
    }
    bool ok = found.has_value();
    if (ok && *found != tri.quadrant) {
      // Only a base lying on the diagonal shared by both quadrants may switch.
      ok = in_closed_quadrant(origin, tri.base, *found);
    }
    single.quantity({{"phase", tri.phase_index}, {"base_quadrant", to_string(tri.quadrant)},
                     {"triangle_quadrant", found ? to_string(*found) : "none"}});
    if (!ok) single.witness({{"phase", tri.phase_index}, {"base_quadrant", to_string(tri.quadrant)}});
  }
  CheckReport rep;
  rep.add(std::move(empty));
  rep.add(std::move(single));
  return rep;
}

inline CheckReport check_bounding_empty(const std::vector<Point>& canonical_points,
                                        const std::vector<BoundingTriangle>& triangles) {
  return check_bounding_empty_with(
      canonical_points.size(),
      [&](std::size_t v) {
        return std::pair<double, double>{canonical_points[v].x.to_double(), canonical_points[v].y.to_double()};
      },
      [&](std::size_t v) { return canonical_points[v]; }, triangles);
}

// Within one quadrant class, segment i must lie farther from t along the
// diagonal than every later segment j, touching at most at an endpoint.
inline CheckResult check_segments_disjoint(const PotentialLedger& led, const std::vector<Quadrant>& labels) {
  CheckResult r{"segments_disjoint"};
  if (labels.size() != led.records.size()) throw std::invalid_argument("one quadrant label per phase required");
  const Point origin{Coord(0), Coord(0)};
  std::vector<std::pair<Coord, Coord>> span;  // (far, near) L1 distance to t
  for (const auto& rec : led.records) {
    Coord dp = l1(rec.p_bar, origin);
    Coord dq = l1(rec.q_bar, origin);
    span.emplace_back(dp < dq ? dq : dp, dp < dq ? dp : dq);
    r.quantity({{"p_bar_l1", rational_json(dp)}, {"q_bar_l1", rational_json(dq)}});
  }
  for (std::size_t i = 0; i < led.records.size(); ++i) {
    const Point& pb = led.records[i].p_bar;
    const Point& qb = led.records[i].q_bar;
    if (l1(pb, origin) < l1(qb, origin))
      r.witness({{"phase", i}, {"reason", "segment points away from t"}});
    for (std::size_t j = i + 1; j < led.records.size(); ++j) {
      if (labels[i] != labels[j]) continue;
      if (span[j].first > span[i].second)
        r.witness({{"phase_i", i}, {"phase_j", j}, {"quadrant", to_string(labels[i])},
                   {"near_i", rational_json(span[i].second)}, {"far_j", rational_json(span[j].first)}});
    }
  }
  return r;
}

inline CheckResult check_corollary_budget(const PotentialLedger& led) {
  CheckResult r{"corollary_budget"};
  const Point origin{Coord(0), Coord(0)};
  Coord sum(0);
  for (const auto& rec : led.records) sum += rec.l1_p_bar_q_bar;
  Coord budget = Coord(4) * l1(led.p1_prime, origin);
  r.quantity({{"sum", rational_json(sum)}, {"budget", rational_json(budget)}});
  if (sum > budget) r.witness({{"sum", rational_json(sum)}, {"budget", rational_json(budget)}});
  return r;
}

namespace detail {

// Whether every edge vector lies in one common closed quadrant of directions.
inline bool monotone_chain(const std::vector<Point>& pts) {
  bool ok[4] = {true, true, true, true};
  const Point origin{Coord(0), Coord(0)};
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (int c = 0; c < 4; ++c)
      if (!in_closed_cone(origin, pts[i] - pts[i - 1], c, 4)) ok[c] = false;
  return ok[0] || ok[1] || ok[2] || ok[3];
}

}  // namespace detail

inline CheckReport check_phase_length(const ThetaGraph& g, const RouteTrace& trace, const PhaseDecomposition& d) {
  CheckResult len{"phase_length"};
  CheckResult mono{"sweep_runs_monotone"};
  Frame f = frame_of(g, trace);
  std::vector<Point> prefix;
  for (VertexId v : d.prefix) prefix.push_back(f(g.points[v]));
  if (!detail::monotone_chain(prefix)) mono.witness({{"run", "prefix"}});
  for (std::size_t i = 0; i < d.phases.size(); ++i) {
    const auto& ph = d.phases[i];
    Point p = f(g.points[ph.base]);
    Point q = f(g.points[ph.greedy_target]);
    Point next = f(g.points[ph.next_base]);
    long double length = l2(p, q);
    std::vector<Point> run{q};
    for (VertexId v : ph.tail) {
      Point w = f(g.points[v]);
      length += l2(run.back(), w);
      run.push_back(w);
    }
    Coord bound = l1(p, q) + l1(q, next);
    len.quantity({{"phase", i}, {"l2", static_cast<double>(length)}, {"l1_bound", rational_json(bound)}});
    if (!within_rel(length, bound.to_long_double()))
      len.witness({{"phase", i}, {"l2", static_cast<double>(length)}, {"l1_bound", rational_json(bound)}});
    if (!detail::monotone_chain(run)) mono.witness({{"run", i}});
  }
  CheckReport rep;
  rep.add(std::move(len));
  rep.add(std::move(mono));
  return rep;
}

inline CheckReport check_potential(const PotentialLedger& led) {
  CheckResult bound{"potential_bound"};
  CheckResult tele{"telescoping_identity"};
  Coord sum(0);
  for (std::size_t i = 0; i < led.records.size(); ++i) {
    const auto& rec = led.records[i];
    Coord cap = Coord(2) * rec.l1_p_bar_q_bar;
    bound.quantity({{"phase", i}, {"phi", rational_json(rec.phi)}, {"cap", rational_json(cap)}});
    if (rec.phi > cap) bound.witness({{"phase", i}, {"phi", rational_json(rec.phi)}, {"cap", rational_json(cap)}});
    sum += l1(rec.next, rec.next_bar) - rec.l1_p_p_bar;
  }
  Coord expected = led.records.empty() ? Coord(0) : -l1(led.p1, led.p1_bar);
  tele.quantity({{"sum", rational_json(sum)}, {"expected", rational_json(expected)}});
  if (sum != expected) tele.witness({{"sum", rational_json(sum)}, {"expected", rational_json(expected)}});
  CheckReport rep;
  rep.add(std::move(bound));
  rep.add(std::move(tele));
  return rep;
}

struct ProofChain {
  long double path_length = 0;  // L2 of the routed path
  Coord start;                  // L1(s, bar p_1)
  Coord phi_sum;
  Coord segment_sum;            // sum of L1(bar p_i, bar q_i)
  Coord budget;                 // L1(p_1', t)
  Coord l2_st_squared;
};

inline ProofChain proof_chain(const ThetaGraph& g, const RouteTrace& trace, const PotentialLedger& led) {
  const Point origin{Coord(0), Coord(0)};
  ProofChain c;
  c.path_length = path_length(g, trace);
  c.start = l1(led.s, led.p1_bar);
  c.phi_sum = Coord(0);
  c.segment_sum = Coord(0);
  for (const auto& rec : led.records) {
    c.phi_sum += rec.phi;
    c.segment_sum += rec.l1_p_bar_q_bar;
  }
  c.budget = l1(led.p1_prime, origin);
  c.l2_st_squared = l2_squared(led.s, origin);
  return c;
}

// Each inequality of the upper-bound argument checked on its own. The last
// link compares squares so it stays exact.
inline CheckResult check_proof_chain(const ThetaGraph& g, const RouteTrace& trace, const PotentialLedger& led) {
  CheckResult r{"proof_chain"};
  ProofChain c = proof_chain(g, trace, led);
  Coord two_seg = Coord(2) * c.segment_sum;
  Coord eight_budget = Coord(8) * c.budget;
  Coord final_lhs = c.start + eight_budget;
  r.quantity({{"path_l2", static_cast<double>(c.path_length)},
              {"start_l1", rational_json(c.start)},
              {"phi_sum", rational_json(c.phi_sum)},
              {"two_segment_sum", rational_json(two_seg)},
              {"eight_budget", rational_json(eight_budget)},
              {"l2_st_squared", rational_json(c.l2_st_squared)}});
  if (!within_rel(c.path_length, (c.start + c.phi_sum).to_long_double()))
    r.witness({{"link", "path <= start + phi_sum"}});
  if (c.phi_sum > two_seg) r.witness({{"link", "phi_sum <= 2 segment_sum"}});
  if (two_seg > eight_budget) r.witness({{"link", "2 segment_sum <= 8 budget"}});
  if (final_lhs * final_lhs > Coord(289) * c.l2_st_squared) r.witness({{"link", "start + 8 budget <= 17 L2(s,t)"}});
  if (!within_rel(c.path_length, kRatioBound * std::sqrt(c.l2_st_squared.to_long_double())))
    r.witness({{"link", "path <= 17 L2(s,t)"}});
  return r;
}

// Runs every trace-level checker in the route's canonical frame.
inline CheckReport verify_trace(const ThetaGraph& g, const RouteTrace& trace) {
  CheckReport rep;
  rep.add(check_linf_monotone(g, trace));
  if (trace.steps.empty()) return rep;
  PhaseDecomposition d = decompose_phases(trace);
  rep.add(check_decomposition(trace, d));
  PotentialLedger led = build_ledger(g, trace, d);
  auto tris = bounding_triangles(led);
  Frame f = frame_of(g, trace);
  // Float images via the symmetry's integer matrix; exact ones only on demand.
  auto m = detail::matrix_of(f.canon);
  double tx = f.t.x.to_double(), ty = f.t.y.to_double();
  std::vector<std::pair<double, double>> approx;
  approx.reserve(g.size());
  for (const auto& p : g.points) {
    double dx = p.x.to_double() - tx, dy = p.y.to_double() - ty;
    approx.emplace_back(m[0] * dx + m[1] * dy, m[2] * dx + m[3] * dy);
  }
  rep.append(check_bounding_empty_with(
      g.size(), [&](std::size_t v) { return approx[v]; }, [&](std::size_t v) { return f(g.points[v]); }, tris));
  std::vector<Quadrant> labels;
  for (const auto& rec : led.records) labels.push_back(rec.quadrant);
  rep.add(check_segments_disjoint(led, labels));
  rep.add(check_corollary_budget(led));
  rep.append(check_phase_length(g, trace, d));
  rep.append(check_potential(led));
  rep.add(check_proof_chain(g, trace, led));
  return rep;
}

// ---------------------------------------------------------------------------
// Shortest paths and ratios

struct ShortestPath {
  std::vector<VertexId> path;
  long double length = 0;
};

// Dijkstra over out-edges; returns distances and predecessors from s.
inline std::pair<std::vector<long double>, std::vector<std::optional<VertexId>>> dijkstra(const ThetaGraph& g,
                                                                                           VertexId s) {
  check_vertex(g, s);
  const auto inf = std::numeric_limits<long double>::infinity();
  std::vector<long double> dist(g.size(), inf);
  std::vector<std::optional<VertexId>> pred(g.size());
  using Item = std::pair<long double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& e : g.out[v]) {
      if (!e) continue;
      long double nd = d + l2(g.points[v], g.points[*e]);
      if (nd < dist[*e]) {
        dist[*e] = nd;
        pred[*e] = v;
        pq.push({nd, *e});
      }
    }
  }
  return {dist, pred};
}

inline ShortestPath shortest_path(const ThetaGraph& g, VertexId s, VertexId t) {
  check_vertex(g, t);
  auto [dist, pred] = dijkstra(g, s);
  if (std::isinf(dist[t])) throw RoutingError("vertex " + std::to_string(t) + " unreachable from " + std::to_string(s));
  ShortestPath sp;
  sp.length = dist[t];
  for (VertexId v = t;; v = *pred[v]) {
    sp.path.push_back(v);
    if (v == s) break;
  }
  std::reverse(sp.path.begin(), sp.path.end());
  return sp;
}

inline long double routing_ratio(const ThetaGraph& g, const RouteTrace& trace) {
  if (trace.source == trace.target) throw std::domain_error("routing ratio needs s != t");
  return path_length(g, trace) / l2(g.points[trace.source], g.points[trace.target]);
}

struct PairRatio {
  long double ratio = 0;
  VertexId source = 0;
  VertexId target = 0;
};

inline PairRatio spanning_ratio(const ThetaGraph& g) {
  PairRatio best;
  for (VertexId s = 0; s < g.size(); ++s) {
    auto dist = dijkstra(g, s).first;
    for (VertexId t = 0; t < g.size(); ++t) {
      if (t == s) continue;
      long double r = dist[t] / l2(g.points[s], g.points[t]);
      if (r > best.ratio) best = {r, s, t};
    }
  }
  return best;
}

using Router = std::function<RouteTrace(const ThetaGraph&, VertexId, VertexId)>;

inline PairRatio max_routing_ratio(const ThetaGraph& g, const Router& router) {
  PairRatio best;
  for (VertexId s = 0; s < g.size(); ++s)
    for (VertexId t = 0; t < g.size(); ++t) {
      if (t == s) continue;
      long double r = routing_ratio(g, router(g, s, t));
      if (r > best.ratio) best = {r, s, t};
    }
  return best;
}

}  // namespace thetaroute

#endif  // THETAROUTE_ANALYSIS_HPP
