#ifndef THETAROUTE_ROUTER_HPP
#define THETAROUTE_ROUTER_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thetaroute/geometry.hpp"
#include "thetaroute/graph.hpp"

namespace thetaroute {

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepKind { Sweeping, Greedy };

inline const char* to_string(StepKind k) { return k == StepKind::Sweeping ? "sweep" : "greedy"; }

struct Step {
  VertexId from;
  VertexId to;
  StepKind kind;

  friend bool operator==(const Step&, const Step&) = default;
};

struct RouteTrace {
  VertexId source = 0;
  VertexId target = 0;
  Slope diagonal = Slope::Minus;
  Symmetry canon;
  std::vector<Step> steps;

  // Vertex sequence source..target.
  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out{source};
    for (const auto& s : steps) out.push_back(s.to);
    return out;
  }
};

// Picks the diagonal of t bisecting the cone of t that holds s, and the first
// symmetry (in Symmetry::all() order) taking s - t into the wedge
// {x <= 0, 0 <= y <= -x} while mapping the chosen diagonal onto slope -1.
inline std::pair<Slope, Symmetry> choose_diagonal(const Point& s, const Point& t) {
  if (s == t) throw std::domain_error("choose_diagonal with s == t");
  Slope slope = cone_index(t, s, 4) % 2 == 0 ? Slope::Minus : Slope::Plus;
  for (const auto& sym : Symmetry::all()) {
    if (sym.preserves_slope() != (slope == Slope::Minus)) continue;
    Point c = apply_symmetry(sym, s - t);
    if (c.x.sign() <= 0 && c.y.sign() >= 0 && (c.x + c.y).sign() <= 0) return {slope, sym};
  }
  throw std::logic_error("no canonicalizing symmetry for " + s.to_string());
}

// Everything a single forwarding decision may look at.
struct LocalView {
  Point current;
  std::array<std::optional<Point>, 4> neighbors;
  Point target;
  Slope diagonal;
};

struct StepDecision {
  ConeIndex cone;
  StepKind kind;
};

// Cone of v that points across the chosen diagonal toward it.
inline ConeIndex sweep_cone(Slope diagonal, Side side) {
  if (diagonal == Slope::Minus) return side == Side::Below ? 1 : 3;
  return side == Side::Left ? 0 : 2;
}

inline StepDecision decide_step(const LocalView& view) {
  if (view.current == view.target) throw std::domain_error("decide_step at the target");
  Diagonal diag{view.target, view.diagonal};
  Side side = side_of(diag, view.current);
  ConeIndex greedy = cone_index(view.current, view.target, 4);
  if (side != Side::On) {
    ConeIndex c = sweep_cone(view.diagonal, side);
    const auto& w = view.neighbors[c];
    if (w && side_of(diag, *w) == side) return {c, StepKind::Sweeping};
    // Same edge either way: counted as a sweeping step.
    if (c == greedy) return {c, StepKind::Sweeping};
  }
  return {greedy, StepKind::Greedy};
}

inline LocalView local_view(const ThetaGraph& g, VertexId v, VertexId t, Slope diagonal) {
  LocalView view{g.points[v], {}, g.points[t], diagonal};
  for (ConeIndex i = 0; i < 4; ++i)
    if (g.out[v][i]) view.neighbors[i] = g.points[*g.out[v][i]];
  return view;
}

// True iff the sweep triangle of v (its sweep cone cut by the open halfplane
// on v's side of the diagonal) holds no point. Only the sweep-cone neighbor
// needs testing since it minimizes the projection within that cone.
inline bool is_clean(const ThetaGraph& g, VertexId v, VertexId t, Slope diagonal) {
  check_vertex(g, v);
  check_vertex(g, t);
  if (g.k != 4) throw std::domain_error("is_clean requires a Theta_4 graph");
  Diagonal diag{g.points[t], diagonal};
  Side side = side_of(diag, g.points[v]);
  if (side == Side::On) return true;
  auto w = g.out[v][sweep_cone(diagonal, side)];
  return !w || side_of(diag, g.points[*w]) != side;
}

inline RouteTrace route(const ThetaGraph& g, VertexId s, VertexId t) {
  check_vertex(g, s);
  check_vertex(g, t);
  if (g.k != 4) throw std::domain_error("route requires a Theta_4 graph (k=" + std::to_string(g.k) + ")");
  RouteTrace trace;
  trace.source = s;
  trace.target = t;
  if (s == t) return trace;
  std::tie(trace.diagonal, trace.canon) = choose_diagonal(g.points[s], g.points[t]);
  VertexId v = s;
  const auto cap = g.size();
  while (v != t) {
    if (trace.steps.size() >= cap)
      throw RoutingError("route " + std::to_string(s) + "->" + std::to_string(t) + " exceeded " +
                         std::to_string(cap) + " steps at vertex " + std::to_string(v));
    StepDecision d = decide_step(local_view(g, v, t, trace.diagonal));
    auto w = g.out[v][d.cone];
    if (!w)
      throw RoutingError("no neighbor of vertex " + std::to_string(v) + " in cone " + std::to_string(d.cone));
    trace.steps.push_back({v, *w, d.kind});
    v = *w;
  }
  return trace;
}

// Forward to the neighbor in the cone that contains t, for any k.
inline RouteTrace cone_route(const ThetaGraph& g, VertexId s, VertexId t) {
  check_vertex(g, s);
  check_vertex(g, t);
  RouteTrace trace;
  trace.source = s;
  trace.target = t;
  if (s == t) return trace;
  std::tie(trace.diagonal, trace.canon) = choose_diagonal(g.points[s], g.points[t]);
  VertexId v = s;
  const auto cap = g.size();
  while (v != t) {
    if (trace.steps.size() >= cap)
      throw RoutingError("cone route " + std::to_string(s) + "->" + std::to_string(t) + " exceeded " +
                         std::to_string(cap) + " steps");
    auto w = g.out[v][cone_index(g.points[v], g.points[t], g.k)];
    if (!w) throw RoutingError("cone route stuck at vertex " + std::to_string(v));
    trace.steps.push_back({v, *w, StepKind::Greedy});
    v = *w;
  }
  return trace;
}

inline long double path_length(const ThetaGraph& g, const RouteTrace& trace) {
  long double sum = 0;
  for (const auto& s : trace.steps) sum += l2(g.points[s.from], g.points[s.to]);
  return sum;
}

inline json trace_to_json(const RouteTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) steps.push_back({{"from", s.from}, {"to", s.to}, {"kind", to_string(s.kind)}});
  return {{"source", trace.source},
          {"target", trace.target},
          {"diagonal", to_string(trace.diagonal)},
          {"canon", {{"rot", trace.canon.rotation}, {"reflect", trace.canon.reflect}}},
          {"steps", steps}};
}

inline RouteTrace trace_from_json(const json& j) {
  RouteTrace t;
  try {
    t.source = j.at("source").get<VertexId>();
    t.target = j.at("target").get<VertexId>();
    auto d = j.at("diagonal").get<std::string>();
    if (d != "minus" && d != "plus") throw std::invalid_argument("diagonal must be minus or plus");
    t.diagonal = d == "minus" ? Slope::Minus : Slope::Plus;
    t.canon.rotation = j.at("canon").at("rot").get<int>();
    t.canon.reflect = j.at("canon").at("reflect").get<bool>();
    if (t.canon.rotation < 0 || t.canon.rotation > 3) throw std::invalid_argument("rot must be 0-3");
    for (const auto& s : j.at("steps")) {
      auto kind = s.at("kind").get<std::string>();
      if (kind != "sweep" && kind != "greedy") throw std::invalid_argument("step kind must be sweep or greedy");
      t.steps.push_back({s.at("from").get<VertexId>(), s.at("to").get<VertexId>(),
                         kind == "sweep" ? StepKind::Sweeping : StepKind::Greedy});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace JSON: ") + e.what());
  }
  return t;
}

}  // namespace thetaroute

#endif  // THETAROUTE_ROUTER_HPP
