#ifndef THETAROUTE_GRAPH_HPP
#define THETAROUTE_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetaroute/geometry.hpp"
#include "thetaroute/report.hpp"

namespace thetaroute {

using VertexId = std::size_t;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ThetaGraph {
  int k = 4;
  std::vector<Point> points;
  std::vector<std::vector<std::optional<VertexId>>> out;

  std::size_t size() const { return points.size(); }
};

namespace detail {

// Projection comparison for candidates a and b in cone i of v: negative when
// a is strictly closer. Exact for k=4; other k compare floats with a small
// relative slack so that ties fall back to the lexicographic rule.
inline int compare_projection(const Point& v, const Point& a, const Point& b, ConeIndex i, int k) {
  if (k == 4) {
    auto c = l1(v, a) <=> l1(v, b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  long double pa = projection_length(v, a, i, k);
  long double pb = projection_length(v, b, i, k);
  long double tol = 1e-15L * std::max({1.0L, std::fabs(pa), std::fabs(pb)});
  if (pa < pb - tol) return -1;
  if (pb < pa - tol) return 1;
  return 0;
}

// True when candidate a beats incumbent b under projection then (x, y) order.
inline bool better_candidate(const Point& v, const Point& a, const Point& b, ConeIndex i, int k) {
  int c = compare_projection(v, a, b, i, k);
  return c < 0 || (c == 0 && a < b);
}

}  // namespace detail

inline void check_distinct(const std::vector<Point>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      auto a = std::min(order[i], order[i - 1]);
      auto b = std::max(order[i], order[i - 1]);
      throw GraphError("duplicate points " + std::to_string(a) + " and " + std::to_string(b) + " at " +
                       points[a].to_string());
    }
  }
}

namespace detail {

// Coordinates over a common denominator, when every scaled value fits with
// enough headroom that L1 sums cannot overflow.
inline std::optional<std::vector<std::array<std::int64_t, 2>>> scaled_integers(const std::vector<Point>& pts) {
  mpz_class den = 1;
  for (const auto& p : pts) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.x.raw().get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.y.raw().get_den_mpz_t());
  }
  const mpz_class limit = mpz_class(1) << 60;
  std::vector<std::array<std::int64_t, 2>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    mpz_class x = p.x.raw().get_num() * (den / p.x.raw().get_den());
    mpz_class y = p.y.raw().get_num() * (den / p.y.raw().get_den());
    if (abs(x) >= limit || abs(y) >= limit) return std::nullopt;
    out.push_back({static_cast<std::int64_t>(x.get_si()), static_cast<std::int64_t>(y.get_si())});
  }
  return out;
}

inline int sgn64(std::int64_t v) { return (v > 0) - (v < 0); }

// Same selection rule as the rational scan, on scaled integers.
inline void build4_integer(ThetaGraph& g, const std::vector<std::array<std::int64_t, 2>>& c) {
  const auto n = c.size();
  std::vector<std::int64_t> best_d(4);
  for (VertexId v = 0; v < n; ++v) {
    auto& row = g.out[v];
    for (VertexId w = 0; w < n; ++w) {
      if (w == v) continue;
      std::int64_t dx = c[w][0] - c[v][0];
      std::int64_t dy = c[w][1] - c[v][1];
      ConeIndex i = cone4(sgn64(dx), sgn64(dy));
      std::int64_t d = (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
      if (!row[i] || d < best_d[i] || (d == best_d[i] && c[w] < c[*row[i]])) {
        row[i] = w;
        best_d[i] = d;
      }
    }
  }
}

}  // namespace detail

inline ThetaGraph build_theta_graph(std::vector<Point> points, int k) {
  if (k < 3) throw GraphError("k must be at least 3, got " + std::to_string(k));
  check_distinct(points);
  ThetaGraph g;
  g.k = k;
  g.points = std::move(points);
  const auto n = g.points.size();
  g.out.assign(n, std::vector<std::optional<VertexId>>(k));
  if (k == 4) {
    if (auto scaled = detail::scaled_integers(g.points)) {
      detail::build4_integer(g, *scaled);
      return g;
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    const Point& pv = g.points[v];
    auto& row = g.out[v];
    for (VertexId w = 0; w < n; ++w) {
      if (w == v) continue;
      const Point& pw = g.points[w];
      ConeIndex i = cone_index(pv, pw, k);
      if (!row[i] || detail::better_candidate(pv, pw, g.points[*row[i]], i, k)) row[i] = w;
    }
  }
  return g;
}

inline void check_vertex(const ThetaGraph& g, VertexId v) {
  if (v >= g.size())
    throw GraphError("vertex id " + std::to_string(v) + " out of range (n=" + std::to_string(g.size()) + ")");
}

inline std::optional<VertexId> neighbor(const ThetaGraph& g, VertexId v, ConeIndex i) {
  check_vertex(g, v);
  if (i < 0 || i >= g.k) throw GraphError("cone index " + std::to_string(i) + " out of range");
  return g.out[v][i];
}

// Brute-force re-derivation of every out-entry; reports each disagreement
// with the point that should have been chosen or that blocks the edge.
inline CheckReport validate_graph(const ThetaGraph& g) {
  CheckResult structure{"graph_structure"};
  CheckResult empty{"canonical_triangles_empty"};
  const auto n = g.size();
  if (g.k < 3) structure.witness({{"reason", "k below 3"}, {"k", g.k}});
  if (g.out.size() != n) structure.witness({{"reason", "out table size mismatch"}});
  for (VertexId v = 0; v < n && v < g.out.size(); ++v) {
    if (static_cast<int>(g.out[v].size()) != g.k) {
      structure.witness({{"reason", "row width mismatch"}, {"vertex", v}});
      continue;
    }
    for (ConeIndex i = 0; i < g.k; ++i) {
      const auto& e = g.out[v][i];
      if (e && (*e >= n || *e == v)) {
        structure.witness({{"reason", *e == v ? "self loop" : "dangling target"}, {"vertex", v}, {"cone", i}});
        continue;
      }
      std::optional<VertexId> best;
      for (VertexId w = 0; w < n; ++w) {
        if (w == v || cone_index(g.points[v], g.points[w], g.k) != i) continue;
        if (!best || detail::better_candidate(g.points[v], g.points[w], g.points[*best], i, g.k)) best = w;
      }
      if (!e && best) {
        empty.witness({{"vertex", v}, {"cone", i}, {"reason", "missing edge"}, {"witness", *best}});
      } else if (e && !best) {
        empty.witness({{"vertex", v}, {"cone", i}, {"reason", "edge in empty cone"}, {"target", *e}});
      } else if (e && *e != *best) {
        json w{{"vertex", v}, {"cone", i}, {"target", *e}, {"witness", *best}};
        if (cone_index(g.points[v], g.points[*e], g.k) != i) w["reason"] = "target outside cone";
        else w["reason"] = "closer point in cone";
        if (g.k == 4) {
          w["target_l1"] = rational_json(l1(g.points[v], g.points[*e]));
          w["witness_l1"] = rational_json(l1(g.points[v], g.points[*best]));
        }
        empty.witness(std::move(w));
      }
    }
  }
  CheckReport report;
  report.add(std::move(structure));
  report.add(std::move(empty));
  return report;
}

// ---------------------------------------------------------------------------
// JSON

inline json graph_to_json(const ThetaGraph& g) {
  json pts = json::array();
  for (const auto& p : g.points) {
    pts.push_back({integer_json(p.x.raw().get_num()), integer_json(p.x.raw().get_den()),
                   integer_json(p.y.raw().get_num()), integer_json(p.y.raw().get_den())});
  }
  json out = json::array();
  for (const auto& row : g.out) {
    json r = json::array();
    for (const auto& e : row) r.push_back(e ? json(*e) : json(nullptr));
    out.push_back(std::move(r));
  }
  return {{"k", g.k}, {"points", pts}, {"out", out}};
}

// Loads the stored edges verbatim (no rebuild), so corrupted graphs can be
// inspected by validate_graph.
inline ThetaGraph graph_from_json(const json& j) {
  ThetaGraph g;
  try {
    g.k = j.at("k").get<int>();
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 4) throw GraphError("point entry must have four integers");
      g.points.push_back({rational_from_json(p[0], p[1]), rational_from_json(p[2], p[3])});
    }
    for (const auto& row : j.at("out")) {
      std::vector<std::optional<VertexId>> r;
      for (const auto& e : row) {
        if (e.is_null()) r.emplace_back();
        else r.emplace_back(e.get<VertexId>());
      }
      g.out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw GraphError(std::string("malformed graph JSON: ") + e.what());
  }
  if (g.out.size() != g.points.size()) throw GraphError("graph JSON: out table does not match point count");
  return g;
}

}  // namespace thetaroute

#endif  // THETAROUTE_GRAPH_HPP
