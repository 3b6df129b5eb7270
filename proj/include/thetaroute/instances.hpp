#ifndef THETAROUTE_INSTANCES_HPP
#define THETAROUTE_INSTANCES_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetaroute/geometry.hpp"
#include "thetaroute/graph.hpp"

namespace thetaroute {

enum class InstanceKind { Uniform, Cluster, Grid, LowerBound };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::Uniform;
  std::size_t n = 2;
  std::uint64_t seed = 0;
  Coord bbox = Coord(1000);
  Coord epsilon = Coord(1, 10);
};

struct LabeledInstance {
  std::vector<Point> points;
  VertexId source = 0;
  VertexId target = 0;
  std::optional<Coord> expected_ratio;
};

// Lowest-index pair at maximum Euclidean distance.
inline std::pair<VertexId, VertexId> extreme_pair(const std::vector<Point>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("need at least two points");
  std::pair<VertexId, VertexId> best{0, 1};
  Coord d = l2_squared(pts[0], pts[1]);
  for (VertexId i = 0; i < pts.size(); ++i)
    for (VertexId j = i + 1; j < pts.size(); ++j) {
      Coord c = l2_squared(pts[i], pts[j]);
      if (c > d) {
        d = c;
        best = {i, j};
      }
    }
  return best;
}

namespace detail {

inline constexpr std::uint64_t kLattice = 1u << 20;

// Raw engine output reduced modulo the range; std distributions are not
// portable across standard libraries, the engine sequence is.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t range) { return rng() % range; }

inline LabeledInstance finish(std::vector<Point> pts) {
  LabeledInstance inst;
  inst.points = std::move(pts);
  std::tie(inst.source, inst.target) = extreme_pair(inst.points);
  return inst;
}

}  // namespace detail

inline LabeledInstance gen_uniform(std::size_t n, std::uint64_t seed, const Coord& bbox = Coord(1000)) {
  if (n < 2) throw std::invalid_argument("gen_uniform needs n >= 2");
  if (bbox.sign() <= 0) throw std::invalid_argument("bbox must be positive");
  std::mt19937_64 rng(seed);
  Coord scale = bbox / Coord(static_cast<std::int64_t>(detail::kLattice));
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  std::vector<Point> pts;
  while (pts.size() < n) {
    auto x = detail::draw(rng, detail::kLattice);
    auto y = detail::draw(rng, detail::kLattice);
    if (!seen.insert({x, y}).second) continue;
    pts.push_back({Coord(static_cast<std::int64_t>(x)) * scale, Coord(static_cast<std::int64_t>(y)) * scale});
  }
  return detail::finish(std::move(pts));
}

// Points around a few seeded centers, each within bbox/20 of its center.
inline LabeledInstance gen_cluster(std::size_t n, std::uint64_t seed, const Coord& bbox = Coord(1000),
                                   std::size_t clusters = 4) {
  if (n < 2) throw std::invalid_argument("gen_cluster needs n >= 2");
  if (clusters == 0) throw std::invalid_argument("need at least one cluster");
  std::mt19937_64 rng(seed);
  const std::uint64_t L = detail::kLattice;
  const std::uint64_t spread = L / 20;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> centers;
  for (std::size_t i = 0; i < clusters; ++i)
    centers.emplace_back(spread + detail::draw(rng, L - 2 * spread), spread + detail::draw(rng, L - 2 * spread));
  Coord scale = bbox / Coord(static_cast<std::int64_t>(L));
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  std::vector<Point> pts;
  while (pts.size() < n) {
    const auto& c = centers[pts.size() % clusters];
    auto x = c.first - spread + detail::draw(rng, 2 * spread);
    auto y = c.second - spread + detail::draw(rng, 2 * spread);
    if (!seen.insert({x, y}).second) continue;
    pts.push_back({Coord(static_cast<std::int64_t>(x)) * scale, Coord(static_cast<std::int64_t>(y)) * scale});
  }
  return detail::finish(std::move(pts));
}

// Row-major integer grid; full of cone-boundary and distance ties on purpose.
inline LabeledInstance gen_grid(std::size_t n, const Coord& bbox = Coord(1000)) {
  if (n < 2) throw std::invalid_argument("gen_grid needs n >= 2");
  std::size_t side = 1;
  while (side * side < n) ++side;
  Coord step = bbox / Coord(static_cast<std::int64_t>(side));
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back({Coord(static_cast<std::int64_t>(i % side)) * step, Coord(static_cast<std::int64_t>(i / side)) * step});
  return detail::finish(std::move(pts));
}

// ---------------------------------------------------------------------------
// Lower-bound family

inline Coord lower_bound_epsilon_max() { return Coord(1, 8); }

namespace detail {

inline void chain(std::vector<Point>& out, const Point& a, const Point& b, std::int64_t steps, bool include_first) {
  for (std::int64_t i = include_first ? 0 : 1; i <= steps; ++i) {
    Coord f(i, steps);
    out.push_back({a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f});
  }
}

inline std::int64_t ceil_div(const Coord& num, const Coord& den) {
  mpq_class q = num.raw() / den.raw();
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c.get_si();
}

}  // namespace detail

// Reconstruction of the adversarial spiral, built with t at the origin and
// s = (-1, 0) in the canonical frame, then reflected across the slope -1
// diagonal so that s - t = (0, 1) falls in cone 2 under the half-open rule.
//
// Path realised by the router (canonical frame):
//   sweep up the left side from s to p1;
//   West: greedy chain down to just above the x-axis, one long greedy edge
//         to the bottom, sweep right along the bottom;
//   South: one long greedy edge up the right side to u, sweep left along the top;
//   North: greedy chain right to just left of the y-axis, one long greedy edge
//          to qN near the top right, sweep down a staircase to t.
// Every spacing below is a fixed multiple of epsilon, so the point count
// grows like 1/epsilon.
inline LabeledInstance gen_lower_bound(const Coord& epsilon) {
  if (epsilon.sign() <= 0 || epsilon > lower_bound_epsilon_max())
    throw std::invalid_argument("epsilon must lie in (0, 1/8], got " + epsilon.to_string());
  const Coord e = epsilon;
  const Coord one(1);
  const Coord nudge = e / Coord(64);
  auto frac = [&](std::int64_t p, std::int64_t q) { return e * Coord(p, q); };

  std::vector<Point> pts;
  const Point s{-one, Coord(0)};
  const Point t{Coord(0), Coord(0)};

  // Corners and anchors, top to bottom.
  const Point bK{one - frac(7, 4), -one + frac(13, 8)};
  const Point u{bK.x - nudge, bK.x - nudge - frac(1, 2)};
  const Coord gap = frac(1, 2);  // top row to North chain
  const Coord rR_y = u.y - frac(1, 8);
  const Coord c1_y = rR_y - gap;
  const Point c1{-c1_y + frac(1, 16), c1_y};
  const Point rR{c1.x - nudge, rR_y};
  const Point cJ{-frac(1, 4), c1.y - frac(1, 32)};
  const Coord rise = frac(1, 4);  // qN above the slope +1 diagonal of t
  const Point qN{cJ.y - frac(1, 32) - rise, cJ.y - frac(1, 32)};
  const Point p1{-one + e, c1.y - e};

  // Initial sweep s -> p1, finishing with a short nearly flat step.
  const Point a_end{-one + frac(1, 4), p1.y - e / Coord(1000)};
  detail::chain(pts, s, a_end, detail::ceil_div(Coord(3), e), true);
  // West greedy chain and its long edge to the bottom row.
  const Point dJ{p1.x + frac(1, 8), frac(1, 8)};
  detail::chain(pts, p1, dJ, detail::ceil_div(Coord(2), e), true);
  const Point qW{dJ.x + nudge, -one + frac(3, 2)};
  detail::chain(pts, qW, bK, detail::ceil_div(Coord(4), e), true);
  // South: u, then the top row back to rR in steps shorter than the gap.
  pts.push_back(u);
  detail::chain(pts, u, rR, detail::ceil_div((u.x - rR.x) * Coord(3), gap), false);
  // North greedy chain and its target.
  detail::chain(pts, c1, cJ, detail::ceil_div(Coord(2), e), true);
  pts.push_back(qN);
  // Staircase from qN to t inside the band x - y in (-rise, u.x - u.y).
  const Coord h = frac(1, 2);
  const Coord tau = h / Coord(32);
  const Coord centre = frac(1, 8);
  for (Coord x = qN.x - h;; x -= h) {
    Point corner{x, x - (centre - h / Coord(2))};
    Point drop{x - tau, corner.y - h + tau};
    bool added = false;
    for (const Point& w : {corner, drop}) {
      if (w.x.sign() > 0 && (w.x + w.y).sign() > 0) {
        pts.push_back(w);
        added = true;
      }
    }
    if (!added) break;
  }
  pts.push_back(t);

  // Reflect across y = -x so s - t = (0, 1).
  for (auto& p : pts) p = {-p.y, -p.x};
  check_distinct(pts);

  LabeledInstance inst;
  inst.points = std::move(pts);
  inst.source = 0;
  inst.target = inst.points.size() - 1;
  inst.expected_ratio = Coord(17) - Coord(44) * e;
  return inst;
}

inline LabeledInstance generate(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::Uniform: return gen_uniform(spec.n, spec.seed, spec.bbox);
    case InstanceKind::Cluster: return gen_cluster(spec.n, spec.seed, spec.bbox);
    case InstanceKind::Grid: return gen_grid(spec.n, spec.bbox);
    case InstanceKind::LowerBound: return gen_lower_bound(spec.epsilon);
  }
  throw std::logic_error("unknown instance kind");
}

// ---------------------------------------------------------------------------
// Point files

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool parse_directive(const std::string& line, const std::string& key, std::size_t lineno,
                            std::optional<VertexId>& slot) {
  if (line.rfind(key + ":", 0) != 0) return false;
  std::string rest = trim(line.substr(key.size() + 1));
  if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(lineno, "bad " + key + " directive '" + line + "'");
  if (slot) throw ParseError(lineno, "repeated " + key + " directive");
  slot = std::stoull(rest);
  return true;
}

}  // namespace detail

// "X Y" per line; '#' comments; optional "source: i" and "target: j".
inline LabeledInstance parse_points(std::istream& in) {
  LabeledInstance inst;
  std::optional<VertexId> src, dst;
  std::map<Point, std::size_t> first_line;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (detail::parse_directive(line, "source", lineno, src)) continue;
    if (detail::parse_directive(line, "target", lineno, dst)) continue;
    std::istringstream ss(line);
    std::string xs, ys, extra;
    if (!(ss >> xs >> ys) || (ss >> extra)) throw ParseError(lineno, "expected two coordinates, got '" + line + "'");
    Point p;
    try {
      p = {Coord::parse(xs), Coord::parse(ys)};
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    auto [it, fresh] = first_line.emplace(p, lineno);
    if (!fresh)
      throw ParseError(lineno, "duplicate point " + p.to_string() + " (first on line " + std::to_string(it->second) + ")");
    inst.points.push_back(p);
  }
  if (inst.points.size() >= 2) {
    auto ext = extreme_pair(inst.points);
    inst.source = src.value_or(ext.first);
    inst.target = dst.value_or(ext.second);
  } else {
    inst.source = src.value_or(0);
    inst.target = dst.value_or(0);
  }
  if ((src && *src >= inst.points.size()) || (dst && *dst >= inst.points.size()))
    throw ParseError(lineno, "source/target index out of range");
  return inst;
}

inline LabeledInstance load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_points(in);
}

inline void write_points(std::ostream& out, const std::vector<Point>& pts, std::optional<VertexId> source = {},
                         std::optional<VertexId> target = {}) {
  if (source) out << "source: " << *source << "\n";
  if (target) out << "target: " << *target << "\n";
  for (const auto& p : pts) out << p.x.to_string() << " " << p.y.to_string() << "\n";
}

inline void save_points(const std::string& path, const std::vector<Point>& pts, std::optional<VertexId> source = {},
                        std::optional<VertexId> target = {}) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_points(out, pts, source, target);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace thetaroute

#endif  // THETAROUTE_INSTANCES_HPP
