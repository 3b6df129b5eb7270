#ifndef THETAROUTE_GEOMETRY_HPP
#define THETAROUTE_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetaroute/rational.hpp"

namespace thetaroute {

using Coord = Rational;

struct Point {
  Coord x;
  Coord y;

  friend bool operator==(const Point&, const Point&) = default;
  // Lexicographic (x, y); this is also the graph tie-break order.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }

  std::string to_string() const { return "(" + x.to_string() + ", " + y.to_string() + ")"; }
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.to_string(); }

using ConeIndex = int;

enum class Slope { Minus, Plus };

struct Diagonal {
  Point anchor;
  Slope slope;
};

// Sign of a point relative to a diagonal. Slope -1 lines use Below/Above,
// slope +1 lines use Right/Left; the numeric values coincide.
enum class Side : int { Below = -1, On = 0, Above = 1, Right = -1, Left = 1 };

enum class Quadrant { North, South, East, West };

inline const char* to_string(Slope s) { return s == Slope::Minus ? "minus" : "plus"; }

inline const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::North: return "north";
    case Quadrant::South: return "south";
    case Quadrant::East: return "east";
    case Quadrant::West: return "west";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Metrics

inline Coord l1(const Point& u, const Point& v) { return abs(u.x - v.x) + abs(u.y - v.y); }

inline Coord linf(const Point& u, const Point& v) {
  Coord dx = abs(u.x - v.x);
  Coord dy = abs(u.y - v.y);
  return dx < dy ? dy : dx;
}

inline Coord l2_squared(const Point& u, const Point& v) {
  Coord dx = u.x - v.x;
  Coord dy = u.y - v.y;
  return dx * dx + dy * dy;
}

inline long double l2(const Point& u, const Point& v) {
  return std::sqrt(l2_squared(u, v).to_long_double());
}

// ---------------------------------------------------------------------------
// Cones

namespace detail {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kConeEps = 1e-12L;

// Half-open membership for k=4 from coordinate signs alone.
inline ConeIndex cone4(int sx, int sy) {
  if (sx >= 0 && sy < 0) return 0;
  if (sx > 0 && sy >= 0) return 1;
  if (sx <= 0 && sy > 0) return 2;
  return 3;
}

// Direction of ray R_i for k=8 scaled to integers; all eight are rational.
inline std::array<int, 2> ray8(int i) {
  static constexpr int dirs[8][2] = {{0, -1}, {1, -1}, {1, 0}, {1, 1},
                                     {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};
  return {dirs[i % 8][0], dirs[i % 8][1]};
}

// Angle measured counter-clockwise from the negative y-axis, in [0, 2pi).
inline long double angle_of(const Point& d) {
  long double th = std::atan2(d.x.to_long_double(), -d.y.to_long_double());
  if (th < 0) th += 2 * kPi;
  return th;
}

}  // namespace detail

inline ConeIndex cone_index(const Point& origin, const Point& p, int k) {
  if (k < 1) throw std::domain_error("cone count must be positive");
  if (p == origin) throw std::domain_error("cone_index of the origin itself");
  Point d = p - origin;
  if (k == 4) return detail::cone4(d.x.sign(), d.y.sign());
  if (k == 8) {
    for (int i = 0; i < 8; ++i) {
      auto a = detail::ray8(i);
      auto b = detail::ray8(i + 1);
      Coord cross_a = Coord(a[0]) * d.y - Coord(a[1]) * d.x;
      Coord cross_b = d.x * Coord(b[1]) - d.y * Coord(b[0]);
      if (cross_a.sign() >= 0 && cross_b.sign() > 0) return i;
    }
    throw std::logic_error("k=8 cone scan fell through");
  }
  // Irrational ray directions: float fallback with a fixed epsilon. A
  // direction within eps of ray R_{i+1} is assigned to cone i+1.
  long double width = 2 * detail::kPi / k;
  long double th = detail::angle_of(d);
  auto i = static_cast<long long>(std::floor((th + detail::kConeEps) / width));
  return static_cast<ConeIndex>(((i % k) + k) % k);
}

// Closed cone membership. Exact for k=4 and k=8.
inline bool in_closed_cone(const Point& origin, const Point& p, ConeIndex i, int k) {
  if (p == origin) return true;
  Point d = p - origin;
  if (k == 4) {
    int sx = d.x.sign();
    int sy = d.y.sign();
    switch (i) {
      case 0: return sx >= 0 && sy <= 0;
      case 1: return sx >= 0 && sy >= 0;
      case 2: return sx <= 0 && sy >= 0;
      case 3: return sx <= 0 && sy <= 0;
      default: return false;
    }
  }
  if (k == 8) {
    auto a = detail::ray8(i);
    auto b = detail::ray8(i + 1);
    Coord cross_a = Coord(a[0]) * d.y - Coord(a[1]) * d.x;
    Coord cross_b = d.x * Coord(b[1]) - d.y * Coord(b[0]);
    return cross_a.sign() >= 0 && cross_b.sign() >= 0;
  }
  long double width = 2 * detail::kPi / k;
  long double th = detail::angle_of(d);
  long double lo = i * width;
  long double hi = (i + 1) * width;
  if (th >= lo - detail::kConeEps && th <= hi + detail::kConeEps) return true;
  // The last cone wraps to angle 2pi == 0.
  return i == k - 1 && th <= detail::kConeEps;
}

// For k=4, L1 distance inside the cone is sqrt(2) times the projection; the
// graph uses this to compare projections exactly.
inline Coord projection_key4(const Point& origin, const Point& p) { return l1(origin, p); }

inline long double projection_length(const Point& origin, const Point& p, ConeIndex i, int k) {
  if (i < 0 || i >= k) throw std::domain_error("cone index out of range");
  if (!in_closed_cone(origin, p, i, k))
    throw std::domain_error("point " + p.to_string() + " outside cone " + std::to_string(i));
  if (k == 4) return l1(origin, p).to_long_double() / std::sqrt(2.0L);
  long double phi = (i + 0.5L) * 2 * detail::kPi / k;
  Point d = p - origin;
  return d.x.to_long_double() * std::sin(phi) - d.y.to_long_double() * std::cos(phi);
}

// ---------------------------------------------------------------------------
// Diagonals

inline Side side_of(const Diagonal& diag, const Point& p) {
  Point d = p - diag.anchor;
  int s = diag.slope == Slope::Minus ? (d.x + d.y).sign() : (d.y - d.x).sign();
  return static_cast<Side>(s);
}

inline Point diagonal_projection(const Point& p, const Diagonal& diag) {
  Coord c, d;  // c = x + y on the slope -1 line, d = y - x on the slope +1 line
  if (diag.slope == Slope::Minus) {
    c = diag.anchor.x + diag.anchor.y;
    d = p.y - p.x;
  } else {
    c = p.x + p.y;
    d = diag.anchor.y - diag.anchor.x;
  }
  Coord half(1, 2);
  return {(c - d) * half, (c + d) * half};
}

inline Point vertical_projection_onto(const Point& p, const Diagonal& diag) {
  if (diag.slope == Slope::Minus) return {p.x, diag.anchor.x + diag.anchor.y - p.x};
  return {p.x, p.x + diag.anchor.y - diag.anchor.x};
}

// Quadrant of p around t. A point on a diagonal of t goes to the quadrant
// clockwise of that ray: NW ray -> North, NE -> East, SE -> South, SW -> West.
inline Quadrant quadrant_of(const Point& t, const Point& p) {
  if (p == t) throw std::domain_error("quadrant of the center point");
  Point d = p - t;
  int s1 = (d.x + d.y).sign();  // above the slope -1 diagonal
  int s2 = (d.y - d.x).sign();  // above the slope +1 diagonal
  if (s1 < 0 && s2 > 0) return Quadrant::West;
  if (s1 > 0 && s2 > 0) return Quadrant::North;
  if (s1 > 0 && s2 < 0) return Quadrant::East;
  if (s1 < 0 && s2 < 0) return Quadrant::South;
  if (s1 == 0) return s2 > 0 ? Quadrant::North : Quadrant::South;
  return s1 > 0 ? Quadrant::East : Quadrant::West;
}

inline bool in_closed_quadrant(const Point& t, const Point& p, Quadrant q) {
  Point d = p - t;
  int s1 = (d.x + d.y).sign();
  int s2 = (d.y - d.x).sign();
  switch (q) {
    case Quadrant::West: return s1 <= 0 && s2 >= 0;
    case Quadrant::North: return s1 >= 0 && s2 >= 0;
    case Quadrant::East: return s1 >= 0 && s2 <= 0;
    case Quadrant::South: return s1 <= 0 && s2 <= 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Triangles

inline Coord orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool strictly_inside_triangle(const Point& a, const Point& b, const Point& c, const Point& p) {
  int o = orient(a, b, c).sign();
  if (o == 0) return false;
  return orient(a, b, p).sign() == o && orient(b, c, p).sign() == o && orient(c, a, p).sign() == o;
}

// ---------------------------------------------------------------------------
// Symmetries of the square

struct Symmetry {
  int rotation = 0;  // multiples of 90 degrees counter-clockwise
  bool reflect = false;  // x -> -x, applied after the rotation

  friend bool operator==(const Symmetry&, const Symmetry&) = default;

  static Symmetry identity() { return {}; }
  // Fixed enumeration order: rotations 0..3, unreflected before reflected.
  static std::array<Symmetry, 8> all() {
    std::array<Symmetry, 8> out{};
    for (int r = 0; r < 4; ++r)
      for (int f = 0; f < 2; ++f) out[r * 2 + f] = {r, f == 1};
    return out;
  }
  // Whether slope -1 lines stay slope -1.
  bool preserves_slope() const { return (rotation + (reflect ? 1 : 0)) % 2 == 0; }
};

namespace detail {

using Mat2 = std::array<int, 4>;  // row-major [a b; c d]

inline Mat2 matrix_of(const Symmetry& s) {
  Mat2 m{1, 0, 0, 1};
  for (int i = 0; i < s.rotation; ++i) m = {-m[2], -m[3], m[0], m[1]};
  if (s.reflect) m = {-m[0], -m[1], m[2], m[3]};
  return m;
}

inline Symmetry from_matrix(const Mat2& m) {
  for (const auto& s : Symmetry::all())
    if (matrix_of(s) == m) return s;
  throw std::logic_error("matrix is not a symmetry of the square");
}

}  // namespace detail

inline Point apply_symmetry(const Symmetry& s, const Point& p) {
  auto m = detail::matrix_of(s);
  auto term = [](int c, const Coord& v) { return c == 0 ? Coord(0) : (c > 0 ? v : -v); };
  return {term(m[0], p.x) + term(m[1], p.y), term(m[2], p.x) + term(m[3], p.y)};
}

// compose(a, b) applies b first, then a.
inline Symmetry compose(const Symmetry& a, const Symmetry& b) {
  auto x = detail::matrix_of(a);
  auto y = detail::matrix_of(b);
  return detail::from_matrix({x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                              x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]});
}

inline Symmetry invert(const Symmetry& s) {
  for (const auto& c : Symmetry::all())
    if (compose(c, s) == Symmetry::identity()) return c;
  throw std::logic_error("symmetry without inverse");
}

// Translate t to the origin, then apply the symmetry.
struct Frame {
  Point t;
  Symmetry canon;

  Point operator()(const Point& p) const { return apply_symmetry(canon, p - t); }
};

}  // namespace thetaroute

#endif  // THETAROUTE_GEOMETRY_HPP
