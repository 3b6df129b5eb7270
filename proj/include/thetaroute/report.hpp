#ifndef THETAROUTE_REPORT_HPP
#define THETAROUTE_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "thetaroute/geometry.hpp"

namespace thetaroute {

using json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

// Integers that fit in int64 become JSON numbers, larger ones decimal strings.
inline json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

inline mpz_class integer_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad integer string in JSON");
    return z;
  }
  throw std::invalid_argument("expected an integer in JSON");
}

inline json rational_json(const Rational& r) {
  return json::array({integer_json(r.raw().get_num()), integer_json(r.raw().get_den())});
}

inline Rational rational_from_json(const json& num, const json& den) {
  mpz_class d = integer_from_json(den);
  if (d == 0) throw std::invalid_argument("zero denominator in JSON");
  return Rational(mpq_class(integer_from_json(num), d));
}

inline json point_json(const Point& p) { return {{"x", rational_json(p.x)}, {"y", rational_json(p.y)}}; }

struct CheckResult {
  std::string name;
  json witnesses = json::array();
  json quantities = json::array();

  bool pass() const { return witnesses.empty(); }

  void witness(json w) { witnesses.push_back(std::move(w)); }
  void quantity(json q) { quantities.push_back(std::move(q)); }

  json to_json() const {
    return {{"name", name}, {"pass", pass()}, {"witnesses", witnesses}, {"quantities", quantities}};
  }
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  void add(CheckResult r) { checks.push_back(std::move(r)); }

  void append(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    return {{"schema_version", kReportSchemaVersion}, {"pass", pass()}, {"checks", arr}};
  }
};

}  // namespace thetaroute

#endif  // THETAROUTE_REPORT_HPP
