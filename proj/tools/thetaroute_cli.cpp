#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "thetaroute/thetaroute.hpp"

using namespace thetaroute;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// I/O and input-shape problems; mapped to exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed9(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9Lf", v);
  return buf;
}

LabeledInstance read_instance(const std::string& path, std::size_t min_points = 2) {
  LabeledInstance inst;
  try {
    inst = load_points(path);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (inst.points.size() < min_points)
    throw InputError(path + ": need at least " + std::to_string(min_points) + " points, got " +
                     std::to_string(inst.points.size()));
  return inst;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

ThetaGraph build_or_throw(const std::vector<Point>& pts, int k) {
  try {
    return build_theta_graph(pts, k);
  } catch (const GraphError& e) {
    throw InputError(e.what());
  }
}

void check_id(VertexId v, std::size_t n, const char* what) {
  if (v >= n) throw InputError(std::string(what) + " id " + std::to_string(v) + " out of range (n=" + std::to_string(n) + ")");
}

// Graph checks plus, per pair, the trace checkers and the oracle sandwich.
struct PairOutcome {
  json j;
  bool pass = true;
};

PairOutcome verify_pair(const ThetaGraph& g, VertexId s, VertexId t, const std::vector<long double>& dist) {
  PairOutcome o;
  o.j = {{"source", s}, {"target", t}};
  RouteTrace tr;
  try {
    tr = route(g, s, t);
  } catch (const std::exception& e) {
    o.pass = false;
    o.j["error"] = e.what();
    return o;
  }
  CheckReport rep = verify_trace(g, tr);
  CheckResult sandwich{"oracle_sandwich"};
  long double len = path_length(g, tr);
  long double st = l2(g.points[s], g.points[t]);
  sandwich.quantity({{"shortest", static_cast<double>(dist[t])}, {"routed", static_cast<double>(len)},
                     {"l2_st", static_cast<double>(st)}});
  if (!within_rel(dist[t], len)) sandwich.witness({{"link", "shortest <= routed"}});
  if (!within_rel(len, kRatioBound * st)) sandwich.witness({{"link", "routed <= 17 L2(s,t)"}});
  rep.add(std::move(sandwich));
  o.pass = rep.pass();
  o.j["steps"] = tr.steps.size();
  o.j["ratio"] = static_cast<double>(len / st);
  o.j["report"] = rep.to_json();
  return o;
}

void print_failures(const json& pair) {
  std::cerr << "FAIL pair " << pair["source"] << "->" << pair["target"];
  if (pair.contains("error")) {
    std::cerr << ": " << pair["error"].get<std::string>() << "\n";
    return;
  }
  std::cerr << ":";
  for (const auto& c : pair["report"]["checks"])
    if (!c["pass"].get<bool>()) std::cerr << " " << c["name"].get<std::string>() << " " << c["witnesses"].dump();
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta-4 routing: build, route, verify, measure"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a point file");
  std::string gen_kind = "uniform", gen_out;
  std::size_t gen_n = 50;
  std::uint64_t gen_seed = 0;
  std::string gen_bbox = "1000", gen_eps = "1/10";
  gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"uniform", "cluster", "grid", "lowerbound"}));
  gen->add_option("--n", gen_n)->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  gen->add_option("--seed", gen_seed);
  gen->add_option("--bbox", gen_bbox);
  gen->add_option("--epsilon", gen_eps);
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // build
  auto* build = app.add_subcommand("build", "build a Theta_k graph and write it as JSON");
  std::string build_in, build_out;
  int build_k = 4;
  build->add_option("--input", build_in)->required();
  build->add_option("--k", build_k)->check(CLI::Range(3, 1000));
  build->add_option("--out", build_out);

  // route
  auto* rt = app.add_subcommand("route", "route one pair with the Theta_4 algorithm");
  std::string rt_in, rt_trace, rt_svg;
  std::optional<VertexId> rt_s, rt_t;
  rt->add_option("--input", rt_in)->required();
  rt->add_option("--source", rt_s);
  rt->add_option("--target", rt_t);
  rt->add_option("--trace", rt_trace);
  rt->add_option("--svg", rt_svg);

  // verify
  auto* vf = app.add_subcommand("verify", "validate the graph and check every lemma on routed traces");
  std::string vf_in, vf_graph, vf_report;
  std::optional<VertexId> vf_s, vf_t;
  bool vf_all = false;
  vf->add_option("--input", vf_in);
  vf->add_option("--graph", vf_graph, "graph JSON, loaded as stored");
  vf->add_option("--source", vf_s);
  vf->add_option("--target", vf_t);
  vf->add_flag("--all-pairs", vf_all);
  vf->add_option("--report", vf_report);

  // ratio
  auto* ra = app.add_subcommand("ratio", "maximum spanning and routing ratios over all ordered pairs");
  std::string ra_in, ra_alg = "theta4";
  bool ra_span = false, ra_route = false;
  int ra_k = 4;
  ra->add_option("--input", ra_in)->required();
  ra->add_flag("--spanning", ra_span);
  ra->add_flag("--routing", ra_route);
  ra->add_option("--algorithm", ra_alg)->check(CLI::IsMember({"theta4", "cone"}));
  ra->add_option("--k", ra_k)->check(CLI::Range(3, 1000));

  // lowerbound
  auto* lb = app.add_subcommand("lowerbound", "build the lower-bound instance, route it, compare with 17-44e");
  std::string lb_eps = "1/10", lb_out, lb_trace, lb_svg;
  lb->add_option("--epsilon", lb_eps);
  lb->add_option("--out", lb_out, "write the point file");
  lb->add_option("--trace", lb_trace);
  lb->add_option("--svg", lb_svg);

  // render
  auto* rd = app.add_subcommand("render", "draw a trace as SVG");
  std::string rd_trace, rd_points, rd_svg;
  bool rd_tri = false;
  rd->add_option("--trace", rd_trace);
  rd->add_option("--points", rd_points)->required();
  rd->add_option("--svg", rd_svg)->required();
  rd->add_flag("--show-triangles", rd_tri);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      Coord bbox, eps;
      try {
        bbox = Coord::parse(gen_bbox);
        eps = Coord::parse(gen_eps);
      } catch (const std::exception& e) {
        throw InputError(std::string("bad number: ") + e.what());
      }
      InstanceSpec spec;
      spec.kind = gen_kind == "uniform"   ? InstanceKind::Uniform
                  : gen_kind == "cluster" ? InstanceKind::Cluster
                  : gen_kind == "grid"    ? InstanceKind::Grid
                                          : InstanceKind::LowerBound;
      spec.n = gen_n;
      spec.seed = gen_seed;
      spec.bbox = bbox;
      spec.epsilon = eps;
      LabeledInstance inst;
      try {
        inst = generate(spec);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      if (gen_out.empty()) write_points(std::cout, inst.points, inst.source, inst.target);
      else save_points(gen_out, inst.points, inst.source, inst.target);
      return kOk;
    }

    if (*build) {
      auto inst = read_instance(build_in, 1);
      auto g = build_or_throw(inst.points, build_k);
      std::string text = graph_to_json(g).dump() + "\n";
      if (build_out.empty()) std::cout << text;
      else write_text(build_out, text);
      return kOk;
    }

    if (*rt) {
      auto inst = read_instance(rt_in);
      VertexId s = rt_s.value_or(inst.source), t = rt_t.value_or(inst.target);
      check_id(s, inst.points.size(), "source");
      check_id(t, inst.points.size(), "target");
      auto g = build_or_throw(inst.points, 4);
      RouteTrace tr = route(g, s, t);
      long double len = path_length(g, tr);
      long double st = l2(g.points[s], g.points[t]);
      std::size_t phases = tr.steps.empty() ? 0 : decompose_phases(tr).phases.size();
      std::cout << "length: " << fixed9(len) << "\n";
      std::cout << "l2(s,t): " << fixed9(st) << "\n";
      std::cout << "ratio: " << (s == t ? std::string("n/a") : fixed9(len / st)) << "\n";
      std::cout << "steps: " << tr.steps.size() << "\n";
      std::cout << "phases: " << phases << "\n";
      if (!rt_trace.empty()) write_text(rt_trace, trace_to_json(tr).dump(2) + "\n");
      if (!rt_svg.empty()) write_text(rt_svg, render_svg(g.points, tr));
      return kOk;
    }

    if (*vf) {
      ThetaGraph g;
      LabeledInstance inst;
      if (!vf_graph.empty()) {
        try {
          g = graph_from_json(read_json(vf_graph));
        } catch (const GraphError& e) {
          throw InputError(e.what());
        }
        if (g.size() < 2) throw InputError("need at least 2 points");
        inst.points = g.points;
        auto ext = extreme_pair(g.points);
        inst.source = ext.first;
        inst.target = ext.second;
      } else {
        if (vf_in.empty()) throw InputError("verify needs --input or --graph");
        inst = read_instance(vf_in);
        g = build_or_throw(inst.points, 4);
      }
      if (g.k != 4) throw InputError("verify needs a Theta_4 graph");
      CheckReport graph_rep = validate_graph(g);
      bool ok = graph_rep.pass();
      if (!ok) {
        for (const auto& c : graph_rep.checks)
          if (!c.pass()) std::cerr << "FAIL graph " << c.name << " " << c.witnesses.dump() << "\n";
      }
      json pairs = json::array();
      std::size_t checked = 0, failed = 0;
      auto run_source = [&](VertexId s, std::optional<VertexId> only) {
        auto dist = dijkstra(g, s).first;
        for (VertexId t = 0; t < g.size(); ++t) {
          if (t == s || (only && t != *only)) continue;
          PairOutcome o = verify_pair(g, s, t, dist);
          ++checked;
          if (!o.pass) {
            ++failed;
            print_failures(o.j);
          }
          pairs.push_back(std::move(o.j));
        }
      };
      if (vf_all) {
        for (VertexId s = 0; s < g.size(); ++s) run_source(s, std::nullopt);
      } else {
        VertexId s = vf_s.value_or(inst.source), t = vf_t.value_or(inst.target);
        check_id(s, g.size(), "source");
        check_id(t, g.size(), "target");
        if (s == t) throw InputError("source and target coincide");
        run_source(s, t);
      }
      ok = ok && failed == 0;
      std::cout << "graph: " << (graph_rep.pass() ? "pass" : "FAIL") << "\n";
      std::cout << "pairs: " << checked << " checked, " << failed << " failed\n";
      std::cout << (ok ? "all checks passed" : "checks FAILED") << "\n";
      if (!vf_report.empty()) {
        json out{{"schema_version", kReportSchemaVersion},
                 {"pass", ok},
                 {"graph", graph_rep.to_json()},
                 {"pairs", pairs}};
        write_text(vf_report, out.dump(1) + "\n");
      }
      return ok ? kOk : kCheckFailed;
    }

    if (*ra) {
      if (!ra_span && !ra_route) ra_span = ra_route = true;
      auto inst = read_instance(ra_in);
      int k = ra_alg == "cone" ? ra_k : 4;
      if (ra_alg == "theta4" && ra_k != 4) throw InputError("--algorithm theta4 needs --k 4");
      auto g = build_or_throw(inst.points, k);
      bool ok = true;
      if (ra_span) {
        PairRatio sp = spanning_ratio(g);
        std::cout << "spanning ratio: " << fixed9(sp.ratio) << " (" << sp.source << " -> " << sp.target << ")\n";
      }
      if (ra_route) {
        Router r = ra_alg == "cone" ? Router(cone_route) : Router(route);
        PairRatio rr = max_routing_ratio(g, r);
        std::cout << "routing ratio (" << ra_alg << ", k=" << k << "): " << fixed9(rr.ratio) << " (" << rr.source
                  << " -> " << rr.target << ")\n";
        if (ra_alg == "theta4" && !within_rel(rr.ratio, kRatioBound)) {
          std::cerr << "routing ratio exceeds 17\n";
          ok = false;
        }
        if (ra_alg == "cone" && k >= 7) {
          long double bound = 1 / (1 - 2 * std::sin(std::acos(-1.0L) / k));
          std::cout << "cone bound: " << fixed9(bound) << "\n";
          if (rr.ratio > bound + 1e-6L) {
            std::cerr << "cone routing ratio exceeds its bound\n";
            ok = false;
          }
        }
      }
      return ok ? kOk : kCheckFailed;
    }

    if (*lb) {
      Coord eps;
      try {
        eps = Coord::parse(lb_eps);
      } catch (const std::exception& e) {
        throw InputError(std::string("bad epsilon: ") + e.what());
      }
      LabeledInstance inst;
      try {
        inst = gen_lower_bound(eps);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      auto g = build_theta_graph(inst.points, 4);
      RouteTrace tr = route(g, inst.source, inst.target);
      long double ratio = routing_ratio(g, tr);
      long double target = inst.expected_ratio->to_long_double();
      CheckReport rep = verify_trace(g, tr);
      std::cout << "epsilon: " << eps << "\n";
      std::cout << "points: " << g.size() << "\n";
      std::cout << "steps: " << tr.steps.size() << "\n";
      std::cout << "phases: " << decompose_phases(tr).phases.size() << "\n";
      std::cout << "ratio: " << fixed9(ratio) << "\n";
      std::cout << "17-44e: " << fixed9(target) << "\n";
      std::cout << "shortfall: " << fixed9(target - ratio) << "\n";
      std::cout << "checks: " << (rep.pass() ? "pass" : "FAIL") << "\n";
      if (!lb_out.empty()) save_points(lb_out, inst.points, inst.source, inst.target);
      if (!lb_trace.empty()) write_text(lb_trace, trace_to_json(tr).dump(2) + "\n");
      if (!lb_svg.empty()) write_text(lb_svg, render_svg(g.points, tr));
      return rep.pass() && within_rel(ratio, kRatioBound) ? kOk : kCheckFailed;
    }

    if (*rd) {
      auto inst = read_instance(rd_points, 1);
      std::optional<RouteTrace> tr;
      if (!rd_trace.empty()) {
        try {
          tr = trace_from_json(read_json(rd_trace));
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        }
        check_id(tr->source, inst.points.size(), "trace source");
        check_id(tr->target, inst.points.size(), "trace target");
        for (const auto& s : tr->steps) {
          check_id(s.from, inst.points.size(), "trace step");
          check_id(s.to, inst.points.size(), "trace step");
        }
      }
      SvgOptions opt;
      opt.show_triangles = rd_tri;
      write_text(rd_svg, render_svg(inst.points, tr, opt));
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
