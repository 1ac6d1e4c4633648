// Command-line front end: every verb loads JSON documents, runs one library
// entry point, and reports either human-readable lines or a canonical JSON
// envelope (--json). Exit codes: 0 success/feasible, 1 caller mistake,
// 2 provably infeasible or failed check.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adtnc/coding.hpp"
#include "adtnc/delay.hpp"
#include "adtnc/erasure.hpp"
#include "adtnc/error.hpp"
#include "adtnc/json_io.hpp"
#include "adtnc/mincut.hpp"
#include "adtnc/rng.hpp"

namespace adtnc {
namespace {

void emit(const Json& envelope) { std::cout << envelope.dump(2) << "\n"; }

int resolve_node(const Network& net, const std::string& name) {
  auto idx = net.node_index(name);
  if (!idx) throw UsageError("unknown node \"" + name + "\"");
  return *idx;
}

std::string pattern_text(const FailurePattern& pat) {
  if (pat.edges.empty()) return "{no failures}";
  std::ostringstream out;
  out << "{";
  for (size_t i = 0; i < pat.edges.size(); ++i) {
    if (i) out << ", ";
    out << pat.edges[i].first + 1 << "->" << pat.edges[i].second + 1;
  }
  out << "}";
  return out.str();
}

void print_receivers(const Network& net, const CodeVerdict& v) {
  for (const auto& r : v.receivers) {
    std::cout << "  " << net.node(r.dest_node).name << ": rank " << r.achieved_rank << "/"
              << r.required;
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
}

int run_validate(const std::string& net_path, bool as_json) {
  Network net = load_network(net_path);
  ValidationReport rep = net.validate();
  if (as_json) {
    Json issues = Json::array();
    for (const auto& i : rep.issues)
      issues.push_back({{"code", i.code}, {"message", i.message}});
    emit(report_envelope(
        "validate", {{"valid", rep.valid}, {"acyclic", rep.acyclic}, {"issues", issues}}));
  } else {
    std::cout << (rep.valid ? "valid" : "invalid") << "\n";
    if (!rep.acyclic) std::cout << "  the port graph has a directed cycle\n";
    for (const auto& i : rep.issues)
      std::cout << "  [" << i.code << "] " << i.message << "\n";
  }
  return rep.valid ? 0 : 2;
}

int run_mincut(const std::string& net_path, const std::string& source_name,
               const std::string& dest_name, const std::string& method_str, int q, int trials,
               uint64_t seed, bool as_json) {
  Network net = load_network(net_path);
  if (q != 0) net = net.with_field(Gf::from_order(uint64_t(q)));
  std::vector<int> from, to;
  if (source_name.empty())
    for (const auto& s : net.sources()) from.push_back(s.node);
  else
    from.push_back(resolve_node(net, source_name));
  if (dest_name.empty())
    for (const auto& d : net.dests()) to.push_back(d.node);
  else
    to.push_back(resolve_node(net, dest_name));
  std::vector<std::pair<int, int>> pairs;
  for (int s : from)
    for (int t : to) pairs.push_back({s, t});
  if (pairs.empty()) throw UsageError("no source/destination pair to cut");

  std::optional<CutMethod> force;
  if (method_str == "enumeration") force = CutMethod::enumeration;
  if (method_str == "algebraic") force = CutMethod::algebraic;

  SplitRng rng(seed);
  std::vector<CutReport> reports = mincut_all_pairs(net, pairs, force, trials, rng);

  if (as_json) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(cut_to_json(net, r));
    emit(report_envelope("mincut", {{"pairs", arr}}, seed));
  } else {
    for (const auto& r : reports) {
      std::cout << net.node(r.s_node).name << " -> " << net.node(r.t_node).name << ": "
                << r.value;
      if (r.method == CutMethod::enumeration) {
        std::cout << " (enumeration; omega {";
        for (size_t i = 0; i < r.omega.size(); ++i)
          std::cout << (i ? ", " : "") << net.node(r.omega[i]).name;
        std::cout << "})";
      } else {
        std::cout << " (algebraic; " << r.trials << " trials; per-trial confidence "
                  << r.confidence << ")";
      }
      if (r.low_field_warning) std::cout << " [low field warning]";
      std::cout << "\n";
    }
  }
  return 0;
}

int run_code(const std::string& net_path, int q, int trials, uint64_t seed,
             const std::string& out_path, bool as_json) {
  Network net = load_network(net_path);
  SplitRng rng(seed);
  CodeResult res = random_code(net, q, trials, rng);
  if (!out_path.empty() && res.verdict.feasible) {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    out << code_to_json(res.code).dump(2) << "\n";
  }
  if (as_json) {
    Json result = {{"feasible", res.verdict.feasible},
                   {"stats", stats_to_json(res.stats)},
                   {"receivers", receivers_to_json(res.net, res.verdict)}};
    if (res.verdict.feasible) result["assignment"] = code_to_json(res.code);
    emit(report_envelope("code", result, seed));
  } else {
    if (res.verdict.feasible)
      std::cout << "feasible at trial " << res.stats.success_trial << " (q " << res.stats.q
                << ", per-draw bound " << res.stats.bound << ")\n";
    else
      std::cout << "no feasible draw in " << res.stats.trials_run << " trials (q "
                << res.stats.q << ", per-draw bound " << res.stats.bound << ")\n";
    print_receivers(res.net, res.verdict);
    if (!out_path.empty() && res.verdict.feasible)
      std::cout << "assignment written to " << out_path << "\n";
  }
  return res.verdict.feasible ? 0 : 2;
}

int run_verify(const std::string& net_path, const std::string& code_path, int q,
               bool as_json) {
  Network net = load_network(net_path);
  if (q != 0) net = net.with_field(Gf::from_order(uint64_t(q)));
  CodeAssignment code = load_code(code_path);
  CodeVerdict v = verify(net, code);
  if (as_json) {
    emit(report_envelope(
        "verify", {{"feasible", v.feasible}, {"receivers", receivers_to_json(net, v)}}));
  } else {
    std::cout << (v.feasible ? "feasible" : "infeasible") << "\n";
    print_receivers(net, v);
  }
  return v.feasible ? 0 : 2;
}

int run_erasure(const std::string& net_path, bool want_static, bool want_average,
                bool want_feasibility, int q, int trials, int samples,
                const std::string& source_name, const std::string& dest_name, uint64_t seed,
                bool as_json) {
  if (int(want_static) + int(want_average) + int(want_feasibility) != 1)
    throw UsageError("pick exactly one analysis: --static, --average, or --feasibility");
  Network net = load_network(net_path);

  if (want_static) {
    SplitRng rng(seed);
    StaticReport rep = static_solution(net, q, trials, rng);
    if (as_json) {
      Json checks = Json::array();
      for (const auto& c : rep.checks) {
        Json edges = Json::array();
        for (auto [a, b] : c.pattern.edges) edges.push_back({a + 1, b + 1});
        checks.push_back({{"edges", edges},
                          {"probability", c.probability},
                          {"feasible", c.verdict.feasible}});
      }
      Json result = {{"found", rep.found},
                     {"stats", stats_to_json(rep.stats)},
                     {"checks", checks}};
      if (rep.found) result["assignment"] = code_to_json(rep.code);
      emit(report_envelope("erasure", result, seed));
    } else {
      if (rep.found)
        std::cout << "static solution found at trial " << rep.stats.success_trial << " (q "
                  << rep.stats.q << ")\n";
      else
        std::cout << "no static solution in " << rep.stats.trials_run << " trials (q "
                  << rep.stats.q << ")\n";
      for (const auto& c : rep.checks)
        std::cout << "  " << pattern_text(c.pattern) << ": p " << c.probability << " "
                  << (c.verdict.feasible ? "ok" : "fails") << "\n";
    }
    return rep.found ? 0 : 2;
  }

  if (want_average) {
    int s, t;
    if (!source_name.empty())
      s = resolve_node(net, source_name);
    else if (net.sources().size() == 1)
      s = net.sources()[0].node;
    else
      throw UsageError("several sources declared; pick one with --source");
    if (!dest_name.empty())
      t = resolve_node(net, dest_name);
    else if (net.dests().size() == 1)
      t = net.dests()[0].node;
    else
      throw UsageError("several destinations declared; pick one with --dest");

    if (samples > 0) {
      SplitRng rng(seed);
      MonteCarloCut mc = time_average_mincut_mc(net, s, t, samples, rng);
      if (as_json)
        emit(report_envelope("erasure",
                             {{"source", net.node(s).name},
                              {"dest", net.node(t).name},
                              {"mean", mc.mean},
                              {"std_error", mc.std_error},
                              {"samples", mc.samples}},
                             seed));
      else
        std::cout << "expected cut " << net.node(s).name << " -> " << net.node(t).name
                  << ": " << mc.mean << " (std error " << mc.std_error << ", " << mc.samples
                  << " samples)\n";
    } else {
      double mean = time_average_mincut(net, s, t);
      if (as_json)
        emit(report_envelope("erasure", {{"source", net.node(s).name},
                                         {"dest", net.node(t).name},
                                         {"mean", mean}}));
      else
        std::cout << "expected cut " << net.node(s).name << " -> " << net.node(t).name
                  << ": " << mean << "\n";
    }
    return 0;
  }

  TimeVaryingReport rep = feasibility_time_varying(net);
  if (as_json) {
    Json arr = Json::array();
    for (const auto& p : rep.pairs)
      arr.push_back({{"source", net.node(p.source_node).name},
                     {"dest", net.node(p.dest_node).name},
                     {"demanded", p.demanded},
                     {"average_cut", p.average_cut},
                     {"margin", p.margin}});
    emit(report_envelope("erasure", {{"feasible", rep.feasible}, {"pairs", arr}}));
  } else {
    std::cout << (rep.feasible ? "feasible with adaptation" : "infeasible even with adaptation")
              << "\n";
    for (const auto& p : rep.pairs)
      std::cout << "  " << net.node(p.source_node).name << " -> "
                << net.node(p.dest_node).name << ": demanded " << p.demanded
                << ", average cut " << p.average_cut << ", margin " << p.margin << "\n";
  }
  return rep.feasible ? 0 : 2;
}

int run_delay(const std::string& net_path, const std::string& code_path,
              const std::string& method_str, int q, int order, uint64_t seed, bool as_json) {
  Network net = load_network(net_path);
  if (q != 0) net = net.with_field(Gf::from_order(uint64_t(q)));
  CodeAssignment code = load_code(code_path);
  DelayedCode dc = DelayedCode::from_static(net, code);
  DelayedSystem sys = delayed_system_matrix(net, dc);

  std::optional<DelayCheck> check;
  int rc = 0;
  if (sys.m.rows() > 0 && sys.m.rows() == sys.m.cols()) {
    DelayMethod method =
        method_str == "evaluation" ? DelayMethod::evaluation : DelayMethod::symbolic;
    SplitRng rng(seed);
    check = delayed_nonsingular(sys.m, method, &rng);
    rc = check->nonsingular ? 0 : 2;
  }

  if (as_json) {
    Json result = Json::object();
    result["matrix"] = rat_matrix_to_json(sys.m);
    if (order > 0) {
      Json rows = Json::array();
      for (int i = 0; i < sys.m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < sys.m.cols(); ++j)
          row.push_back(sys.m(i, j).series(order).str());
        rows.push_back(row);
      }
      result["series"] = rows;
    }
    if (check) {
      Json c = {{"nonsingular", check->nonsingular},
                {"method", delay_method_name(check->method)}};
      if (check->method == DelayMethod::symbolic)
        c["det"] = check->det.str();
      else {
        c["degree_bound"] = check->degree_bound;
        c["eval_order"] = check->eval_order;
      }
      result["check"] = c;
    }
    emit(report_envelope("delay", result, seed));
  } else {
    std::cout << "M(D):\n";
    for (int i = 0; i < sys.m.rows(); ++i) {
      std::cout << " ";
      for (int j = 0; j < sys.m.cols(); ++j) std::cout << " " << sys.m(i, j).str();
      std::cout << "\n";
    }
    if (order > 0) {
      std::cout << "series below D^" << order << ":\n";
      for (int i = 0; i < sys.m.rows(); ++i) {
        std::cout << " ";
        for (int j = 0; j < sys.m.cols(); ++j)
          std::cout << " " << sys.m(i, j).series(order).str();
        std::cout << "\n";
      }
    }
    if (check) {
      std::cout << "nonsingular: " << (check->nonsingular ? "yes" : "no") << " ("
                << delay_method_name(check->method);
      if (check->method == DelayMethod::symbolic)
        std::cout << "; det " << check->det.str();
      else
        std::cout << "; degree bound " << check->degree_bound << "; evaluated over order "
                  << check->eval_order;
      std::cout << ")\n";
    } else {
      std::cout << "matrix is not square; no invertibility verdict\n";
    }
  }
  return rc;
}

}  // namespace
}  // namespace adtnc

int main(int argc, char** argv) {
  using namespace adtnc;

  CLI::App app{"algebraic coding tools for deterministic relay networks"};
  app.require_subcommand(1);

  std::string net_path, code_path, out_path;
  std::string source_name, dest_name, method_str;
  int q = 0, trials = 32, samples = 0, order = 0;
  uint64_t seed = 0;
  bool as_json = false;
  bool want_static = false, want_average = false, want_feasibility = false;

  CLI::App* validate = app.add_subcommand("validate", "check a network document");
  validate->add_option("network", net_path, "network JSON file")->required();
  validate->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* mincut = app.add_subcommand("mincut", "minimum cut between endpoints");
  mincut->add_option("network", net_path, "network JSON file")->required();
  mincut->add_option("--source", source_name, "source node (default: all declared)");
  mincut->add_option("--dest", dest_name, "destination node (default: all declared)");
  mincut->add_option("--method", method_str, "force the method")
      ->check(CLI::IsMember({"enumeration", "algebraic"}));
  mincut->add_option("--q", q,
                     "evaluate ranks over this field order instead (prime power, 0 keeps "
                     "the document's field)");
  mincut->add_option("--trials", trials, "draws per pair for the algebraic method");
  mincut->add_option("--seed", seed, "random seed");
  mincut->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* code = app.add_subcommand("code", "search for a feasible assignment");
  code->add_option("network", net_path, "network JSON file")->required();
  code->add_option("--q", q, "field order, a prime power (0 picks automatically)");
  code->add_option("--trials", trials, "random draws before giving up");
  code->add_option("--seed", seed, "random seed");
  code->add_option("--out", out_path, "write the found assignment to this file");
  code->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* verify = app.add_subcommand("verify", "check an assignment against the demands");
  verify->add_option("network", net_path, "network JSON file")->required();
  verify->add_option("assignment", code_path, "assignment JSON file")->required();
  verify->add_option("--q", q,
                     "interpret coefficients over this field order (0 keeps the "
                     "document's field)");
  verify->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* erasure = app.add_subcommand("erasure", "link-failure analyses");
  erasure->add_option("network", net_path, "network JSON file (with an erasures block)")
      ->required();
  erasure->add_flag("--static", want_static, "one fixed code covering every pattern");
  erasure->add_flag("--average", want_average, "expected residual min-cut");
  erasure->add_flag("--feasibility", want_feasibility,
                    "can adaptive schemes meet the demands on average");
  erasure->add_option("--q", q, "field order for --static (0 picks automatically)");
  erasure->add_option("--trials", trials, "draws for --static");
  erasure->add_option("--samples", samples,
                      "Monte Carlo samples for --average (0 = exact expansion)");
  erasure->add_option("--source", source_name, "source node for --average");
  erasure->add_option("--dest", dest_name, "destination node for --average");
  erasure->add_option("--seed", seed, "random seed");
  erasure->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* delay = app.add_subcommand("delay", "rational transfer analysis with unit delays");
  delay->add_option("network", net_path, "network JSON file")->required();
  delay->add_option("assignment", code_path, "assignment JSON file")->required();
  delay->add_option("--q", q,
                    "interpret coefficients over this field order (0 keeps the "
                    "document's field)");
  delay->add_option("--method", method_str, "nonsingularity method")
      ->check(CLI::IsMember({"symbolic", "evaluation"}))
      ->default_str("symbolic");
  delay->add_option("--order", order, "also print the series truncated below this degree");
  delay->add_option("--seed", seed, "random seed for the evaluation method");
  delay->add_flag("--json", as_json, "emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return run_validate(net_path, as_json);
    if (mincut->parsed())
      return run_mincut(net_path, source_name, dest_name, method_str, q, trials, seed,
                        as_json);
    if (code->parsed()) return run_code(net_path, q, trials, seed, out_path, as_json);
    if (verify->parsed()) return run_verify(net_path, code_path, q, as_json);
    if (erasure->parsed())
      return run_erasure(net_path, want_static, want_average, want_feasibility, q, trials,
                         samples, source_name, dest_name, seed, as_json);
    if (delay->parsed())
      return run_delay(net_path, code_path, method_str, q, order, seed, as_json);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
