// Python face of the library. Every operation speaks JSON strings using the
// same documents and report envelopes as the CLI, so one schema serves both.

#include <pybind11/pybind11.h>

#include <optional>
#include <string>

#include "adtnc/coding.hpp"
#include "adtnc/delay.hpp"
#include "adtnc/erasure.hpp"
#include "adtnc/error.hpp"
#include "adtnc/json_io.hpp"
#include "adtnc/mincut.hpp"
#include "adtnc/rng.hpp"

namespace py = pybind11;

namespace adtnc {
namespace {

Network net_from_text(const std::string& text, int q) {
  Network net = network_from_json(parse_json(text, "network"));
  if (q != 0) net = net.with_field(Gf::from_order(uint64_t(q)));
  return net;
}

CodeAssignment code_from_text(const std::string& text) {
  return code_from_json(parse_json(text, "assignment"));
}

std::string py_canonical(const std::string& text) {
  return network_to_json(network_from_json(parse_json(text, "network"))).dump();
}

std::string py_validate(const std::string& text) {
  Network net = net_from_text(text, 0);
  ValidationReport rep = net.validate();
  Json issues = Json::array();
  for (const auto& i : rep.issues) issues.push_back({{"code", i.code}, {"message", i.message}});
  return report_envelope(
             "validate", {{"valid", rep.valid}, {"acyclic", rep.acyclic}, {"issues", issues}})
      .dump();
}

std::string py_mincut(const std::string& text, const std::string& source,
                      const std::string& dest, const std::string& method, int q, int trials,
                      uint64_t seed) {
  Network net = net_from_text(text, q);
  auto resolve = [&](const std::string& name) {
    auto idx = net.node_index(name);
    if (!idx) throw UsageError("unknown node \"" + name + "\"");
    return *idx;
  };
  std::vector<int> from, to;
  if (source.empty())
    for (const auto& s : net.sources()) from.push_back(s.node);
  else
    from.push_back(resolve(source));
  if (dest.empty())
    for (const auto& d : net.dests()) to.push_back(d.node);
  else
    to.push_back(resolve(dest));
  std::vector<std::pair<int, int>> pairs;
  for (int s : from)
    for (int t : to) pairs.push_back({s, t});
  if (pairs.empty()) throw UsageError("no source/destination pair to cut");
  std::optional<CutMethod> force;
  if (method == "enumeration") force = CutMethod::enumeration;
  if (method == "algebraic") force = CutMethod::algebraic;
  SplitRng rng(seed);
  Json arr = Json::array();
  for (const auto& r : mincut_all_pairs(net, pairs, force, trials, rng))
    arr.push_back(cut_to_json(net, r));
  return report_envelope("mincut", {{"pairs", arr}}, seed).dump();
}

std::string py_code(const std::string& text, int q, int trials, uint64_t seed) {
  Network net = net_from_text(text, 0);
  SplitRng rng(seed);
  CodeResult res = random_code(net, q, trials, rng);
  Json result = {{"feasible", res.verdict.feasible},
                 {"stats", stats_to_json(res.stats)},
                 {"receivers", receivers_to_json(res.net, res.verdict)}};
  if (res.verdict.feasible) result["assignment"] = code_to_json(res.code);
  return report_envelope("code", result, seed).dump();
}

std::string py_verify(const std::string& net_text, const std::string& code_text, int q) {
  Network net = net_from_text(net_text, q);
  CodeVerdict v = verify(net, code_from_text(code_text));
  return report_envelope("verify",
                         {{"feasible", v.feasible}, {"receivers", receivers_to_json(net, v)}})
      .dump();
}

std::string py_system_matrix(const std::string& net_text, const std::string& code_text,
                             int q) {
  Network net = net_from_text(net_text, q);
  return matrix_to_json(system_matrix(net, code_from_text(code_text)).m).dump();
}

std::string py_erasure_static(const std::string& text, int q, int trials, uint64_t seed) {
  Network net = net_from_text(text, 0);
  SplitRng rng(seed);
  StaticReport rep = static_solution(net, q, trials, rng);
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json edges = Json::array();
    for (auto [a, b] : c.pattern.edges) edges.push_back({a + 1, b + 1});
    checks.push_back(
        {{"edges", edges}, {"probability", c.probability}, {"feasible", c.verdict.feasible}});
  }
  Json result = {{"found", rep.found}, {"stats", stats_to_json(rep.stats)}, {"checks", checks}};
  if (rep.found) result["assignment"] = code_to_json(rep.code);
  return report_envelope("erasure", result, seed).dump();
}

std::string py_erasure_average(const std::string& text, const std::string& source,
                               const std::string& dest, int samples, uint64_t seed) {
  Network net = net_from_text(text, 0);
  auto pick = [&](const std::string& name, bool src) {
    if (!name.empty()) {
      auto idx = net.node_index(name);
      if (!idx) throw UsageError("unknown node \"" + name + "\"");
      return *idx;
    }
    if (src) {
      if (net.sources().size() != 1)
        throw UsageError("several sources declared; name one");
      return net.sources()[0].node;
    }
    if (net.dests().size() != 1)
      throw UsageError("several destinations declared; name one");
    return net.dests()[0].node;
  };
  int s = pick(source, true), t = pick(dest, false);
  if (samples > 0) {
    SplitRng rng(seed);
    MonteCarloCut mc = time_average_mincut_mc(net, s, t, samples, rng);
    return report_envelope("erasure",
                           {{"source", net.node(s).name},
                            {"dest", net.node(t).name},
                            {"mean", mc.mean},
                            {"std_error", mc.std_error},
                            {"samples", mc.samples}},
                           seed)
        .dump();
  }
  return report_envelope("erasure", {{"source", net.node(s).name},
                                     {"dest", net.node(t).name},
                                     {"mean", time_average_mincut(net, s, t)}})
      .dump();
}

std::string py_erasure_feasibility(const std::string& text) {
  Network net = net_from_text(text, 0);
  TimeVaryingReport rep = feasibility_time_varying(net);
  Json arr = Json::array();
  for (const auto& p : rep.pairs)
    arr.push_back({{"source", net.node(p.source_node).name},
                   {"dest", net.node(p.dest_node).name},
                   {"demanded", p.demanded},
                   {"average_cut", p.average_cut},
                   {"margin", p.margin}});
  return report_envelope("erasure", {{"feasible", rep.feasible}, {"pairs", arr}}).dump();
}

std::string py_delay(const std::string& net_text, const std::string& code_text, int q,
                     const std::string& method, int order, uint64_t seed) {
  Network net = net_from_text(net_text, q);
  DelayedCode dc = DelayedCode::from_static(net, code_from_text(code_text));
  DelayedSystem sys = delayed_system_matrix(net, dc);
  Json result = Json::object();
  result["matrix"] = rat_matrix_to_json(sys.m);
  if (order > 0) {
    Json rows = Json::array();
    for (int i = 0; i < sys.m.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < sys.m.cols(); ++j) row.push_back(sys.m(i, j).series(order).str());
      rows.push_back(row);
    }
    result["series"] = rows;
  }
  if (sys.m.rows() > 0 && sys.m.rows() == sys.m.cols()) {
    DelayMethod dm = method == "evaluation" ? DelayMethod::evaluation : DelayMethod::symbolic;
    SplitRng rng(seed);
    DelayCheck chk = delayed_nonsingular(sys.m, dm, &rng);
    Json c = {{"nonsingular", chk.nonsingular}, {"method", delay_method_name(chk.method)}};
    if (chk.method == DelayMethod::symbolic)
      c["det"] = chk.det.str();
    else {
      c["degree_bound"] = chk.degree_bound;
      c["eval_order"] = chk.eval_order;
    }
    result["check"] = c;
  }
  return report_envelope("delay", result, seed).dump();
}

}  // namespace
}  // namespace adtnc

PYBIND11_MODULE(_core, m) {
  using namespace adtnc;
  m.doc() = "algebraic coding on deterministic relay networks (JSON-string interface)";

  auto base = py::register_exception<Error>(m, "Error");
  auto usage = py::register_exception<UsageError>(m, "UsageError", base);
  py::register_exception<ParseError>(m, "ParseError", usage);
  py::register_exception<InfeasibleError>(m, "Infeasible", base);
  py::register_exception<ArithmeticError>(m, "AlgebraError", base);

  m.def("canonical", &py_canonical, py::arg("network"),
        "Parse a network document and return its canonical form.");
  m.def("validate", &py_validate, py::arg("network"));
  m.def("mincut", &py_mincut, py::arg("network"), py::arg("source") = "",
        py::arg("dest") = "", py::arg("method") = "", py::arg("q") = 0,
        py::arg("trials") = 32, py::arg("seed") = 0);
  m.def("code", &py_code, py::arg("network"), py::arg("q") = 0, py::arg("trials") = 32,
        py::arg("seed") = 0);
  m.def("verify", &py_verify, py::arg("network"), py::arg("assignment"), py::arg("q") = 0);
  m.def("system_matrix", &py_system_matrix, py::arg("network"), py::arg("assignment"),
        py::arg("q") = 0, "End-to-end transfer matrix as rows of raw field encodings.");
  m.def("erasure_static", &py_erasure_static, py::arg("network"), py::arg("q") = 0,
        py::arg("trials") = 32, py::arg("seed") = 0);
  m.def("erasure_average", &py_erasure_average, py::arg("network"), py::arg("source") = "",
        py::arg("dest") = "", py::arg("samples") = 0, py::arg("seed") = 0);
  m.def("erasure_feasibility", &py_erasure_feasibility, py::arg("network"));
  m.def("delay", &py_delay, py::arg("network"), py::arg("assignment"), py::arg("q") = 0,
        py::arg("method") = "symbolic", py::arg("order") = 0, py::arg("seed") = 0);
}
