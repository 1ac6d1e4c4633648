#include "adtnc/json_io.hpp"

#include <fstream>
#include <map>
#include <set>

#include "adtnc/error.hpp"

namespace adtnc {

namespace {

std::string at(const std::string& where, const std::string& what) {
  return where + ": " + what;
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(at(where, "must be an object"));
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(at(where, std::string("missing required key \"") + key + "\""));
  return *it;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ParseError(at(where, "must be an object"));
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(at(where, "unknown key \"" + key + "\""));
  }
}

long long need_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer())
    throw ParseError(at(where, "must be an integer"));
  return v.get<long long>();
}

int need_int_range(const Json& v, long long lo, long long hi, const std::string& where) {
  long long x = need_int(v, where);
  if (x < lo || x > hi)
    throw ParseError(at(where, "must lie in [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "], got " + std::to_string(x)));
  return int(x);
}

std::string need_str(const Json& v, const std::string& where) {
  if (!v.is_string() || v.get<std::string>().empty())
    throw ParseError(at(where, "must be a non-empty string"));
  return v.get<std::string>();
}

double need_num(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(at(where, "must be a number"));
  return v.get<double>();
}

std::pair<int, int> need_port_pair(const Json& v, int ports, const std::string& where) {
  if (!v.is_array() || v.size() != 2)
    throw ParseError(at(where, "must be a two-element array [out port, in port]"));
  int a = need_int_range(v[0], 1, ports, where + "[0]");
  int b = need_int_range(v[1], 1, ports, where + "[1]");
  return {a - 1, b - 1};
}

}  // namespace

Json field_to_json(const Gf* f) {
  Json j = Json::object();
  j["p"] = f->characteristic();
  if (f->degree() > 1) {
    j["m"] = f->degree();
    if (f->modulus() != Gf::get(f->characteristic(), f->degree())->modulus())
      j["modulus"] = f->modulus();
  }
  return j;
}

const Gf* field_from_json(const Json& j) {
  reject_unknown(j, {"p", "m", "modulus"}, "field");
  int p = need_int_range(need(j, "p", "field"), 2, (1 << 16) - 1, "field.p");
  int m = j.contains("m") ? need_int_range(j["m"], 1, 16, "field.m") : 1;
  if (!j.contains("modulus")) return Gf::get(uint32_t(p), uint32_t(m));
  const Json& mod = j["modulus"];
  if (!mod.is_array() || mod.size() != size_t(m) + 1)
    throw ParseError("field.modulus: must be an array of m+1 coefficients, lowest first");
  std::vector<uint32_t> coeffs;
  for (size_t i = 0; i < mod.size(); ++i)
    coeffs.push_back(
        uint32_t(need_int_range(mod[i], 0, p - 1, "field.modulus[" + std::to_string(i) + "]")));
  return Gf::get(uint32_t(p), uint32_t(m), coeffs);
}

Json network_to_json(const Network& net) {
  Json j = Json::object();
  j["field"] = field_to_json(net.field());

  Json nodes = Json::array();
  for (const auto& n : net.nodes())
    nodes.push_back({{"id", n.name}, {"inputs", n.inputs}, {"outputs", n.outputs}});
  j["nodes"] = nodes;

  Json edges = Json::array();
  for (auto [a, b] : net.edges()) edges.push_back({a + 1, b + 1});
  j["edges"] = edges;

  Json sources = Json::array();
  for (const auto& s : net.sources())
    sources.push_back({{"node", net.node(s.node).name}, {"processes", s.processes}});
  j["sources"] = sources;

  Json dests = Json::array();
  for (const auto& d : net.dests())
    dests.push_back({{"node", net.node(d.node).name}, {"processes", d.processes}});
  j["destinations"] = dests;

  if (!net.connections().items.empty()) {
    Json conns = Json::object();
    conns["class"] = conn_class_name(net.connections().cls);
    Json items = Json::array();
    for (const auto& c : net.connections().items) {
      Json procs = Json::array();
      for (int p : c.processes) procs.push_back(p + 1);
      items.push_back({{"source", net.node(c.source_node).name},
                       {"dest", net.node(c.dest_node).name},
                       {"processes", procs}});
    }
    conns["items"] = items;
    j["connections"] = conns;
  }

  if (net.erasures()) {
    Json e = Json::object();
    if (net.erasures()->iid) {
      e["iid"] = *net.erasures()->iid;
    } else {
      Json pats = Json::array();
      for (const auto& [pat, prob] : net.erasures()->patterns) {
        Json pe = Json::array();
        for (auto [a, b] : pat.edges) pe.push_back({a + 1, b + 1});
        pats.push_back({{"edges", pe}, {"probability", prob}});
      }
      e["patterns"] = pats;
    }
    j["erasures"] = e;
  }

  if (net.delay_mode()) j["delay"] = true;
  return j;
}

Network network_from_json(const Json& j) {
  reject_unknown(j,
                 {"field", "nodes", "edges", "sources", "destinations", "connections",
                  "erasures", "delay"},
                 "network");
  const Gf* f = field_from_json(need(j, "field", "network"));

  const Json& jnodes = need(j, "nodes", "network");
  if (!jnodes.is_array() || jnodes.empty())
    throw ParseError("network.nodes: must be a non-empty array");
  std::vector<NodeDecl> nodes;
  std::map<std::string, int> index;
  int ports = 0;
  for (size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    reject_unknown(jnodes[i], {"id", "inputs", "outputs"}, where);
    NodeDecl n;
    n.name = need_str(need(jnodes[i], "id", where), where + ".id");
    n.inputs = need_int_range(need(jnodes[i], "inputs", where), 0, 1 << 20, where + ".inputs");
    n.outputs =
        need_int_range(need(jnodes[i], "outputs", where), 0, 1 << 20, where + ".outputs");
    if (!index.emplace(n.name, int(i)).second)
      throw ParseError(at(where, "duplicate node id \"" + n.name + "\""));
    ports += n.inputs + n.outputs;
    nodes.push_back(std::move(n));
  }
  auto node_of = [&](const Json& v, const std::string& where) {
    std::string name = need_str(v, where);
    auto it = index.find(name);
    if (it == index.end())
      throw ParseError(at(where, "references unknown node \"" + name + "\""));
    return it->second;
  };

  const Json& jedges = need(j, "edges", "network");
  if (!jedges.is_array()) throw ParseError("network.edges: must be an array");
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i < jedges.size(); ++i)
    edges.push_back(need_port_pair(jedges[i], ports, "edges[" + std::to_string(i) + "]"));

  auto endpoints = [&](const char* key, auto push) {
    const Json& arr = need(j, key, "network");
    if (!arr.is_array())
      throw ParseError(std::string("network.") + key + ": must be an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      reject_unknown(arr[i], {"node", "processes"}, where);
      int node = node_of(need(arr[i], "node", where), where + ".node");
      int procs =
          need_int_range(need(arr[i], "processes", where), 0, 1 << 20, where + ".processes");
      push(node, procs);
    }
  };
  std::vector<SourceDecl> sources;
  std::vector<DestDecl> dests;
  endpoints("sources", [&](int n, int p) { sources.push_back({n, p}); });
  endpoints("destinations", [&](int n, int p) { dests.push_back({n, p}); });

  ConnectionSet conns;
  if (j.contains("connections")) {
    const Json& jc = j["connections"];
    reject_unknown(jc, {"class", "items"}, "connections");
    std::string cls = need_str(need(jc, "class", "connections"), "connections.class");
    auto parsed = conn_class_from_name(cls);
    if (!parsed)
      throw ParseError(
          "connections.class: unknown class \"" + cls +
          "\" (expected unicast, single_multicast, multiple_multicast, "
          "disjoint_multicast, two_level_multicast, or general)");
    conns.cls = *parsed;
    const Json& items = need(jc, "items", "connections");
    if (!items.is_array()) throw ParseError("connections.items: must be an array");
    for (size_t i = 0; i < items.size(); ++i) {
      const std::string where = "connections.items[" + std::to_string(i) + "]";
      reject_unknown(items[i], {"source", "dest", "processes"}, where);
      Connection c;
      c.source_node = node_of(need(items[i], "source", where), where + ".source");
      c.dest_node = node_of(need(items[i], "dest", where), where + ".dest");
      const Json& procs = need(items[i], "processes", where);
      if (!procs.is_array()) throw ParseError(at(where + ".processes", "must be an array"));
      for (size_t k = 0; k < procs.size(); ++k)
        c.processes.push_back(need_int_range(procs[k], 1, 1 << 20,
                                             where + ".processes[" + std::to_string(k) + "]") -
                              1);
      conns.items.push_back(std::move(c));
    }
  }

  std::optional<FailureModel> erasures;
  if (j.contains("erasures")) {
    const Json& je = j["erasures"];
    reject_unknown(je, {"patterns", "iid"}, "erasures");
    FailureModel m;
    if (je.contains("iid")) {
      double p = need_num(je["iid"], "erasures.iid");
      if (p < 0.0 || p > 1.0)
        throw ParseError("erasures.iid: must lie in [0, 1]");
      m.iid = p;
    }
    if (je.contains("patterns")) {
      const Json& pats = je["patterns"];
      if (!pats.is_array()) throw ParseError("erasures.patterns: must be an array");
      for (size_t i = 0; i < pats.size(); ++i) {
        const std::string where = "erasures.patterns[" + std::to_string(i) + "]";
        reject_unknown(pats[i], {"edges", "probability"}, where);
        FailurePattern pat;
        const Json& pe = need(pats[i], "edges", where);
        if (!pe.is_array()) throw ParseError(at(where + ".edges", "must be an array"));
        for (size_t k = 0; k < pe.size(); ++k)
          pat.edges.push_back(
              need_port_pair(pe[k], ports, where + ".edges[" + std::to_string(k) + "]"));
        double prob = need_num(need(pats[i], "probability", where), where + ".probability");
        m.patterns.push_back({std::move(pat), prob});
      }
    }
    if (!je.contains("iid") && !je.contains("patterns"))
      throw ParseError("erasures: needs \"patterns\" or \"iid\"");
    erasures = std::move(m);
  }

  bool delay = false;
  if (j.contains("delay")) {
    if (!j["delay"].is_boolean()) throw ParseError("network.delay: must be a boolean");
    delay = j["delay"].get<bool>();
  }

  return Network(f, std::move(nodes), std::move(edges), std::move(sources), std::move(dests),
                 std::move(conns), delay, std::move(erasures));
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Network load_network(const std::string& path) { return network_from_json(load_json(path)); }

Json receivers_to_json(const Network& net, const CodeVerdict& v) {
  Json arr = Json::array();
  for (const auto& r : v.receivers) {
    Json e = {{"dest", net.node(r.dest_node).name},
              {"required", r.required},
              {"rank", r.achieved_rank},
              {"ok", r.ok}};
    if (!r.note.empty()) e["note"] = r.note;
    arr.push_back(e);
  }
  return arr;
}

Json stats_to_json(const CodeStats& s) {
  Json j = {{"trials_run", s.trials_run},
            {"succeeded", s.succeeded},
            {"bound", s.bound},
            {"q", s.q},
            {"eta", s.eta}};
  if (s.succeeded) j["success_trial"] = s.success_trial;
  return j;
}

Json cut_to_json(const Network& net, const CutReport& r) {
  Json e = {{"source", net.node(r.s_node).name},
            {"dest", net.node(r.t_node).name},
            {"value", r.value},
            {"method", cut_method_name(r.method)},
            {"trials", r.trials},
            {"confidence", r.confidence}};
  if (r.method == CutMethod::enumeration) {
    Json omega = Json::array();
    for (int v : r.omega) omega.push_back(net.node(v).name);
    e["omega"] = omega;
  }
  if (r.low_field_warning) e["low_field_warning"] = true;
  return e;
}

Json code_to_json(const CodeAssignment& code) {
  Json j = Json::object();
  Json enc = Json::array();
  for (const auto& [key, v] : code.encoding)
    enc.push_back({{"process", key.first + 1}, {"port", key.second + 1}, {"value", v}});
  j["encoding"] = enc;
  Json internal = Json::array();
  for (const auto& [key, v] : code.internal)
    internal.push_back({{"in", key.first + 1}, {"out", key.second + 1}, {"value", v}});
  j["internal"] = internal;
  Json dec = Json::array();
  for (const auto& [key, v] : code.decoding)
    dec.push_back({{"port", key.first + 1}, {"process", key.second + 1}, {"value", v}});
  j["decoding"] = dec;
  return j;
}

CodeAssignment code_from_json(const Json& j) {
  reject_unknown(j, {"encoding", "internal", "decoding"}, "assignment");
  CodeAssignment code;
  auto fill = [&](const char* key, const char* first, const char* second, auto& map) {
    if (!j.contains(key)) return;
    const Json& arr = j[key];
    if (!arr.is_array())
      throw ParseError(std::string("assignment.") + key + ": must be an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      reject_unknown(arr[i], {first, second, "value"}, where);
      int a = need_int_range(need(arr[i], first, where), 1, 1 << 20,
                             where + "." + first) -
              1;
      int b = need_int_range(need(arr[i], second, where), 1, 1 << 20,
                             where + "." + second) -
              1;
      long long v = need_int(need(arr[i], "value", where), where + ".value");
      if (v < 0 || v > 0xFFFFFFFFll)
        throw ParseError(at(where + ".value", "must be a field encoding (non-negative)"));
      if (!map.emplace(std::make_pair(a, b), uint32_t(v)).second)
        throw ParseError(at(where, "duplicate coefficient key"));
    }
  };
  fill("encoding", "process", "port", code.encoding);
  fill("internal", "in", "out", code.internal);
  fill("decoding", "port", "process", code.decoding);
  return code;
}

CodeAssignment load_code(const std::string& path) { return code_from_json(load_json(path)); }

Json report_envelope(const std::string& command, Json result, std::optional<uint64_t> seed) {
  Json j = Json::object();
  j["schema"] = "adtnc-report/1";
  j["command"] = command;
  if (seed) j["seed"] = *seed;
  j["result"] = std::move(result);
  return j;
}

Json matrix_to_json(const Matrix<Fe>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).value());
    rows.push_back(row);
  }
  return rows;
}

Json rat_matrix_to_json(const Matrix<Rat>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace adtnc
