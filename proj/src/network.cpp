#include "adtnc/network.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "adtnc/error.hpp"

namespace adtnc {

namespace {

std::vector<int> base_offsets(const std::vector<NodeDecl>& nodes) {
  std::vector<int> base(nodes.size() + 1, 0);
  for (size_t i = 0; i < nodes.size(); ++i)
    base[i + 1] = base[i] + std::max(nodes[i].inputs, 0) + std::max(nodes[i].outputs, 0);
  return base;
}

std::string fresh_node_name(const std::vector<NodeDecl>& nodes, std::string want) {
  auto taken = [&](const std::string& s) {
    return std::any_of(nodes.begin(), nodes.end(),
                       [&](const NodeDecl& n) { return n.name == s; });
  };
  while (taken(want)) want += "+";
  return want;
}

}  // namespace

std::string conn_class_name(ConnClass c) {
  switch (c) {
    case ConnClass::unicast: return "unicast";
    case ConnClass::single_multicast: return "single_multicast";
    case ConnClass::multiple_multicast: return "multiple_multicast";
    case ConnClass::disjoint_multicast: return "disjoint_multicast";
    case ConnClass::two_level_multicast: return "two_level_multicast";
    case ConnClass::general: return "general";
  }
  return "general";
}

std::optional<ConnClass> conn_class_from_name(const std::string& s) {
  for (ConnClass c : {ConnClass::unicast, ConnClass::single_multicast,
                      ConnClass::multiple_multicast, ConnClass::disjoint_multicast,
                      ConnClass::two_level_multicast, ConnClass::general})
    if (conn_class_name(c) == s) return c;
  return std::nullopt;
}

Network::Network(const Gf* field, std::vector<NodeDecl> nodes,
                 std::vector<std::pair<int, int>> edges,
                 std::vector<SourceDecl> sources, std::vector<DestDecl> dests,
                 ConnectionSet conns, bool delay_mode,
                 std::optional<FailureModel> erasures)
    : field_(field),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      sources_(std::move(sources)),
      dests_(std::move(dests)),
      conns_(std::move(conns)),
      delay_mode_(delay_mode),
      erasures_(std::move(erasures)) {
  in_ports_.resize(nodes_.size());
  out_ports_.resize(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    for (int j = 0; j < std::max(nodes_[i].inputs, 0); ++j) {
      in_ports_[i].push_back(int(ports_.size()));
      ports_.push_back({int(ports_.size()), int(i), PortDir::in, j});
    }
    for (int j = 0; j < std::max(nodes_[i].outputs, 0); ++j) {
      out_ports_[i].push_back(int(ports_.size()));
      ports_.push_back({int(ports_.size()), int(i), PortDir::out, j});
    }
  }
  out_adj_.resize(ports_.size());
  in_adj_.resize(ports_.size());
  for (auto [a, b] : edges_) {
    // Malformed edges are skipped here and reported by validate().
    if (a < 0 || b < 0 || a >= port_count() || b >= port_count()) continue;
    if (ports_[a].dir != PortDir::out || ports_[b].dir != PortDir::in) continue;
    out_adj_[a].push_back(b);
    in_adj_[b].push_back(a);
  }
  for (auto& v : out_adj_) std::sort(v.begin(), v.end());
  for (auto& v : in_adj_) std::sort(v.begin(), v.end());
}

std::optional<int> Network::node_index(const std::string& name) const {
  if (name.empty()) return std::nullopt;
  for (size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].name == name) return int(i);
  return std::nullopt;
}

std::optional<int> Network::source_index(int node) const {
  for (size_t i = 0; i < sources_.size(); ++i)
    if (sources_[i].node == node) return int(i);
  return std::nullopt;
}

std::optional<int> Network::dest_index(int node) const {
  for (size_t i = 0; i < dests_.size(); ++i)
    if (dests_[i].node == node) return int(i);
  return std::nullopt;
}

int Network::total_source_processes() const {
  int n = 0;
  for (const auto& s : sources_) n += s.processes;
  return n;
}

int Network::total_dest_processes() const {
  int n = 0;
  for (const auto& d : dests_) n += d.processes;
  return n;
}

ValidationReport Network::validate() const {
  ValidationReport rep;
  auto flag = [&](std::string code, std::string msg) {
    rep.valid = false;
    rep.issues.push_back({std::move(code), std::move(msg)});
  };

  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].inputs < 0 || nodes_[i].outputs < 0)
      flag("node-port-negative", "node " + std::to_string(i) + " has a negative port count");
    if (!nodes_[i].name.empty())
      for (size_t k = 0; k < i; ++k)
        if (nodes_[k].name == nodes_[i].name)
          flag("node-name-duplicate", "node name '" + nodes_[i].name + "' is reused");
  }

  std::set<std::pair<int, int>> seen_edges;
  for (size_t e = 0; e < edges_.size(); ++e) {
    auto [a, b] = edges_[e];
    std::string tag = "edge " + std::to_string(e);
    if (a < 0 || a >= port_count() || b < 0 || b >= port_count()) {
      flag("edge-port-range", tag + " references a port id outside 0.." +
                                  std::to_string(port_count() - 1));
      continue;
    }
    if (ports_[a].dir != PortDir::out || ports_[b].dir != PortDir::in) {
      flag("edge-direction", tag + " must run from an output port to an input port");
      continue;
    }
    if (!seen_edges.insert({a, b}).second)
      flag("edge-duplicate", tag + " duplicates (" + std::to_string(a) + ", " +
                                 std::to_string(b) + ")");
  }

  std::set<int> src_nodes, dst_nodes;
  for (size_t i = 0; i < sources_.size(); ++i) {
    const auto& s = sources_[i];
    if (s.node < 0 || s.node >= node_count())
      flag("source-node-range", "source " + std::to_string(i) + " references node " +
                                    std::to_string(s.node));
    else if (!src_nodes.insert(s.node).second)
      flag("source-duplicate", "node " + std::to_string(s.node) + " is listed as a source twice");
    if (s.processes <= 0)
      flag("source-processes", "source " + std::to_string(i) + " must inject at least one process");
    if (s.node >= 0 && s.node < node_count() &&
        s.processes > int(output_ports(s.node).size()))
      flag("source-process-capacity", "source " + std::to_string(i) + " injects " +
                                          std::to_string(s.processes) + " processes through only " +
                                          std::to_string(output_ports(s.node).size()) +
                                          " output ports");
  }
  for (size_t i = 0; i < dests_.size(); ++i) {
    const auto& d = dests_[i];
    if (d.node < 0 || d.node >= node_count())
      flag("dest-node-range", "destination " + std::to_string(i) + " references node " +
                                  std::to_string(d.node));
    else if (!dst_nodes.insert(d.node).second)
      flag("dest-duplicate", "node " + std::to_string(d.node) + " is listed as a destination twice");
    if (d.processes <= 0)
      flag("dest-processes", "destination " + std::to_string(i) + " must decode at least one process");
  }

  for (size_t i = 0; i < conns_.items.size(); ++i) {
    const auto& c = conns_.items[i];
    std::string tag = "connection " + std::to_string(i);
    auto si = source_index(c.source_node);
    if (!si) {
      flag("conn-source-unknown", tag + " starts at node " + std::to_string(c.source_node) +
                                      " which is not a declared source");
      continue;
    }
    if (!dest_index(c.dest_node))
      flag("conn-dest-unknown", tag + " ends at node " + std::to_string(c.dest_node) +
                                    " which is not a declared destination");
    std::set<int> seen;
    for (int p : c.processes) {
      if (p < 0 || p >= sources_[*si].processes)
        flag("conn-process-range", tag + " demands process " + std::to_string(p) +
                                       " outside the source's range");
      else if (!seen.insert(p).second)
        flag("conn-process-dup", tag + " demands process " + std::to_string(p) + " twice");
    }
    if (c.processes.empty())
      flag("conn-process-empty", tag + " demands no processes");
  }

  if (erasures_) {
    const auto& m = *erasures_;
    if (m.patterns.empty() && !m.iid) flag("erasure-empty", "failure model declares nothing");
    if (!m.patterns.empty() && m.iid)
      flag("erasure-ambiguous", "failure model mixes explicit patterns with an iid rate");
    if (m.iid && (*m.iid < 0.0 || *m.iid > 1.0))
      flag("erasure-prob-range", "iid erasure rate must lie in [0, 1]");
    double sum = 0.0;
    std::set<std::pair<int, int>> valid_edges(seen_edges.begin(), seen_edges.end());
    for (size_t i = 0; i < m.patterns.size(); ++i) {
      const auto& [pat, prob] = m.patterns[i];
      std::string tag = "failure pattern " + std::to_string(i);
      if (prob < 0.0 || prob > 1.0)
        flag("erasure-prob-range", tag + " has probability outside [0, 1]");
      else
        sum += prob;
      for (auto& e : pat.edges)
        if (!valid_edges.count(e))
          flag("erasure-edge-unknown", tag + " deletes edge (" + std::to_string(e.first) +
                                           ", " + std::to_string(e.second) +
                                           ") which the network does not contain");
    }
    if (sum > 1.0 + 1e-9)
      flag("erasure-prob-sum", "failure pattern probabilities sum to more than 1");
  }

  rep.acyclic = topological_ports().has_value();
  if (!rep.acyclic && !delay_mode_)
    flag("cyclic-static",
         "the port graph has a directed cycle; enable delay mode to analyze it");
  return rep;
}

void Network::require_valid() const {
  auto rep = validate();
  if (rep.valid) return;
  std::ostringstream os;
  os << "invalid network:";
  for (const auto& is : rep.issues) os << " [" << is.code << "] " << is.message << ";";
  throw UsageError(os.str());
}

std::vector<std::pair<int, std::vector<int>>> Network::hyperedges() const {
  std::vector<std::pair<int, std::vector<int>>> out;
  for (int p = 0; p < port_count(); ++p)
    if (ports_[p].dir == PortDir::out && !out_adj_[p].empty())
      out.push_back({p, out_adj_[p]});
  return out;
}

std::optional<std::vector<int>> Network::topological_ports() const {
  // Kahn over the port graph: physical edges plus every intra-node
  // input -> output pair. Smallest ready id first keeps the order canonical.
  std::vector<int> indeg(port_count(), 0);
  for (int p = 0; p < port_count(); ++p) {
    if (ports_[p].dir == PortDir::in)
      indeg[p] = int(in_adj_[p].size());
    else
      indeg[p] = nodes_[ports_[p].node].inputs;
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int p = 0; p < port_count(); ++p)
    if (indeg[p] == 0) ready.push(p);
  std::vector<int> order;
  order.reserve(port_count());
  while (!ready.empty()) {
    int p = ready.top();
    ready.pop();
    order.push_back(p);
    if (ports_[p].dir == PortDir::in) {
      for (int q : out_ports_[ports_[p].node])
        if (--indeg[q] == 0) ready.push(q);
    } else {
      for (int q : out_adj_[p])
        if (--indeg[q] == 0) ready.push(q);
    }
  }
  if (int(order.size()) != port_count()) return std::nullopt;
  return order;
}

Network Network::with_field(const Gf* f) const {
  return Network(f, nodes_, edges_, sources_, dests_, conns_, delay_mode_, erasures_);
}

Network Network::with_connections(ConnectionSet conns) const {
  return Network(field_, nodes_, edges_, sources_, dests_, std::move(conns), delay_mode_,
                 erasures_);
}

Network Network::with_dest_processes(int node, int processes) const {
  auto dests = dests_;
  auto it = std::find_if(dests.begin(), dests.end(),
                         [&](const DestDecl& d) { return d.node == node; });
  if (it == dests.end())
    throw UsageError("node " + std::to_string(node) + " is not a declared destination");
  it->processes = processes;
  return Network(field_, nodes_, edges_, sources_, std::move(dests), conns_, delay_mode_,
                 erasures_);
}

Network Network::with_endpoints(std::vector<SourceDecl> sources,
                                std::vector<DestDecl> dests) const {
  return Network(field_, nodes_, edges_, std::move(sources), std::move(dests), {}, delay_mode_,
                 erasures_);
}

Network Network::with_edges_removed(const std::vector<std::pair<int, int>>& dead) const {
  auto edges = edges_;
  for (auto& e : dead) {
    auto it = std::find(edges.begin(), edges.end(), e);
    if (it == edges.end())
      throw UsageError("cannot remove edge (" + std::to_string(e.first) + ", " +
                       std::to_string(e.second) + "): not present");
    edges.erase(it);
  }
  return Network(field_, nodes_, std::move(edges), sources_, dests_, conns_, delay_mode_,
                 erasures_);
}

Network Network::with_delay(bool delay) const {
  return Network(field_, nodes_, edges_, sources_, dests_, conns_, delay, erasures_);
}

Network Network::with_erasures(std::optional<FailureModel> erasures) const {
  return Network(field_, nodes_, edges_, sources_, dests_, conns_, delay_mode_,
                 std::move(erasures));
}

namespace {

std::vector<int> remap_ports(const Network& net, const std::vector<NodeDecl>& new_nodes) {
  // Fresh ports are appended after the existing slots of their group, so an
  // old port keeps its slot; only group bases move.
  auto base = base_offsets(new_nodes);
  std::vector<int> map(net.port_count());
  for (const Port& p : net.ports())
    map[p.id] = base[p.node] +
                (p.dir == PortDir::in ? p.slot : new_nodes[p.node].inputs + p.slot);
  return map;
}

std::optional<FailureModel> remap_failures(const std::optional<FailureModel>& m,
                                           const std::vector<int>& map) {
  if (!m) return std::nullopt;
  FailureModel out;
  out.iid = m->iid;
  for (const auto& [pat, prob] : m->patterns) {
    FailurePattern np;
    for (auto [a, b] : pat.edges) np.edges.push_back({map[a], map[b]});
    out.patterns.push_back({np, prob});
  }
  return out;
}

}  // namespace

std::pair<Network, PortMapping> add_super_source(const Network& net,
                                                 const std::vector<int>& source_nodes) {
  net.require_valid();
  std::set<int> listed;
  int total_proc = 0, total_ports = 0;
  for (int s : source_nodes) {
    auto si = net.source_index(s);
    if (!si) throw UsageError("node " + std::to_string(s) + " is not a declared source");
    if (!listed.insert(s).second)
      throw UsageError("node " + std::to_string(s) + " listed twice");
    total_proc += net.sources()[*si].processes;
    total_ports += net.node(s).outputs;
  }
  if (source_nodes.empty()) throw UsageError("no source nodes listed");

  // One fresh input per original source output port, each fed by its own
  // super-source output, so a coding choice at the old source survives as
  // relay coefficients on the pass-through symbols.
  auto nodes = net.nodes();
  for (int s : source_nodes) nodes[s].inputs += net.node(s).outputs;
  int super = int(nodes.size());
  nodes.push_back({fresh_node_name(nodes, "super_source"), 0, total_ports});

  PortMapping pm;
  pm.added_node = super;
  pm.old_to_new = remap_ports(net, nodes);

  auto base = base_offsets(nodes);
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : net.edges()) edges.push_back({pm.old_to_new[a], pm.old_to_new[b]});
  int k = 0;
  std::map<int, int> shift;  // listed source node -> offset in concatenated numbering
  int off = 0;
  for (int s : source_nodes) {
    shift[s] = off;
    off += net.sources()[*net.source_index(s)].processes;
    for (int j = 0; j < net.node(s).outputs; ++j, ++k) {
      int out = base[super] + k;                      // super node has no inputs
      int in = base[s] + net.node(s).inputs + j;      // appended after old inputs
      edges.push_back({out, in});
      pm.links.push_back({out, in});
    }
  }

  std::vector<SourceDecl> sources;
  for (const auto& s : net.sources())
    if (!listed.count(s.node)) sources.push_back(s);
  sources.push_back({super, total_proc});

  ConnectionSet conns;
  conns.cls = net.connections().cls;
  for (auto c : net.connections().items) {
    if (listed.count(c.source_node)) {
      for (int& p : c.processes) p += shift[c.source_node];
      c.source_node = super;
    }
    conns.items.push_back(std::move(c));
  }

  Network out(net.field(), std::move(nodes), std::move(edges), std::move(sources), net.dests(),
              std::move(conns), net.delay_mode(),
              remap_failures(net.erasures(), pm.old_to_new));
  return {std::move(out), std::move(pm)};
}

std::pair<Network, PortMapping> add_super_destination(const Network& net,
                                                      const std::vector<int>& dest_nodes) {
  net.require_valid();
  std::set<int> listed;
  int total_proc = 0, total_ports = 0;
  for (int d : dest_nodes) {
    auto di = net.dest_index(d);
    if (!di) throw UsageError("node " + std::to_string(d) + " is not a declared destination");
    if (!listed.insert(d).second)
      throw UsageError("node " + std::to_string(d) + " listed twice");
    total_proc += net.dests()[*di].processes;
    total_ports += net.node(d).inputs;
  }
  if (dest_nodes.empty()) throw UsageError("no destination nodes listed");

  // Mirror of the super source: one fresh output per original destination
  // input port, each feeding its own super-destination input.
  auto nodes = net.nodes();
  for (int d : dest_nodes) nodes[d].outputs += net.node(d).inputs;
  int super = int(nodes.size());
  nodes.push_back({fresh_node_name(nodes, "super_dest"), total_ports, 0});

  PortMapping pm;
  pm.added_node = super;
  pm.old_to_new = remap_ports(net, nodes);

  auto base = base_offsets(nodes);
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : net.edges()) edges.push_back({pm.old_to_new[a], pm.old_to_new[b]});
  int k = 0;
  for (int d : dest_nodes) {
    for (int j = 0; j < net.node(d).inputs; ++j, ++k) {
      int out = base[d] + nodes[d].inputs + net.node(d).outputs + j;  // appended outputs
      int in = base[super] + k;
      edges.push_back({out, in});
      pm.links.push_back({out, in});
    }
  }

  std::vector<DestDecl> dests;
  for (const auto& d : net.dests())
    if (!listed.count(d.node)) dests.push_back(d);
  dests.push_back({super, total_proc});

  ConnectionSet conns;
  conns.cls = net.connections().cls;
  for (const auto& c : net.connections().items)
    if (!listed.count(c.dest_node)) conns.items.push_back(c);

  Network out(net.field(), std::move(nodes), std::move(edges), net.sources(), std::move(dests),
              std::move(conns), net.delay_mode(),
              remap_failures(net.erasures(), pm.old_to_new));
  return {std::move(out), std::move(pm)};
}

}  // namespace adtnc
