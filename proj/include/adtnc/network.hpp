#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adtnc/gf.hpp"

namespace adtnc {

/* Layered relay network: nodes own numbered input and output ports, and the
 * physical topology is a set of unit-capacity directed edges from output
 * ports to input ports. Several edges leaving one output port form a
 * broadcast hyperedge; several edges entering one input port superpose
 * additively in the field. Port ids are derived, never stored: nodes in
 * declaration order, each node's inputs before its outputs. Ids are 0-based
 * internally and 1-based in files and reports.
 */

enum class PortDir { in, out };

struct Port {
  int id;      // dense, derivation order
  int node;    // owner index
  PortDir dir;
  int slot;    // index within the owner's input or output group
};

struct NodeDecl {
  std::string name;
  int inputs = 0;
  int outputs = 0;
};

struct SourceDecl {
  int node;
  int processes;  // mu: number of injected processes

  bool operator==(const SourceDecl&) const = default;
};

struct DestDecl {
  int node;
  int processes;  // nu: number of decoded output processes

  bool operator==(const DestDecl&) const = default;
};

enum class ConnClass {
  unicast,
  single_multicast,
  multiple_multicast,
  disjoint_multicast,
  two_level_multicast,
  general,
};

std::string conn_class_name(ConnClass c);
std::optional<ConnClass> conn_class_from_name(const std::string& s);

struct Connection {
  int source_node;
  int dest_node;
  std::vector<int> processes;  // demanded source processes, 0-based, sorted
};

struct ConnectionSet {
  ConnClass cls = ConnClass::general;
  std::vector<Connection> items;
};

/* Link failure description: either an explicit list of (pattern, probability)
 * pairs or an independent per-edge erasure probability. */
struct FailurePattern {
  std::vector<std::pair<int, int>> edges;  // (out port, in port), 0-based
};

struct FailureModel {
  std::vector<std::pair<FailurePattern, double>> patterns;
  std::optional<double> iid;
};

struct Issue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  bool valid = true;     // no structural issues
  bool acyclic = true;   // port-level graph has no directed cycle
  std::vector<Issue> issues;
};

/* Coding coefficients for one network. All maps default missing keys to zero;
 * values are raw field encodings interpreted in the network's field.
 *   encoding  (process local to the port's source, output port) -> value
 *   internal  (input port, output port of the same node)        -> value
 *   decoding  (input port, process local to the port's dest)    -> value
 */
struct CodeAssignment {
  std::map<std::pair<int, int>, uint32_t> encoding;
  std::map<std::pair<int, int>, uint32_t> internal;
  std::map<std::pair<int, int>, uint32_t> decoding;

  bool operator==(const CodeAssignment&) const = default;
};

class Network {
 public:
  Network(const Gf* field, std::vector<NodeDecl> nodes,
          std::vector<std::pair<int, int>> edges, std::vector<SourceDecl> sources,
          std::vector<DestDecl> dests, ConnectionSet conns = {},
          bool delay_mode = false, std::optional<FailureModel> erasures = {});

  const Gf* field() const { return field_; }
  bool delay_mode() const { return delay_mode_; }
  const std::optional<FailureModel>& erasures() const { return erasures_; }

  int node_count() const { return int(nodes_.size()); }
  const std::vector<NodeDecl>& nodes() const { return nodes_; }
  const NodeDecl& node(int i) const { return nodes_.at(i); }
  std::optional<int> node_index(const std::string& name) const;

  int port_count() const { return int(ports_.size()); }
  const std::vector<Port>& ports() const { return ports_; }
  const Port& port(int id) const { return ports_.at(id); }
  const std::vector<int>& input_ports(int node) const { return in_ports_.at(node); }
  const std::vector<int>& output_ports(int node) const { return out_ports_.at(node); }

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& edge_targets(int out_port) const { return out_adj_.at(out_port); }
  const std::vector<int>& edge_sources(int in_port) const { return in_adj_.at(in_port); }

  const std::vector<SourceDecl>& sources() const { return sources_; }
  const std::vector<DestDecl>& dests() const { return dests_; }
  std::optional<int> source_index(int node) const;
  std::optional<int> dest_index(int node) const;
  const ConnectionSet& connections() const { return conns_; }

  int total_source_processes() const;
  int total_dest_processes() const;

  ValidationReport validate() const;
  // Throws UsageError when validate() reports issues.
  void require_valid() const;

  // Broadcast view: (output port, sorted targets), ports with no edge omitted.
  std::vector<std::pair<int, std::vector<int>>> hyperedges() const;

  // Topological order of the port graph (edges plus the total intra-node
  // input->output relation); nullopt when the graph has a cycle.
  std::optional<std::vector<int>> topological_ports() const;

  // Structure-preserving rebinds; topology and declarations are copied.
  Network with_field(const Gf* f) const;
  Network with_connections(ConnectionSet conns) const;
  Network with_dest_processes(int node, int processes) const;
  Network with_endpoints(std::vector<SourceDecl> sources, std::vector<DestDecl> dests) const;
  Network with_edges_removed(const std::vector<std::pair<int, int>>& dead) const;
  Network with_delay(bool delay) const;
  Network with_erasures(std::optional<FailureModel> erasures) const;

 private:
  const Gf* field_;
  std::vector<NodeDecl> nodes_;
  std::vector<Port> ports_;
  std::vector<std::vector<int>> in_ports_, out_ports_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> out_adj_, in_adj_;
  std::vector<SourceDecl> sources_;
  std::vector<DestDecl> dests_;
  ConnectionSet conns_;
  bool delay_mode_ = false;
  std::optional<FailureModel> erasures_;
};

/* Port correspondence produced by the endpoint transforms. old_to_new maps
 * every original port id to its id in the transformed network; the transform
 * never deletes ports. links lists the pass-through edges added by the
 * transform in creation order (listed endpoint order, then process order),
 * as (output port, input port) in new ids. */
struct PortMapping {
  std::vector<int> old_to_new;
  int added_node = -1;
  std::vector<std::pair<int, int>> links;
};

// Adds a super source feeding every listed source through fresh pass-through
// edges; listed sources become relays and the new node becomes the only
// source (its process count is the sum of the originals). Connections are
// re-pointed at the super source with process indices shifted into the
// concatenated numbering.
std::pair<Network, PortMapping> add_super_source(const Network& net,
                                                 const std::vector<int>& source_nodes);

// Adds a super destination fed by every listed destination through fresh
// pass-through edges; listed destinations become relays and the new node
// becomes the only destination with process count equal to the sum of the
// originals. Connections involving the listed destinations are dropped.
std::pair<Network, PortMapping> add_super_destination(const Network& net,
                                                      const std::vector<int>& dest_nodes);

}  // namespace adtnc
