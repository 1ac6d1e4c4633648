#include "adtnc/mincut.hpp"

#include <cmath>
#include <set>
#include <string>

#include "adtnc/error.hpp"
#include "adtnc/matrix.hpp"
#include "adtnc/system.hpp"

namespace adtnc {

namespace {

void check_pair(const Network& net, int s, int t) {
  if (s < 0 || s >= net.node_count() || t < 0 || t >= net.node_count())
    throw UsageError("cut endpoints must be node indices");
  if (s == t) throw UsageError("cut endpoints must differ");
  net.require_valid();
  if (!net.validate().acyclic)
    throw UsageError("min-cut is defined on acyclic networks");
}

double per_trial_confidence(const Network& net) {
  double q = double(net.field()->order());
  return std::pow(1.0 - 1.0 / q, double(net.edges().size()));
}

}  // namespace

std::string cut_method_name(CutMethod m) {
  return m == CutMethod::enumeration ? "enumeration" : "algebraic";
}

int cut_rank(const Network& net, const std::vector<int>& omega) {
  std::set<int> inside(omega.begin(), omega.end());
  std::vector<int> rows, cols;
  std::vector<int> row_of(net.port_count(), -1), col_of(net.port_count(), -1);
  for (int v = 0; v < net.node_count(); ++v) {
    if (inside.count(v)) {
      for (int p : net.output_ports(v)) {
        row_of[p] = int(rows.size());
        rows.push_back(p);
      }
    } else {
      for (int p : net.input_ports(v)) {
        col_of[p] = int(cols.size());
        cols.push_back(p);
      }
    }
  }
  if (rows.empty() || cols.empty()) return 0;
  const Gf* f = net.field();
  Matrix<Fe> g(int(rows.size()), int(cols.size()), Fe(f, 0));
  for (auto [a, b] : net.edges())
    if (row_of[a] >= 0 && col_of[b] >= 0) g(row_of[a], col_of[b]) = Fe(f, 1);
  return rank(g);
}

Network mincut_probe(const Network& net, int s_node, int t_node) {
  return net.with_endpoints({{s_node, int(net.output_ports(s_node).size())}},
                            {{t_node, int(net.input_ports(t_node).size())}});
}

CutReport mincut_enumeration(const Network& net, int s_node, int t_node, int node_cap) {
  check_pair(net, s_node, t_node);
  if (net.node_count() > node_cap)
    throw UsageError("enumeration over " + std::to_string(net.node_count()) +
                     " nodes exceeds the cap of " + std::to_string(node_cap) +
                     "; use the algebraic method");

  std::vector<int> rest;
  for (int v = 0; v < net.node_count(); ++v)
    if (v != s_node && v != t_node) rest.push_back(v);

  CutReport rep;
  rep.method = CutMethod::enumeration;
  rep.s_node = s_node;
  rep.t_node = t_node;
  rep.value = -1;
  for (uint64_t mask = 0; mask < (uint64_t(1) << rest.size()); ++mask) {
    std::vector<int> omega{s_node};
    for (size_t i = 0; i < rest.size(); ++i)
      if (mask >> i & 1) omega.push_back(rest[i]);
    std::sort(omega.begin(), omega.end());
    int r = cut_rank(net, omega);
    if (rep.value < 0 || r < rep.value) {
      rep.value = r;
      rep.omega = omega;
    }
  }
  return rep;
}

CutReport mincut_algebraic(const Network& net, int s_node, int t_node, int trials,
                           SplitRng& rng) {
  check_pair(net, s_node, t_node);
  if (trials < 1) throw UsageError("at least one trial required");

  CutReport rep;
  rep.method = CutMethod::algebraic;
  rep.s_node = s_node;
  rep.t_node = t_node;
  rep.trials = trials;
  rep.confidence = per_trial_confidence(net);
  rep.low_field_warning = rep.confidence < 0.5;

  if (net.output_ports(s_node).empty() || net.input_ports(t_node).empty()) return rep;
  Network probe = mincut_probe(net, s_node, t_node);
  for (int i = 0; i < trials; ++i) {
    auto code = random_assignment(probe, rng);
    int r = rank(system_matrix(probe, code).m);
    if (r > rep.value) {
      rep.value = r;
      rep.assignment = code;
    }
  }
  return rep;
}

std::vector<CutReport> mincut_all_pairs(const Network& net,
                                        const std::vector<std::pair<int, int>>& pairs,
                                        std::optional<CutMethod> force, int trials,
                                        SplitRng& rng) {
  CutMethod method = force.value_or(net.node_count() <= 12 ? CutMethod::enumeration
                                                           : CutMethod::algebraic);
  std::vector<CutReport> out;
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [s, t] = pairs[i];
    if (method == CutMethod::enumeration) {
      out.push_back(mincut_enumeration(net, s, t));
    } else {
      SplitRng child = rng.split(i);
      out.push_back(mincut_algebraic(net, s, t, trials, child));
    }
  }
  return out;
}

}  // namespace adtnc
