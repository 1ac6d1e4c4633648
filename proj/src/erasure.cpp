#include "adtnc/erasure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "adtnc/error.hpp"
#include "adtnc/mincut.hpp"
#include "adtnc/system.hpp"

namespace adtnc {

namespace {

uint64_t pow2_above(uint64_t n) {
  uint64_t q = 2;
  while (q <= n) q <<= 1;
  return q;
}

Network upgraded(const Network& net, int q, uint64_t must_exceed) {
  const Gf* f = net.field();
  if (q > 0)
    f = Gf::from_order(uint64_t(q));
  else if (f->order() <= must_exceed)
    f = Gf::from_order(pow2_above(must_exceed));
  return f == net.field() ? net : net.with_field(f);
}

std::vector<std::pair<int, int>> canonical_edges(const FailurePattern& f) {
  auto e = f.edges;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

std::string pattern_text(const FailurePattern& f) {
  if (f.edges.empty()) return "{no failures}";
  std::string s = "{";
  for (size_t i = 0; i < f.edges.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(f.edges[i].first + 1) + "->" + std::to_string(f.edges[i].second + 1);
  }
  return s + "}";
}

/* Demanded processes per connected (source node, dest node) pair. */
std::map<std::pair<int, int>, std::set<int>> pair_rates(const ConnectionSet& conns) {
  std::map<std::pair<int, int>, std::set<int>> rate;
  for (const auto& c : conns.items)
    for (int p : c.processes) rate[{c.source_node, c.dest_node}].insert(p);
  return rate;
}

int residual_cut(const Network& survivor, int s, int t, SplitRng& rng) {
  if (survivor.node_count() <= 12) return mincut_enumeration(survivor, s, t).value;
  SplitRng r = rng.split(0x9e3779b9u);
  return mincut_algebraic(survivor, s, t, 8, r).value;
}

}  // namespace

FailedInstance apply_failure(const Network& net, const FailurePattern& f) {
  auto edges = canonical_edges(f);
  Network survivor = net.with_edges_removed(edges).with_erasures(std::nullopt);
  return {std::move(survivor), {edges.begin(), edges.end()}};
}

std::vector<std::pair<FailurePattern, double>> expand_failures(const Network& net) {
  net.require_valid();
  const auto& model = net.erasures();
  std::map<std::vector<std::pair<int, int>>, double> acc;
  if (!model) {
    acc[{}] = 1.0;
  } else if (model->iid) {
    const double p = *model->iid;
    const int e = int(net.edges().size());
    if (e > 16)
      throw UsageError("iid expansion over " + std::to_string(e) +
                       " edges exceeds the 65536-pattern cap; sample instead");
    for (uint32_t mask = 0; mask < (uint32_t(1) << e); ++mask) {
      std::vector<std::pair<int, int>> ed;
      double pr = 1.0;
      for (int i = 0; i < e; ++i) {
        if (mask >> i & 1) {
          ed.push_back(net.edges()[i]);
          pr *= p;
        } else {
          pr *= 1.0 - p;
        }
      }
      std::sort(ed.begin(), ed.end());
      acc[ed] += pr;
    }
  } else {
    double sum = 0.0;
    for (const auto& [pat, prob] : model->patterns) {
      acc[canonical_edges(pat)] += prob;
      sum += prob;
    }
    // leftover mass means "everything stayed up"
    if (sum < 1.0 - 1e-12) acc[{}] += 1.0 - sum;
  }
  std::vector<std::pair<FailurePattern, double>> out;
  out.reserve(acc.size());
  for (const auto& [edges, prob] : acc) out.push_back({FailurePattern{edges}, prob});
  return out;
}

FailurePattern sample_failure(const Network& net, SplitRng& rng) {
  net.require_valid();
  const auto& model = net.erasures();
  if (!model) return {};
  if (model->iid) {
    FailurePattern f;
    for (const auto& e : net.edges())
      if (rng.next_double() < *model->iid) f.edges.push_back(e);
    return f;
  }
  double u = rng.next_double();
  double cum = 0.0;
  for (const auto& [pat, prob] : model->patterns) {
    cum += prob;
    if (u < cum) return FailurePattern{canonical_edges(pat)};
  }
  return {};  // leftover mass: all alive
}

double time_average_mincut(const Network& net, int s, int t) {
  double acc = 0.0;
  for (const auto& [f, prob] : expand_failures(net)) {
    if (prob <= 0.0) continue;
    acc += prob * mincut_enumeration(apply_failure(net, f).network, s, t).value;
  }
  return acc;
}

MonteCarloCut time_average_mincut_mc(const Network& net, int s, int t, int samples,
                                     SplitRng& rng) {
  if (samples < 2) throw UsageError("a standard error needs at least two samples");
  net.require_valid();
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    FailurePattern f = sample_failure(net, rng);
    double v = mincut_enumeration(apply_failure(net, f).network, s, t).value;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  double var = (sumsq - double(samples) * mean * mean) / double(samples - 1);
  if (var < 0.0) var = 0.0;
  return {mean, std::sqrt(var / samples), samples};
}

StaticReport static_solution(const Network& net, int q, int trials, SplitRng& rng) {
  net.require_valid();
  const ConnectionSet& conns = net.connections();
  if (conns.items.empty())
    throw UsageError("the network declares no connections to protect");
  check_class(net, conns);
  if (trials < 1) throw UsageError("trials must be at least 1");

  auto patterns = expand_failures(net);
  auto rates = pair_rates(conns);

  // Every pattern must leave each connected pair enough cut; otherwise no
  // fixed assignment can exist and redrawing is pointless.
  for (const auto& [f, prob] : patterns) {
    if (prob <= 0.0) continue;
    FailedInstance inst = apply_failure(net, f);
    for (const auto& [pair, procs] : rates) {
      int cut = residual_cut(inst.network, pair.first, pair.second, rng);
      if (cut < int(procs.size()))
        throw InfeasibleError("under failure pattern " + pattern_text(f) + " the cut from " +
                              net.node(pair.first).name + " to " + net.node(pair.second).name +
                              " carries " + std::to_string(cut) + " of the " +
                              std::to_string(procs.size()) + " demanded processes");
    }
  }

  std::set<int> rx;
  for (const auto& c : conns.items) rx.insert(c.dest_node);

  Network work = upgraded(net, q, uint64_t(rx.size()) * patterns.size());

  StaticReport rep{work, {}, {}, false, {}};
  rep.stats.q = work.field()->order();
  rep.stats.eta = int(net.edges().size());
  rep.stats.bound = random_coding_bound(double(rep.stats.q), double(rx.size()),
                                        double(rep.stats.eta), double(patterns.size()));

  for (int t = 0; t < trials; ++t) {
    CodeAssignment code = random_assignment(work, rng);
    std::vector<PatternVerdict> checks;
    bool all_ok = true;
    for (const auto& [f, prob] : patterns) {
      if (prob <= 0.0) continue;
      std::set<std::pair<int, int>> dead(f.edges.begin(), f.edges.end());
      CodeVerdict v = verify(work, code, {}, dead);
      all_ok = all_ok && v.feasible;
      checks.push_back({f, prob, std::move(v)});
      if (!all_ok) break;
    }
    rep.stats.trials_run = t + 1;
    rep.code = std::move(code);
    rep.checks = std::move(checks);
    if (all_ok) {
      rep.found = true;
      rep.stats.succeeded = true;
      rep.stats.success_trial = t + 1;
      break;
    }
  }
  return rep;
}

TimeVaryingReport feasibility_time_varying(const Network& net) {
  net.require_valid();
  const ConnectionSet& conns = net.connections();
  if (conns.items.empty())
    throw UsageError("the network declares no connections to judge");
  check_class(net, conns);

  auto patterns = expand_failures(net);
  auto rates = pair_rates(conns);

  std::map<std::pair<int, int>, double> average;
  for (const auto& [f, prob] : patterns) {
    if (prob <= 0.0) continue;
    FailedInstance inst = apply_failure(net, f);
    for (const auto& [pair, procs] : rates)
      average[pair] +=
          prob * mincut_enumeration(inst.network, pair.first, pair.second).value;
  }

  TimeVaryingReport rep;
  rep.feasible = true;
  for (const auto& [pair, procs] : rates) {
    PairMargin m;
    m.source_node = pair.first;
    m.dest_node = pair.second;
    m.demanded = double(procs.size());
    m.average_cut = average[pair];
    m.margin = m.average_cut - m.demanded;
    if (m.margin < -1e-9) rep.feasible = false;
    rep.pairs.push_back(m);
  }
  return rep;
}

}  // namespace adtnc
