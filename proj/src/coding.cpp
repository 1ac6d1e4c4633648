#include "adtnc/coding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "adtnc/error.hpp"
#include "adtnc/mincut.hpp"

namespace adtnc {

double random_coding_bound(double q, double receivers, double eta, double failures) {
  double base = 1.0 - receivers * failures / q;
  if (base <= 0.0) return 0.0;
  return std::min(1.0, std::pow(base, eta));
}

namespace {

uint64_t pow2_above(uint64_t n) {
  uint64_t q = 2;
  while (q <= n) q <<= 1;
  return q;
}

/* Distinct receivers, in destination declaration order. */
std::vector<int> receiver_nodes(const Network& net, const ConnectionSet& conns) {
  std::vector<int> out;
  for (const auto& d : net.dests())
    for (const auto& c : conns.items)
      if (c.dest_node == d.node) {
        out.push_back(d.node);
        break;
      }
  return out;
}

Network upgraded(const Network& net, int q, uint64_t must_exceed) {
  const Gf* f = net.field();
  if (q > 0)
    f = Gf::from_order(uint64_t(q));
  else if (f->order() <= must_exceed)
    f = Gf::from_order(pow2_above(must_exceed));
  return f == net.field() ? net : net.with_field(f);
}

int quick_mincut(const Network& net, int s, int t, SplitRng& rng) {
  if (net.node_count() <= 12) return mincut_enumeration(net, s, t).value;
  SplitRng r = rng.split(0x9e3779b9u);
  return mincut_algebraic(net, s, t, 8, r).value;
}

/* One receiver's demands, unioned over its connections in listing order. */
std::vector<std::pair<int, int>> demand_list(const Network& net, const ConnectionSet& conns,
                                             int dest_node) {
  std::vector<std::pair<int, int>> demands;
  std::set<std::pair<int, int>> seen;
  for (const auto& c : conns.items) {
    if (c.dest_node != dest_node) continue;
    int si = int(*net.source_index(c.source_node));
    for (int p : c.processes)
      if (seen.insert({si, p}).second) demands.push_back({si, p});
  }
  return demands;
}

/* Zero the encoder of every source except keep; their processes must stay
 * invisible when the construction only solves for one source. */
void silence_other_sources(const Network& net, int keep, CodeAssignment& code) {
  for (const auto& s : net.sources()) {
    if (s.node == keep) continue;
    for (int i = 0; i < s.processes; ++i)
      for (int e : net.output_ports(s.node)) code.encoding[{i, e}] = 0;
  }
}

/* Transfer-times-decoder geometry seen from one source's output ports:
 * entry (k, c) is what output port outs[k] contributes to the c-th stacked
 * destination process. The encoder row for a process multiplies from the
 * left. */
Matrix<Fe> encoder_geometry(const Network& net, const CodeAssignment& code, int src,
                            std::vector<int>& outs) {
  Matrix<Fe> t = transfer_matrix(adjacency_matrix(net, code));
  Matrix<Fe> g_full = t * decoding_matrix(net, code).transposed();
  outs = net.output_ports(src);
  std::vector<int> all_cols(g_full.cols());
  std::iota(all_cols.begin(), all_cols.end(), 0);
  return g_full.submatrix(outs, all_cols);
}

}  // namespace

void check_class(const Network& net, const ConnectionSet& conns) {
  // reference validity first, so an override set gets the same scrutiny the
  // network's own set receives in validate()
  for (const auto& c : conns.items) {
    if (!net.source_index(c.source_node))
      throw UsageError("connection source node " + std::to_string(c.source_node) +
                       " is not a declared source");
    if (!net.dest_index(c.dest_node))
      throw UsageError("connection destination node " + std::to_string(c.dest_node) +
                       " is not a declared destination");
    if (c.processes.empty()) throw UsageError("a connection must demand at least one process");
    int mu = net.sources()[*net.source_index(c.source_node)].processes;
    std::set<int> dedupe;
    for (int p : c.processes) {
      if (p < 0 || p >= mu)
        throw UsageError("demanded process " + std::to_string(p) +
                         " outside the source's range");
      if (!dedupe.insert(p).second)
        throw UsageError("a process is demanded twice in one connection");
    }
  }
  if (conns.cls == ConnClass::general || conns.items.empty()) return;

  std::set<int> source_set;
  for (const auto& c : conns.items) source_set.insert(c.source_node);
  auto single_source = [&] {
    if (source_set.size() != 1)
      throw UsageError(std::string(conn_class_name(conns.cls)) + " uses a single source");
  };
  auto rx = receiver_nodes(net, conns);

  switch (conns.cls) {
    case ConnClass::unicast:
      if (conns.items.size() != 1) throw UsageError("a unicast set holds exactly one connection");
      break;
    case ConnClass::single_multicast: {
      single_source();
      int mu = net.sources()[*net.source_index(*source_set.begin())].processes;
      for (int t : rx)
        if (int(demand_list(net, conns, t).size()) != mu)
          throw UsageError("single_multicast receivers demand every source process");
      break;
    }
    case ConnClass::multiple_multicast: {
      size_t want = 0;
      for (int s : source_set) want += size_t(net.sources()[*net.source_index(s)].processes);
      for (int t : rx)
        if (demand_list(net, conns, t).size() != want)
          throw UsageError(
              "multiple_multicast receivers demand everything from every participating source");
      break;
    }
    case ConnClass::disjoint_multicast: {
      single_source();
      std::set<int> used;
      for (int t : rx)
        for (auto [si, p] : demand_list(net, conns, t))
          if (!used.insert(p).second)
            throw UsageError("disjoint_multicast demands must not overlap across receivers");
      break;
    }
    case ConnClass::two_level_multicast: {
      single_source();
      int mu = net.sources()[*net.source_index(*source_set.begin())].processes;
      std::set<int> used;
      for (int t : rx) {
        auto d = demand_list(net, conns, t);
        if (int(d.size()) == mu) continue;  // full-tier receiver
        for (auto [si, p] : d)
          if (!used.insert(p).second)
            throw UsageError("two_level_multicast partial demands must not overlap");
      }
      break;
    }
    default:
      break;
  }
}

namespace {

CodeVerdict verify_general(const Network& net, const SystemMatrix& sm,
                           const ConnectionSet& conns) {
  const Gf* gf = net.field();
  Fe zero(gf, 0), one(gf, 1);
  CodeVerdict v;
  v.feasible = true;

  std::set<std::pair<int, int>> connected;  // (source index, dest index)
  for (const auto& c : conns.items)
    connected.insert(
        {int(*net.source_index(c.source_node)), int(*net.dest_index(c.dest_node))});

  for (int j = 0; j < int(net.dests().size()); ++j) {
    bool receiver = false;
    for (const auto& p : connected)
      if (p.second == j) receiver = true;
    if (!receiver) continue;

    ReceiverCheck rc;
    rc.dest_node = net.dests()[j].node;

    // a pair without a connection must contribute nothing to this receiver
    std::string leak;
    for (int i = 0; i < int(net.sources().size()) && leak.empty(); ++i) {
      if (connected.count({i, j})) continue;
      Matrix<Fe> blk = sm.block(i, j);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c)
          if (!blk(r, c).is_zero())
            leak = "unintended signal from " + net.node(net.sources()[i].node).name +
                   " reaches " + net.node(rc.dest_node).name;
    }

    // the present blocks, stacked, must form an invertible square system
    std::vector<int> rows;
    for (int i = 0; i < int(net.sources().size()); ++i) {
      if (!connected.count({i, j})) continue;
      for (int r = sm.row_blocks[i].first; r < sm.row_blocks[i].second; ++r) rows.push_back(r);
      for (int p = 0; p < net.sources()[i].processes; ++p) rc.demands.push_back({i, p});
    }
    std::vector<int> cols;
    for (int c = sm.col_blocks[j].first; c < sm.col_blocks[j].second; ++c) cols.push_back(c);
    Matrix<Fe> st = sm.m.submatrix(rows, cols);
    rc.required = int(rows.size());
    rc.achieved_rank = rank(st);
    int nu = int(cols.size());

    if (!leak.empty())
      rc.note = leak;
    else if (int(rows.size()) != nu)
      rc.note = "stacked demand is " + std::to_string(rows.size()) + " processes against " +
                std::to_string(nu) + " outputs; the joint system is not square";
    else if (rc.achieved_rank != nu)
      rc.note = "joint system matrix is singular (rank " + std::to_string(rc.achieved_rank) +
                " of " + std::to_string(nu) + ")";
    else
      rc.ok = true;

    if (rc.ok) {
      v.decoders.push_back(inverse(st, zero, one));
    } else {
      v.feasible = false;
      v.decoders.push_back(Matrix<Fe>(nu, 0, zero));
    }
    v.receivers.push_back(std::move(rc));
  }
  return v;
}

}  // namespace

CodeVerdict verify(const Network& net, const CodeAssignment& code,
                   const std::optional<ConnectionSet>& conns_opt,
                   const std::set<std::pair<int, int>>& dead) {
  net.require_valid();
  const ConnectionSet& conns = conns_opt ? *conns_opt : net.connections();
  check_class(net, conns);
  SystemMatrix sm = system_matrix(net, code, dead);
  if (conns.cls == ConnClass::general) return verify_general(net, sm, conns);

  const Gf* gf = net.field();
  Fe zero(gf, 0), one(gf, 1);
  CodeVerdict v;
  v.feasible = true;
  for (int j = 0; j < int(net.dests().size()); ++j) {
    auto demands = demand_list(net, conns, net.dests()[j].node);
    if (demands.empty()) continue;

    ReceiverCheck rc;
    rc.dest_node = net.dests()[j].node;
    rc.demands = demands;
    rc.required = int(demands.size());
    Matrix<Fe> mj = sm.dest_block(j);
    rc.achieved_rank = rank(mj);

    // unit columns at the demanded processes; zero rows everywhere else force
    // the decoder to cancel whatever it was not asked to deliver
    Matrix<Fe> sel(sm.m.rows(), rc.required, zero);
    for (int k = 0; k < rc.required; ++k)
      sel(sm.row_blocks[rc.demands[k].first].first + rc.demands[k].second, k) = one;

    auto w = solve(mj, sel, zero);
    if (w) {
      rc.ok = true;
      v.decoders.push_back(std::move(*w));
    } else {
      v.feasible = false;
      if (rc.achieved_rank < rc.required)
        rc.note = "rank " + std::to_string(rc.achieved_rank) + " below the demanded rate " +
                  std::to_string(rc.required);
      else
        rc.note = "interference from undemanded processes cannot be cancelled";
      v.decoders.push_back(Matrix<Fe>(mj.cols(), 0, zero));
    }
    v.receivers.push_back(std::move(rc));
  }
  return v;
}

CodeResult random_code(const Network& net, int q, int trials, SplitRng& rng) {
  net.require_valid();
  const ConnectionSet conns = net.connections();
  check_class(net, conns);
  if (conns.items.empty()) throw UsageError("the network declares no connections to code for");

  switch (conns.cls) {
    case ConnClass::multiple_multicast:
      return solve_multiple_multicast(net, q, trials, rng);
    case ConnClass::disjoint_multicast:
      return construct_disjoint_multicast(net, rng, q, trials);
    case ConnClass::two_level_multicast:
      return construct_two_level(net, rng, q, trials);
    case ConnClass::general:
      throw UsageError(
          "no random construction covers a general connection set; verify a supplied "
          "assignment instead");
    default:
      break;
  }
  if (trials < 1) throw UsageError("trials must be at least 1");

  auto rx = receiver_nodes(net, conns);
  Network work = upgraded(net, q, rx.size());
  CodeStats st;
  st.q = work.field()->order();
  st.eta = int(work.edges().size());
  st.bound = random_coding_bound(double(st.q), double(rx.size()), double(st.eta));

  CodeAssignment code;
  CodeVerdict verdict;
  for (int t = 1; t <= trials; ++t) {
    code = random_assignment(work, rng);
    verdict = verify(work, code, conns);
    ++st.trials_run;
    if (verdict.feasible) {
      st.succeeded = true;
      st.success_trial = t;
      break;
    }
  }
  if (!st.succeeded) {
    // separate an impossible demand from plain bad luck
    for (auto& rc : verdict.receivers) {
      if (rc.ok) continue;
      int cut = quick_mincut(work, conns.items[0].source_node, rc.dest_node, rng);
      if (cut < rc.required)
        rc.note += "; min-cut " + std::to_string(cut) + " is below the demanded rate " +
                   std::to_string(rc.required);
    }
  }
  return {std::move(work), std::move(code), std::move(verdict), st};
}

CodeResult construct_disjoint_multicast(const Network& net, SplitRng& rng, int q, int retries) {
  net.require_valid();
  const ConnectionSet conns = net.connections();
  if (conns.cls != ConnClass::disjoint_multicast)
    throw UsageError("construct_disjoint_multicast needs a disjoint_multicast connection set");
  check_class(net, conns);
  if (conns.items.empty()) throw UsageError("the network declares no connections to code for");
  if (retries < 1) throw UsageError("retries must be at least 1");
  int src = conns.items[0].source_node;

  auto rx = receiver_nodes(net, conns);
  int nrx = int(rx.size());
  if (nrx > 10)
    throw UsageError("the exact group rate check enumerates receiver subsets; 10 receivers at most");

  std::map<int, std::vector<int>> want;  // receiver node -> demanded processes, decode order
  for (int t : rx) {
    for (auto [si, p] : demand_list(net, conns, t)) want[t].push_back(p);
    int nu = net.dests()[*net.dest_index(t)].processes;
    if (nu < int(want[t].size()))
      throw UsageError("destination " + net.node(t).name + " declares " + std::to_string(nu) +
                       " processes but demands " + std::to_string(want[t].size()));
  }

  Network work = upgraded(net, q, nrx);

  // every receiver group must be able to carry its combined rate
  for (unsigned mask = 1; mask < (1u << nrx); ++mask) {
    std::vector<int> group;
    int rate = 0;
    for (int i = 0; i < nrx; ++i)
      if (mask & (1u << i)) {
        group.push_back(rx[i]);
        rate += int(want[rx[i]].size());
      }
    int cut;
    if (group.size() == 1) {
      cut = quick_mincut(work, src, group[0], rng);
    } else {
      auto [sup, pm] = add_super_destination(work, group);
      cut = quick_mincut(sup, src, pm.added_node, rng);
    }
    if (cut < rate) {
      std::string names;
      for (int g : group) names += (names.empty() ? "" : ", ") + work.node(g).name;
      throw InfeasibleError("receiver group {" + names + "} demands rate " +
                            std::to_string(rate) + " but its cut carries only " +
                            std::to_string(cut));
    }
  }

  const Gf* gf = work.field();
  Fe zero(gf, 0), one(gf, 1);
  int mu = work.sources()[*work.source_index(src)].processes;

  CodeStats st;
  st.q = gf->order();
  st.eta = int(work.edges().size());
  st.bound = random_coding_bound(double(st.q), double(nrx), double(st.eta));

  // receiver process columns that carry the demand, and the process each one
  // must reproduce
  std::vector<int> cols, target;
  {
    int off = 0;
    for (const auto& d : work.dests()) {
      auto it = want.find(d.node);
      if (it != want.end())
        for (int k = 0; k < int(it->second.size()); ++k) {
          cols.push_back(off + k);
          target.push_back(it->second[k]);
        }
      off += d.processes;
    }
  }

  CodeAssignment code;
  CodeVerdict verdict;
  for (int attempt = 0; attempt < retries && !st.succeeded; ++attempt) {
    code = random_assignment(work, rng);
    silence_other_sources(work, src, code);
    std::vector<int> outs;
    Matrix<Fe> g = encoder_geometry(work, code, src, outs);
    std::vector<int> all_rows(g.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    Matrix<Fe> g_r = g.submatrix(all_rows, cols);

    Matrix<Fe> sel(mu, int(cols.size()), zero);
    for (int k = 0; k < int(cols.size()); ++k) sel(target[k], k) = one;

    ++st.trials_run;
    auto at = solve(g_r.transposed(), sel.transposed(), zero);
    if (!at) continue;  // unlucky relay draw; try fresh coefficients
    Matrix<Fe> a = at->transposed();  // mu x |O(src)|
    for (int i = 0; i < mu; ++i)
      for (int k = 0; k < int(outs.size()); ++k) code.encoding[{i, outs[k]}] = a(i, k).value();

    verdict = verify(work, code, conns);
    if (verdict.feasible) {
      st.succeeded = true;
      st.success_trial = st.trials_run;
    }
  }
  return {std::move(work), std::move(code), std::move(verdict), st};
}

CodeResult construct_two_level(const Network& net, SplitRng& rng, int q, int retries) {
  net.require_valid();
  const ConnectionSet conns = net.connections();
  if (conns.cls != ConnClass::two_level_multicast)
    throw UsageError("construct_two_level needs a two_level_multicast connection set");
  check_class(net, conns);
  if (conns.items.empty()) throw UsageError("the network declares no connections to code for");
  if (retries < 1) throw UsageError("retries must be at least 1");
  int src = conns.items[0].source_node;
  int mu = net.sources()[*net.source_index(src)].processes;

  auto rx = receiver_nodes(net, conns);
  std::vector<int> partial, full;
  std::map<int, std::vector<int>> want;
  for (int t : rx) {
    auto d = demand_list(net, conns, t);
    int nu = net.dests()[*net.dest_index(t)].processes;
    if (int(d.size()) == mu) {
      full.push_back(t);
      if (nu < mu)
        throw UsageError("destination " + net.node(t).name +
                         " wants every process but declares only " + std::to_string(nu));
    } else {
      partial.push_back(t);
      for (auto [si, p] : d) want[t].push_back(p);
      if (nu < int(d.size()))
        throw UsageError("destination " + net.node(t).name + " declares " + std::to_string(nu) +
                         " processes but demands " + std::to_string(d.size()));
    }
  }
  int npart = int(partial.size());
  if (npart > 10)
    throw UsageError("the exact group rate check enumerates receiver subsets; 10 receivers at most");

  Network work = upgraded(net, q, rx.size());

  // group rate condition over the subset tier, full rate to everyone else
  for (unsigned mask = 1; mask < (1u << npart); ++mask) {
    std::vector<int> group;
    int rate = 0;
    for (int i = 0; i < npart; ++i)
      if (mask & (1u << i)) {
        group.push_back(partial[i]);
        rate += int(want[partial[i]].size());
      }
    int cut;
    if (group.size() == 1) {
      cut = quick_mincut(work, src, group[0], rng);
    } else {
      auto [sup, pm] = add_super_destination(work, group);
      cut = quick_mincut(sup, src, pm.added_node, rng);
    }
    if (cut < rate) {
      std::string names;
      for (int g : group) names += (names.empty() ? "" : ", ") + work.node(g).name;
      throw InfeasibleError("receiver group {" + names + "} demands rate " +
                            std::to_string(rate) + " but its cut carries only " +
                            std::to_string(cut));
    }
  }
  for (int t : full) {
    int cut = quick_mincut(work, src, t, rng);
    if (cut < mu)
      throw InfeasibleError("receiver " + work.node(t).name + " has min-cut " +
                            std::to_string(cut) + ", below the full rate " + std::to_string(mu));
  }

  const Gf* gf = work.field();
  Fe zero(gf, 0), one(gf, 1);

  CodeStats st;
  st.q = gf->order();
  st.eta = int(work.edges().size());
  st.bound = random_coding_bound(double(st.q), double(rx.size()), double(st.eta));

  std::vector<int> cols, target;  // subset-tier process columns only
  {
    int off = 0;
    for (const auto& d : work.dests()) {
      auto it = want.find(d.node);
      if (it != want.end())
        for (int k = 0; k < int(it->second.size()); ++k) {
          cols.push_back(off + k);
          target.push_back(it->second[k]);
        }
      off += d.processes;
    }
  }

  CodeAssignment code;
  CodeVerdict verdict;
  for (int attempt = 0; attempt < retries && !st.succeeded; ++attempt) {
    code = random_assignment(work, rng);
    silence_other_sources(work, src, code);
    std::vector<int> outs;
    Matrix<Fe> g = encoder_geometry(work, code, src, outs);
    std::vector<int> all_rows(g.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    Matrix<Fe> g_r = g.submatrix(all_rows, cols);

    Matrix<Fe> sel(mu, int(cols.size()), zero);
    for (int k = 0; k < int(cols.size()); ++k) sel(target[k], k) = one;

    ++st.trials_run;
    auto at = solve(g_r.transposed(), sel.transposed(), zero);
    if (!at) continue;
    Matrix<Fe> a0 = at->transposed();

    // anything in the null space of the subset constraints is free; spend that
    // freedom on making the full receivers' blocks invertible
    Matrix<Fe> nullsp = left_nullspace(g_r, zero, one);
    for (int inner = 0; inner < 8 && !st.succeeded; ++inner) {
      Matrix<Fe> a = a0;
      if (nullsp.rows() > 0) {
        Matrix<Fe> c(mu, nullsp.rows(), zero);
        for (int i = 0; i < c.rows(); ++i)
          for (int j = 0; j < c.cols(); ++j) c(i, j) = Fe(gf, gf->uniform(rng));
        a = a + c * nullsp;
      }
      for (int i = 0; i < mu; ++i)
        for (int k = 0; k < int(outs.size()); ++k) code.encoding[{i, outs[k]}] = a(i, k).value();
      verdict = verify(work, code, conns);
      if (verdict.feasible) {
        st.succeeded = true;
        st.success_trial = st.trials_run;
      }
      if (nullsp.rows() == 0) break;  // nothing left to vary
    }
  }
  return {std::move(work), std::move(code), std::move(verdict), st};
}

CodeResult solve_multiple_multicast(const Network& net, int q, int trials, SplitRng& rng) {
  net.require_valid();
  const ConnectionSet conns = net.connections();
  if (conns.cls != ConnClass::multiple_multicast)
    throw UsageError("solve_multiple_multicast needs a multiple_multicast connection set");
  check_class(net, conns);
  if (conns.items.empty()) throw UsageError("the network declares no connections to code for");
  if (trials < 1) throw UsageError("trials must be at least 1");

  auto rx = receiver_nodes(net, conns);
  Network work = upgraded(net, q, rx.size());
  const Gf* gf = work.field();

  // participating sources, in declaration order
  std::vector<int> src_nodes;
  for (const auto& s : work.sources())
    for (const auto& c : conns.items)
      if (c.source_node == s.node) {
        src_nodes.push_back(s.node);
        break;
      }

  auto [sup, pm] = add_super_source(work, src_nodes);
  int super = pm.added_node;

  // link k forwards output slot j of the i-th joined source
  std::vector<int> link_owner;
  for (int i = 0; i < int(src_nodes.size()); ++i)
    for (int j = 0; j < work.node(src_nodes[i]).outputs; ++j) link_owner.push_back(i);

  std::vector<int> proc_off(src_nodes.size() + 1, 0);
  for (int i = 0; i < int(src_nodes.size()); ++i)
    proc_off[i + 1] = proc_off[i] + work.sources()[*work.source_index(src_nodes[i])].processes;
  int total_proc = proc_off.back();

  // demand bound per receiver, before burning trials
  for (int t : rx) {
    int cut = quick_mincut(sup, super, t, rng);
    if (cut < total_proc)
      throw InfeasibleError("receiver " + work.node(t).name + " has min-cut " +
                            std::to_string(cut) + ", below the joint rate " +
                            std::to_string(total_proc));
  }

  CodeStats st;
  st.q = gf->order();
  st.eta = int(sup.edges().size());
  st.bound = random_coding_bound(double(st.q), double(rx.size()), double(st.eta));

  std::vector<int> new_to_old(sup.port_count(), -1);
  for (int p = 0; p < work.port_count(); ++p) new_to_old[pm.old_to_new[p]] = p;

  // carry a joined-network assignment back onto the original
  auto translate = [&](const CodeAssignment& cs) {
    CodeAssignment out;
    for (int n = 0; n < work.node_count(); ++n)
      for (int in : work.input_ports(n))
        for (int o : work.output_ports(n)) {
          auto it = cs.internal.find({pm.old_to_new[in], pm.old_to_new[o]});
          if (it != cs.internal.end()) out.internal[{in, o}] = it->second;
        }
    // the original encoder is the joined encoder pushed through each source's
    // pass-through relay coefficients
    for (int i = 0; i < int(src_nodes.size()); ++i) {
      int s = src_nodes[i];
      for (int g = proc_off[i]; g < proc_off[i + 1]; ++g)
        for (int o : work.output_ports(s)) {
          uint32_t acc = 0;
          for (int k = 0; k < int(pm.links.size()); ++k) {
            if (link_owner[k] != i) continue;
            auto a_it = cs.encoding.find({g, pm.links[k].first});
            auto b_it = cs.internal.find({pm.links[k].second, pm.old_to_new[o]});
            if (a_it == cs.encoding.end() || b_it == cs.internal.end()) continue;
            acc = gf->add(acc, gf->mul(a_it->second, b_it->second));
          }
          out.encoding[{g - proc_off[i], o}] = acc;
        }
    }
    for (const auto& [key, val] : cs.decoding) {
      int old_port = new_to_old[key.first];
      if (old_port >= 0) out.decoding[{old_port, key.second}] = val;
    }
    return out;
  };

  auto souts = sup.output_ports(super);
  CodeAssignment code;
  CodeVerdict verdict;
  for (int t = 1; t <= trials; ++t) {
    CodeAssignment cs = random_assignment(sup, rng);
    // sources that never joined stay silent, exactly as in the constructions
    silence_other_sources(sup, super, cs);
    // block-diagonal joined encoder: a process only loads its own source's
    // pass-through links
    for (int g = 0; g < total_proc; ++g) {
      int owner = 0;
      while (g >= proc_off[owner + 1]) ++owner;
      for (int k = 0; k < int(souts.size()); ++k)
        if (link_owner[k] != owner) cs.encoding[{g, souts[k]}] = 0;
    }
    ++st.trials_run;
    if (!verify(sup, cs).feasible) continue;
    code = translate(cs);
    verdict = verify(work, code, conns);
    st.succeeded = verdict.feasible;
    st.success_trial = t;
    break;
  }
  return {std::move(work), std::move(code), std::move(verdict), st};
}

}  // namespace adtnc
