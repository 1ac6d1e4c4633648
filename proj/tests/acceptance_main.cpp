// Acceptance suite: one line per criterion, pass/fail with timing, nonzero
// exit when anything fails. Each criterion is self-contained and seeded, so a
// failure reproduces by running the binary again.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adtnc/coding.hpp"
#include "adtnc/delay.hpp"
#include "adtnc/erasure.hpp"
#include "adtnc/json_io.hpp"
#include "adtnc/mincut.hpp"
#include "oracles.hpp"

using namespace adtnc;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fix(const std::string& name) {
  return std::string(ADTNC_FIXTURE_DIR) + "/" + name;
}

struct CliRun {
  int rc = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(ADTNC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun r;
  if (!pipe) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// S broadcasts over a crossing middle node; both receivers can take rate 2.
Network butterfly(const Gf* f) {
  return Network(f,
                 {{"S", 0, 2}, {"A", 1, 2}, {"B", 1, 2}, {"M", 2, 1}, {"T1", 2, 0}, {"T2", 2, 0}},
                 {{0, 2}, {1, 5}, {3, 11}, {4, 8}, {6, 13}, {7, 9}, {10, 12}, {10, 14}},
                 {{0, 2}}, {{4, 2}, {5, 2}});
}

// S's two ports broadcast to three two-port receivers over parallel wires.
Network triple_parallel(const Gf* f) {
  return Network(f,
                 {{"S", 0, 2}, {"T1", 2, 0}, {"T2", 2, 0}, {"T3", 2, 0}},
                 {{0, 2}, {0, 4}, {0, 6}, {1, 3}, {1, 5}, {1, 7}},
                 {{0, 2}}, {{1, 2}, {2, 2}, {3, 2}});
}

// The worked example plus a second receiver tapping the relays' spare ports.
Network relay_tap(const Gf* f) {
  return Network(f,
                 {{"S", 0, 2}, {"V1", 2, 2}, {"V2", 2, 2}, {"T", 2, 0}, {"T2", 2, 0}},
                 {{0, 2}, {0, 7}, {1, 3}, {4, 11}, {8, 10}, {9, 11}, {5, 12}, {8, 13}},
                 {{0, 2}}, {{3, 2}, {4, 2}});
}

ConnectionSet multicast_all(const Network& net) {
  ConnectionSet cs;
  cs.cls = ConnClass::single_multicast;
  std::vector<int> all;
  for (int p = 0; p < net.sources()[0].processes; ++p) all.push_back(p);
  for (const auto& d : net.dests()) cs.items.push_back({net.sources()[0].node, d.node, all});
  return cs;
}

// S feeds two parallel unit edges into T; each erases independently.
Network parallel_pair(const Gf* f) {
  FailureModel m;
  m.iid = 0.5;
  return Network(f, {{"S", 0, 2}, {"T", 2, 0}}, {{0, 2}, {1, 3}}, {{0, 2}}, {{1, 2}}, {},
                 false, m);
}

Outcome c1_static_adjacency_golden() {
  const Gf* f = Gf::from_order(16);
  Network net = oracle::relay_example(f);
  CodeAssignment code;
  // Distinct values in all eight relay slots, textbook numbering (in, out).
  const int slots[8][3] = {{3, 7, 2}, {3, 8, 3}, {4, 7, 4}, {4, 8, 5},
                           {5, 9, 6}, {5, 10, 7}, {6, 9, 8}, {6, 10, 9}};
  for (const auto& s : slots)
    code.internal[{oracle::relay_port(s[0]), oracle::relay_port(s[1])}] = uint32_t(s[2]);

  std::vector<std::vector<uint32_t>> want(13, std::vector<uint32_t>(13, 0));
  const int edges[6][2] = {{1, 3}, {1, 6}, {2, 4}, {7, 12}, {9, 11}, {10, 12}};
  for (const auto& e : edges) want[e[0]][e[1]] = 1;
  for (const auto& s : slots) want[s[0]][s[1]] = uint32_t(s[2]);

  Matrix<Fe> fmat = adjacency_matrix(net, code);
  if (fmat.rows() != 12 || fmat.cols() != 12)
    return {false, "adjacency is not 12x12"};
  for (int i = 1; i <= 12; ++i)
    for (int j = 1; j <= 12; ++j)
      if (fmat(oracle::relay_port(i), oracle::relay_port(j)).value() != want[i][j]) {
        std::ostringstream o;
        o << "entry (" << i << ", " << j << ") in textbook numbering is "
          << fmat(oracle::relay_port(i), oracle::relay_port(j)).value() << ", wanted "
          << want[i][j];
        return {false, o.str()};
      }
  return {true, "all 144 entries match, 6 unit edges + 8 slots"};
}

Outcome c2_mincut_equivalence() {
  SplitRng rng(20260822);
  const Gf* big = Gf::get(2, 16);
  for (int i = 0; i < 200; ++i) {
    SplitRng inst = rng.split(i);
    Network net = oracle::random_network(Gf::get(2), inst);
    int s = net.sources()[0].node, t = net.dests()[0].node;
    CutReport exact = mincut_enumeration(net, s, t);
    SplitRng draw = rng.split(1000 + i);
    CutReport alg = mincut_algebraic(net.with_field(big), s, t, 4, draw);
    if (exact.value != alg.value) {
      std::ostringstream o;
      o << "network " << i << ": enumeration " << exact.value << " vs algebraic "
        << alg.value;
      return {false, o.str()};
    }
  }
  return {true, "200/200 networks agree"};
}

Outcome c3_worked_example_cut() {
  Network net = load_network(fix("fig2.json"));
  CutReport e = mincut_enumeration(net, 0, 3);
  if (e.value != 2) return {false, "enumeration value " + std::to_string(e.value)};
  if (e.omega != std::vector<int>{0}) return {false, "minimizing cut is not {S}"};
  SplitRng rng(5);
  CutReport a = mincut_algebraic(net.with_field(Gf::get(2, 16)), 0, 3, 4, rng);
  if (a.value != 2) return {false, "algebraic value " + std::to_string(a.value)};
  return {true, "both methods give 2, witness {S}"};
}

Outcome c4_matrix_vs_simulation() {
  SplitRng rng(414141);
  const uint64_t orders[3] = {2, 16, 256};
  for (int i = 0; i < 500; ++i) {
    SplitRng inst = rng.split(i);
    const Gf* f = Gf::from_order(orders[i % 3]);
    Network net = oracle::random_network(f, inst);
    CodeAssignment code = random_assignment(net, inst);
    if (!(system_matrix(net, code).m == oracle::system_matrix(net, code)))
      return {false, "pair " + std::to_string(i) + " disagrees"};
  }
  return {true, "500/500 pairs entry-exact"};
}

Outcome c5_random_coding_bound() {
  struct Fixture {
    const char* name;
    Network (*build)(const Gf*);
  };
  const Fixture fixtures[] = {
      {"butterfly", &butterfly}, {"triple parallel", &triple_parallel}, {"relay tap", &relay_tap}};
  const int draws = 2000;
  const double z99 = 2.326;
  std::ostringstream detail;
  for (const auto& fxt : fixtures) {
    for (uint64_t q : {uint64_t(16), uint64_t(256)}) {
      const Gf* f = Gf::from_order(q);
      Network net = fxt.build(f);
      net = net.with_connections(multicast_all(net));
      SplitRng rng(900 + q);
      int successes = 0;
      double bound = 0;
      for (int i = 0; i < draws; ++i) {
        SplitRng r = rng.split(i);
        CodeResult res = random_code(net, int(q), 1, r);
        bound = res.stats.bound;
        if (res.verdict.feasible) ++successes;
      }
      double rate = double(successes) / draws;
      double slack = z99 * std::sqrt(bound * (1 - bound) / draws);
      if (rate < bound - slack) {
        std::ostringstream o;
        o << fxt.name << " at q " << q << ": rate " << rate << " below bound " << bound;
        return {false, o.str()};
      }
      detail << fxt.name << "@" << q << " " << rate << ">=" << bound << "  ";
    }
  }
  return {true, detail.str()};
}

Outcome c6_constructions_decode() {
  const Gf* f = Gf::from_order(256);
  SplitRng rng(606061);
  int built = 0;
  for (int rep = 0; rep < 2000 && built < 50; ++rep) {
    SplitRng inst = rng.split(rep);
    Network net = oracle::random_sink_network(f, inst);
    int t1 = net.node_count() - 2, t2 = net.node_count() - 1;
    ConnectionSet cs;
    cs.cls = ConnClass::disjoint_multicast;
    cs.items.push_back({0, t1, {0}});
    cs.items.push_back({0, t2, {1}});
    Network shaped = net.with_endpoints({{0, 2}}, {{t1, 1}, {t2, 1}}).with_connections(cs);
    std::optional<CodeResult> res;
    try {
      res = construct_disjoint_multicast(shaped, inst);
    } catch (const InfeasibleError&) {
      continue;  // the demand does not fit this topology; draw another
    }
    if (!res->verdict.feasible) continue;
    SplitRng payload(rep);
    if (!oracle::decode_roundtrip(res->net, res->code, res->verdict, payload))
      return {false, "disjoint instance " + std::to_string(rep) + " decode mismatch"};
    ++built;
  }
  if (built < 50) return {false, "only " + std::to_string(built) + " feasible instances"};

  int two_level = 0;
  for (int rep = 0; rep < 2000 && two_level < 10; ++rep) {
    SplitRng inst = rng.split(50000 + rep);
    Network net = oracle::random_sink_network(f, inst);
    int t1 = net.node_count() - 2, t2 = net.node_count() - 1;
    ConnectionSet cs;
    cs.cls = ConnClass::two_level_multicast;
    cs.items.push_back({0, t1, {0, 1}});  // the full receiver
    cs.items.push_back({0, t2, {0}});     // the subset tier
    Network shaped = net.with_endpoints({{0, 2}}, {{t1, 2}, {t2, 1}}).with_connections(cs);
    std::optional<CodeResult> res;
    try {
      res = construct_two_level(shaped, inst);
    } catch (const InfeasibleError&) {
      continue;
    }
    if (!res->verdict.feasible) continue;
    SplitRng payload(rep);
    if (!oracle::decode_roundtrip(res->net, res->code, res->verdict, payload))
      return {false, "two-level instance " + std::to_string(rep) + " decode mismatch"};
    ++two_level;
  }
  if (two_level < 10) return {false, "only " + std::to_string(two_level) + " two-level instances"};
  return {true, "50 disjoint + 10 two-level instances decode exactly"};
}

Outcome c7_static_erasure() {
  Network net = load_network(fix("diamond.json"));
  int found = 0;
  for (int seed = 0; seed < 100; ++seed) {
    SplitRng rng(seed);
    try {
      StaticReport rep = static_solution(net, 256, 64, rng);
      if (!rep.found) continue;
      if (found == 0) {
        // Re-verify the first solution under both failure patterns directly.
        for (const auto& chk : rep.checks) {
          FailedInstance inst = apply_failure(rep.net, chk.pattern);
          if (!verify(rep.net, rep.code, {}, inst.dead).feasible)
            return {false, "reported solution fails re-verification"};
        }
      }
      ++found;
    } catch (const InfeasibleError&) {
    }
  }
  if (found < 99) return {false, "found only " + std::to_string(found) + "/100"};
  return {true, std::to_string(found) + "/100 seeds found a static solution"};
}

Outcome c8_time_average() {
  Network net = parallel_pair(Gf::get(2));
  double exact = time_average_mincut(net, 0, 1);
  if (exact != 1.0) return {false, "exact expectation " + std::to_string(exact)};
  for (int seed = 0; seed < 20; ++seed) {
    SplitRng rng(7000 + seed);
    MonteCarloCut mc = time_average_mincut_mc(net, 0, 1, 10000, rng);
    if (std::fabs(mc.mean - exact) > 3 * mc.std_error) {
      std::ostringstream o;
      o << "seed " << seed << ": mean " << mc.mean << " off by more than 3 x "
        << mc.std_error;
      return {false, o.str()};
    }
  }
  return {true, "exact 1.0; 20/20 Monte Carlo runs within 3 standard errors"};
}

Outcome c9_delayed_inverse_golden() {
  const Gf* f = Gf::get(2, 8);
  SplitRng rng(811);
  auto mono = [&](uint32_t c, int deg) { return Rat(Poly::monomial(Fe(f, c), deg)); };
  const uint32_t b37 = 1 + uint32_t(rng.bounded(255));
  const uint32_t b47 = 1 + uint32_t(rng.bounded(255));
  const uint32_t b69 = 1 + uint32_t(rng.bounded(255));
  const uint32_t b610 = 1 + uint32_t(rng.bounded(255));

  Network net = oracle::relay_example(f);
  CodeAssignment code = oracle::relay_code(b37, b47, b69, b610);
  Matrix<Rat> t = delayed_transfer(adjacency_matrix(net, code), f);

  std::vector<std::vector<Rat>> want(13, std::vector<Rat>(13, Rat::zero(f)));
  for (int i = 1; i <= 12; ++i) want[i][i] = Rat::one(f);
  want[1][3] = mono(1, 1);
  want[1][6] = mono(1, 1);
  want[1][7] = mono(b37, 2);
  want[1][9] = mono(b69, 2);
  want[1][10] = mono(b610, 2);
  want[1][11] = mono(b69, 3);
  want[1][12] = mono(b37, 3) + mono(b610, 3);
  want[2][4] = mono(1, 1);
  want[2][7] = mono(b47, 2);
  want[2][12] = mono(b47, 3);
  want[3][7] = mono(b37, 1);
  want[3][12] = mono(b37, 2);
  want[4][7] = mono(b47, 1);
  want[4][12] = mono(b47, 2);
  want[6][9] = mono(b69, 1);
  want[6][10] = mono(b610, 1);
  want[6][11] = mono(b69, 2);
  want[6][12] = mono(b610, 2);
  want[7][12] = mono(1, 1);
  want[9][11] = mono(1, 1);
  want[10][12] = mono(1, 1);

  for (int i = 1; i <= 12; ++i)
    for (int j = 1; j <= 12; ++j)
      if (!(t(oracle::relay_port(i), oracle::relay_port(j)) == want[i][j])) {
        std::ostringstream o;
        o << "entry (" << i << ", " << j << ") in textbook numbering differs";
        return {false, o.str()};
      }
  return {true, "all 144 rational entries match at random coefficients"};
}

Outcome c10_delay_simulation_duality() {
  struct Pair {
    const char* name;
    Network net;
    CodeAssignment code;
  };
  const Gf* f = Gf::get(2);
  Network loop(f, {{"S", 0, 1}, {"R", 1, 1}, {"T", 1, 0}}, {{0, 1}, {2, 1}, {2, 3}},
               {{0, 1}}, {{2, 1}}, {}, true);
  CodeAssignment loop_code;
  loop_code.encoding[{0, 0}] = 1;
  loop_code.internal[{1, 2}] = 1;
  loop_code.decoding[{3, 0}] = 1;
  std::vector<Pair> pairs;
  pairs.push_back({"worked example", oracle::relay_example(f), oracle::relay_code(0, 1, 1, 0)});
  pairs.push_back({"feedback loop", loop, loop_code});

  const int horizon = 16;
  for (const auto& p : pairs) {
    DelayedSystem sys = delayed_system_matrix(p.net, DelayedCode::from_static(p.net, p.code));
    int mu = p.net.total_source_processes(), nu = p.net.total_dest_processes();
    for (int r = 0; r < mu; ++r) {
      Matrix<Fe> x(horizon, mu, Fe(f, 0));
      x(0, r) = Fe(f, 1);
      Matrix<Fe> z = simulate_time(p.net, p.code, x);
      for (int t = 0; t < horizon; ++t)
        for (int c = 0; c < nu; ++c)
          if (!(z(t, c) == sys.m(r, c).series(horizon).coeff(t))) {
            std::ostringstream o;
            o << p.name << ": impulse " << r << " output " << c << " differs at tick " << t;
            return {false, o.str()};
          }
    }
  }
  return {true, "impulse responses match series coefficients to horizon 16"};
}

Outcome c11_cli_determinism() {
  const std::string cases[] = {
      "validate " + fix("fig2.json") + " --json",
      "mincut " + fix("fig2.json") + " --json --seed 1",
      "mincut " + fix("fig2.json") + " --method algebraic --q 65536 --trials 4 --seed 7 --json",
      "code " + fix("fig2.json") + " --q 16 --trials 64 --seed 3 --json",
      "verify " + fix("fig2.json") + " " + fix("fig2_code.json") + " --json",
      "erasure " + fix("diamond.json") + " --static --q 256 --trials 64 --seed 5 --json",
      "erasure " + fix("diamond.json") + " --average --samples 10000 --seed 2 --json",
      "erasure " + fix("diamond.json") + " --feasibility --json",
      "delay " + fix("cycle2.json") + " " + fix("cycle2_code.json") + " --order 8 --json",
      "delay " + fix("cycle2.json") + " " + fix("cycle2_code.json") +
          " --method evaluation --seed 4 --json",
  };
  for (const std::string& cmd : cases) {
    CliRun a = run_cli(cmd);
    CliRun b = run_cli(cmd);
    if (a.rc < 0 || a.rc != b.rc || a.out != b.out || a.out.empty())
      return {false, "non-reproducible: " + cmd};
  }
  return {true, "10 commands byte-identical across reruns"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no budget
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "adjacency golden on the worked example", 1.0, c1_static_adjacency_golden},
      {2, "min-cut method equivalence on 200 random networks", 120.0, c2_mincut_equivalence},
      {3, "worked example capacity and witness cut", 0, c3_worked_example_cut},
      {4, "transfer matrix vs port-level simulation, 500 pairs", 0, c4_matrix_vs_simulation},
      {5, "empirical multicast success clears the bound", 0, c5_random_coding_bound},
      {6, "disjoint and two-level constructions decode exactly", 0, c6_constructions_decode},
      {7, "static erasure solution on the diamond", 0, c7_static_erasure},
      {8, "time-average min-cut, exact and Monte Carlo", 0, c8_time_average},
      {9, "delayed inverse golden on the worked example", 5.0, c9_delayed_inverse_golden},
      {10, "delay analysis matches tick simulation", 0, c10_delay_simulation_duality},
      {11, "CLI reports are byte-identical under a fixed seed", 0, c11_cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && c.budget_s > 0 && secs > c.budget_s) {
      out.ok = false;
      out.detail = "over time budget of " + std::to_string(c.budget_s) + " s";
    }
    if (!out.ok) ++failures;
    std::printf("%s  %2d  %-52s (%.2fs)  %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                out.detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
