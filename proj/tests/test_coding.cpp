#include "adtnc/coding.hpp"

#include <cmath>

#include "adtnc/error.hpp"
#include "adtnc/mincut.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adtnc;

namespace {

// S splits two processes down side paths; the middle relay mixes them and
// broadcasts the mix to both receivers.
//   ports: S out 0,1; A in 2 out 3,4; B in 5 out 6,7; M in 8,9 out 10;
//          T1 in 11,12; T2 in 13,14
Network butterfly(const Gf* f) {
  return Network(f,
                 {{"S", 0, 2}, {"A", 1, 2}, {"B", 1, 2}, {"M", 2, 1}, {"T1", 2, 0}, {"T2", 2, 0}},
                 {{0, 2}, {1, 5}, {3, 11}, {4, 8}, {6, 13}, {7, 9}, {10, 12}, {10, 14}},
                 {{0, 2}}, {{4, 2}, {5, 2}});
}

ConnectionSet multicast_all(const Network& net) {
  ConnectionSet cs;
  cs.cls = ConnClass::single_multicast;
  int mu = net.sources()[0].processes;
  std::vector<int> all;
  for (int p = 0; p < mu; ++p) all.push_back(p);
  for (const auto& d : net.dests()) cs.items.push_back({net.sources()[0].node, d.node, all});
  return cs;
}

}  // namespace

TEST_CASE("the random coding bound follows the failure formula") {
  // one receiver: the per-draw success chance is (1 - 1/q)^eta
  CHECK(random_coding_bound(16, 1, 5) == doctest::Approx(std::pow(15.0 / 16.0, 5)));
  // two receivers over GF(16) with five coded edges
  CHECK(random_coding_bound(16, 2, 5) == doctest::Approx(0.512908935546875));
  // failure patterns multiply the union bound
  CHECK(random_coding_bound(16, 2, 5, 2) == doctest::Approx(std::pow(0.75, 5)));
  // clamps instead of going negative
  CHECK(random_coding_bound(2, 4, 3) == 0.0);
  CHECK(random_coding_bound(2, 2, 1) == 0.0);
  CHECK(random_coding_bound(1e18, 1, 1) == doctest::Approx(1.0));
}

TEST_CASE("the worked example's handmade code verifies as a rate-2 unicast") {
  ConnectionSet uni;
  uni.cls = ConnClass::unicast;
  uni.items.push_back({0, 3, {0, 1}});
  for (uint64_t q : {2, 16}) {
    auto net = oracle::relay_example(Gf::from_order(q)).with_connections(uni);
    auto code = oracle::relay_code(0, 1, 1, 0);
    auto v = verify(net, code);
    REQUIRE(v.feasible);
    REQUIRE(v.receivers.size() == 1);
    CHECK(v.receivers[0].required == 2);
    CHECK(v.receivers[0].achieved_rank == 2);
    CHECK(v.receivers[0].demands ==
          std::vector<std::pair<int, int>>{{0, 0}, {0, 1}});
    // the end-to-end map is already the identity, so the decoder is too
    const Gf* f = net.field();
    CHECK(v.decoders[0] == Matrix<Fe>::identity(2, Fe(f, 0), Fe(f, 1)));
    SplitRng rng(77 + q);
    CHECK(oracle::decode_roundtrip(net, code, v, rng));
  }
}

TEST_CASE("an all-zero relay code fails verification with a rank note") {
  ConnectionSet uni;
  uni.cls = ConnClass::unicast;
  uni.items.push_back({0, 3, {0, 1}});
  auto net = oracle::relay_example(Gf::from_order(16)).with_connections(uni);
  auto v = verify(net, oracle::relay_code(0, 0, 0, 0));
  CHECK_FALSE(v.feasible);
  REQUIRE(v.receivers.size() == 1);
  CHECK(v.receivers[0].achieved_rank < 2);
  CHECK(v.receivers[0].note.find("rank") != std::string::npos);
  CHECK(v.decoders[0].cols() == 0);
}

TEST_CASE("random unicast coding on the worked example") {
  ConnectionSet uni;
  uni.cls = ConnClass::unicast;
  uni.items.push_back({0, 3, {0, 1}});
  auto net = oracle::relay_example(Gf::from_order(16)).with_connections(uni);
  SplitRng rng(2024);
  auto res = random_code(net, 0, 16, rng);
  CHECK(res.stats.q == 16);  // one receiver: the current field already exceeds it
  CHECK(res.stats.eta == 6);
  CHECK(res.stats.bound == doctest::Approx(std::pow(15.0 / 16.0, 6)));
  REQUIRE(res.stats.succeeded);
  CHECK(res.stats.success_trial >= 1);
  CHECK(res.stats.trials_run == res.stats.success_trial);
  CHECK(res.verdict.feasible);
  SplitRng payload(5);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("an impossible unicast demand reports the min-cut in its note") {
  // severing the broadcast into V2 collapses the cut past V1 to one edge
  ConnectionSet uni;
  uni.cls = ConnClass::unicast;
  uni.items.push_back({0, 3, {0, 1}});
  auto net =
      oracle::relay_example(Gf::from_order(16)).with_edges_removed({{0, 7}}).with_connections(uni);
  CHECK(mincut_enumeration(net, 0, 3).value == 1);
  SplitRng rng(9);
  auto res = random_code(net, 0, 6, rng);
  CHECK_FALSE(res.stats.succeeded);
  CHECK_FALSE(res.verdict.feasible);
  REQUIRE(res.verdict.receivers.size() == 1);
  CHECK(res.verdict.receivers[0].note.find("min-cut 1") != std::string::npos);
}

TEST_CASE("single multicast on the butterfly reaches both receivers") {
  auto net = butterfly(Gf::get(2));
  net = net.with_connections(multicast_all(net));
  SplitRng rng(11);
  auto res = random_code(net, 0, 200, rng);
  // two receivers push GF(2) up to the next power of two above 2
  CHECK(res.stats.q == 4);
  REQUIRE(res.verdict.feasible);
  REQUIRE(res.verdict.receivers.size() == 2);
  for (const auto& rc : res.verdict.receivers) {
    CHECK(rc.required == 2);
    CHECK(rc.ok);
  }
  SplitRng payload(6);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("empirical multicast success rate clears the theoretical bound") {
  auto net = butterfly(Gf::from_order(16));
  net = net.with_connections(multicast_all(net));
  SplitRng rng(31337);
  int successes = 0;
  double bound = 0;
  const int draws = 200;
  for (int i = 0; i < draws; ++i) {
    SplitRng r = rng.split(i);
    auto res = random_code(net, 16, 1, r);
    bound = res.stats.bound;
    if (res.verdict.feasible) ++successes;
  }
  CHECK(bound == doctest::Approx(std::pow(0.875, 8)));
  CHECK(successes >= int(draws * bound));
}

TEST_CASE("random unicast coding reaches the min-cut rate") {
  SplitRng rng(5150);
  int tested = 0;
  for (int rep = 0; rep < 20; ++rep) {
    SplitRng inst = rng.split(rep);
    auto net = oracle::random_network(Gf::from_order(1u << 16), inst);
    int last = net.node_count() - 1;
    int cut = mincut_enumeration(net, 0, last).value;
    if (cut < 1) continue;
    std::vector<int> all;
    for (int p = 0; p < cut; ++p) all.push_back(p);
    ConnectionSet uni;
    uni.cls = ConnClass::unicast;
    uni.items.push_back({0, last, all});
    auto shaped = net.with_endpoints({{0, cut}}, {{last, cut}}).with_connections(uni);
    auto res = random_code(shaped, 0, 4, inst);
    CHECK(res.verdict.feasible);
    SplitRng payload(rep);
    CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
    ++tested;
  }
  CHECK(tested >= 12);
}

TEST_CASE("disjoint multicast construction splits a crossing relay") {
  // ports: S out 0,1; R in 2,3 out 4,5; T1 in 6; T2 in 7
  Network net(Gf::from_order(256),
              {{"S", 0, 2}, {"R", 2, 2}, {"T1", 1, 0}, {"T2", 1, 0}},
              {{0, 2}, {1, 3}, {4, 6}, {5, 7}},
              {{0, 2}}, {{2, 1}, {3, 1}});
  ConnectionSet cs;
  cs.cls = ConnClass::disjoint_multicast;
  cs.items.push_back({0, 2, {0}});
  cs.items.push_back({0, 3, {1}});
  net = net.with_connections(cs);
  SplitRng rng(404);
  auto res = construct_disjoint_multicast(net, rng);
  REQUIRE(res.verdict.feasible);
  CHECK(res.stats.succeeded);
  REQUIRE(res.verdict.receivers.size() == 2);
  CHECK(res.verdict.receivers[0].demands == std::vector<std::pair<int, int>>{{0, 0}});
  CHECK(res.verdict.receivers[1].demands == std::vector<std::pair<int, int>>{{0, 1}});
  SplitRng payload(1);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
  // dispatch through the draw-and-verify front door matches
  SplitRng rng2(404);
  auto res2 = random_code(net, 0, 32, rng2);
  CHECK(res2.verdict.feasible);
}

TEST_CASE("a lone disjoint receiver degenerates to a unicast") {
  auto net = oracle::diamond(Gf::from_order(256));
  ConnectionSet cs;
  cs.cls = ConnClass::disjoint_multicast;
  cs.items.push_back({0, 3, {0, 1}});
  net = net.with_connections(cs);
  SplitRng rng(8);
  auto res = construct_disjoint_multicast(net, rng);
  REQUIRE(res.verdict.feasible);
  SplitRng payload(2);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("disjoint multicast rejects a shared bottleneck, naming the group") {
  // both receivers sit behind one broadcast port, so the pair outstrips the cut
  Network net(Gf::from_order(256),
              {{"S", 0, 2}, {"R", 2, 1}, {"T1", 1, 0}, {"T2", 1, 0}},
              {{0, 2}, {1, 3}, {4, 5}, {4, 6}},
              {{0, 2}}, {{2, 1}, {3, 1}});
  ConnectionSet cs;
  cs.cls = ConnClass::disjoint_multicast;
  cs.items.push_back({0, 2, {0}});
  cs.items.push_back({0, 3, {1}});
  net = net.with_connections(cs);
  SplitRng rng(3);
  CHECK_THROWS_WITH_AS(construct_disjoint_multicast(net, rng),
                       doctest::Contains("demands rate 2"), InfeasibleError);
}

TEST_CASE("disjoint multicast construction on random sink networks") {
  SplitRng rng(606060);
  const Gf* f = Gf::from_order(256);
  int built = 0;
  for (int rep = 0; rep < 300 && built < 8; ++rep) {
    SplitRng inst = rng.split(rep);
    auto net = oracle::random_sink_network(f, inst);
    int t1 = net.node_count() - 2, t2 = net.node_count() - 1;
    ConnectionSet cs;
    cs.cls = ConnClass::disjoint_multicast;
    cs.items.push_back({0, t1, {0}});
    cs.items.push_back({0, t2, {1}});
    auto shaped = net.with_endpoints({{0, 2}}, {{t1, 1}, {t2, 1}}).with_connections(cs);
    CodeResult res = [&]() -> CodeResult {
      try {
        return construct_disjoint_multicast(shaped, inst);
      } catch (const InfeasibleError&) {
        return {shaped, {}, {}, {}};
      }
    }();
    if (!res.verdict.feasible) continue;  // demand did not fit this topology
    SplitRng payload(rep);
    CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
    ++built;
  }
  CHECK(built == 8);
}

TEST_CASE("two level multicast serves a full and a subset receiver") {
  // ports: S out 0,1; T1 in 2,3; T2 in 4. S's first port broadcasts to both.
  Network net(Gf::from_order(256),
              {{"S", 0, 2}, {"T1", 2, 0}, {"T2", 1, 0}},
              {{0, 2}, {0, 4}, {1, 3}},
              {{0, 2}}, {{1, 2}, {2, 1}});
  ConnectionSet cs;
  cs.cls = ConnClass::two_level_multicast;
  cs.items.push_back({0, 1, {0, 1}});
  cs.items.push_back({0, 2, {0}});
  net = net.with_connections(cs);
  SplitRng rng(515);
  auto res = construct_two_level(net, rng);
  REQUIRE(res.verdict.feasible);
  REQUIRE(res.verdict.receivers.size() == 2);
  CHECK(res.verdict.receivers[0].required == 2);
  CHECK(res.verdict.receivers[1].required == 1);
  SplitRng payload(44);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("two level multicast construction on random sink networks") {
  SplitRng rng(7272727);
  const Gf* f = Gf::from_order(256);
  int built = 0;
  for (int rep = 0; rep < 300 && built < 6; ++rep) {
    SplitRng inst = rng.split(rep);
    auto net = oracle::random_sink_network(f, inst);
    int t1 = net.node_count() - 2, t2 = net.node_count() - 1;
    ConnectionSet cs;
    cs.cls = ConnClass::two_level_multicast;
    cs.items.push_back({0, t1, {0, 1}});  // wants everything
    cs.items.push_back({0, t2, {0}});     // subset tier
    auto shaped = net.with_endpoints({{0, 2}}, {{t1, 2}, {t2, 1}}).with_connections(cs);
    CodeResult res = [&]() -> CodeResult {
      try {
        return construct_two_level(shaped, inst);
      } catch (const InfeasibleError&) {
        return {shaped, {}, {}, {}};
      }
    }();
    if (!res.verdict.feasible) continue;
    SplitRng payload(rep);
    CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
    ++built;
  }
  CHECK(built == 6);
}

TEST_CASE("multiple multicast joins two sources for one receiver") {
  auto net = oracle::two_source(Gf::from_order(16));
  ConnectionSet cs;
  cs.cls = ConnClass::multiple_multicast;
  cs.items.push_back({0, 3, {0}});
  cs.items.push_back({1, 3, {0}});
  net = net.with_connections(cs);
  SplitRng rng(21);
  auto res = solve_multiple_multicast(net, 16, 16, rng);
  REQUIRE(res.verdict.feasible);
  REQUIRE(res.verdict.receivers.size() == 1);
  CHECK(res.verdict.receivers[0].demands ==
        std::vector<std::pair<int, int>>{{0, 0}, {1, 0}});
  // the translated code lives on the original network: every encoder entry
  // sits on its own source's ports
  for (const auto& [key, val] : res.code.encoding) {
    int node = res.net.port(key.second).node;
    CHECK(res.net.source_index(node).has_value());
  }
  SplitRng payload(12);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("multiple multicast broadcasts both sources to both receivers") {
  // ports: S1 out 0; S2 out 1; R in 2,3 out 4,5; T1 in 6,7; T2 in 8,9
  Network net(Gf::from_order(256),
              {{"S1", 0, 1}, {"S2", 0, 1}, {"R", 2, 2}, {"T1", 2, 0}, {"T2", 2, 0}},
              {{0, 2}, {1, 3}, {4, 6}, {4, 8}, {5, 7}, {5, 9}},
              {{0, 1}, {1, 1}}, {{3, 2}, {4, 2}});
  ConnectionSet cs;
  cs.cls = ConnClass::multiple_multicast;
  for (int s : {0, 1})
    for (int t : {3, 4}) cs.items.push_back({s, t, {0}});
  net = net.with_connections(cs);
  SplitRng rng(99);
  auto res = random_code(net, 0, 16, rng);  // dispatches to the joining path
  REQUIRE(res.verdict.feasible);
  CHECK(res.verdict.receivers.size() == 2);
  SplitRng payload(7);
  CHECK(oracle::decode_roundtrip(res.net, res.code, res.verdict, payload));
}

TEST_CASE("multiple multicast rejects a receiver behind a thin cut") {
  Network net(Gf::from_order(16),
              {{"S1", 0, 1}, {"S2", 0, 1}, {"R", 2, 1}, {"T", 1, 0}},
              {{0, 2}, {1, 3}, {4, 5}},
              {{0, 1}, {1, 1}}, {{3, 2}});
  ConnectionSet cs;
  cs.cls = ConnClass::multiple_multicast;
  cs.items.push_back({0, 3, {0}});
  cs.items.push_back({1, 3, {0}});
  net = net.with_connections(cs);
  SplitRng rng(5);
  CHECK_THROWS_WITH_AS(solve_multiple_multicast(net, 16, 4, rng), doctest::Contains("T"),
                       InfeasibleError);
}

TEST_CASE("general verification applies the two-part criterion literally") {
  const Gf* f = Gf::from_order(16);
  CodeAssignment id2;
  id2.encoding[{0, 0}] = 1;
  id2.encoding[{0, 1}] = 1;  // S2's only process onto its port

  SUBCASE("independent pairs pass with unit decoders") {
    Network net(f, {{"S1", 0, 1}, {"S2", 0, 1}, {"T1", 1, 0}, {"T2", 1, 0}},
                {{0, 2}, {1, 3}}, {{0, 1}, {1, 1}}, {{2, 1}, {3, 1}});
    ConnectionSet cs;
    cs.cls = ConnClass::general;
    cs.items.push_back({0, 2, {0}});
    cs.items.push_back({1, 3, {0}});
    net = net.with_connections(cs);
    CodeAssignment code = id2;
    code.decoding[{2, 0}] = 1;
    code.decoding[{3, 0}] = 1;
    auto v = verify(net, code);
    REQUIRE(v.feasible);
    REQUIRE(v.receivers.size() == 2);
    SplitRng rng(1);
    CHECK(oracle::decode_roundtrip(net, code, v, rng));
  }

  SUBCASE("a crossing signal violates the first condition unless the sink mutes it") {
    // S1 broadcasts into T2's second input as well
    Network net(f, {{"S1", 0, 1}, {"S2", 0, 1}, {"T1", 1, 0}, {"T2", 2, 0}},
                {{0, 2}, {1, 3}, {0, 4}}, {{0, 1}, {1, 1}}, {{2, 1}, {3, 1}});
    ConnectionSet cs;
    cs.cls = ConnClass::general;
    cs.items.push_back({0, 2, {0}});
    cs.items.push_back({1, 3, {0}});
    net = net.with_connections(cs);

    CodeAssignment leaky = id2;
    leaky.decoding[{2, 0}] = 1;
    leaky.decoding[{3, 0}] = 1;
    leaky.decoding[{4, 0}] = 1;  // listens to the crossing port
    auto bad = verify(net, leaky);
    CHECK_FALSE(bad.feasible);
    bool noted = false;
    for (const auto& rc : bad.receivers)
      noted = noted || rc.note.find("unintended") != std::string::npos;
    CHECK(noted);

    CodeAssignment muted = id2;
    muted.decoding[{2, 0}] = 1;
    muted.decoding[{3, 0}] = 1;
    muted.decoding[{4, 0}] = 0;  // the sink zeroes the crossing port
    auto good = verify(net, muted);
    CHECK(good.feasible);
  }

  SUBCASE("two sources into one output is not square") {
    Network net(f, {{"S1", 0, 1}, {"S2", 0, 1}, {"T1", 1, 0}, {"T2", 1, 0}},
                {{0, 2}, {1, 3}}, {{0, 1}, {1, 1}}, {{2, 1}, {3, 1}});
    ConnectionSet cs;
    cs.cls = ConnClass::general;
    cs.items.push_back({0, 2, {0}});
    cs.items.push_back({1, 2, {0}});
    net = net.with_connections(cs);
    CodeAssignment code = id2;
    code.decoding[{2, 0}] = 1;
    code.decoding[{3, 0}] = 1;
    auto v = verify(net, code);
    CHECK_FALSE(v.feasible);
    REQUIRE(!v.receivers.empty());
    CHECK(v.receivers[0].note.find("square") != std::string::npos);
  }
}

TEST_CASE("class shapes are enforced") {
  const Gf* f = Gf::get(2);
  auto net = oracle::diamond(f);

  ConnectionSet two_uni;
  two_uni.cls = ConnClass::unicast;
  two_uni.items.push_back({0, 3, {0}});
  two_uni.items.push_back({0, 3, {1}});
  CHECK_THROWS_AS(check_class(net, two_uni), UsageError);

  ConnectionSet partial;
  partial.cls = ConnClass::single_multicast;
  partial.items.push_back({0, 3, {0}});  // not every process
  CHECK_THROWS_AS(check_class(net, partial), UsageError);

  auto bf2 = butterfly(f);  // two receivers fighting over one process
  ConnectionSet overlap;
  overlap.cls = ConnClass::disjoint_multicast;
  overlap.items.push_back({0, 4, {0, 1}});
  overlap.items.push_back({0, 5, {1}});
  CHECK_THROWS_AS(check_class(bf2, overlap), UsageError);

  ConnectionSet out_of_range;
  out_of_range.cls = ConnClass::unicast;
  out_of_range.items.push_back({0, 3, {7}});
  CHECK_THROWS_AS(check_class(net, out_of_range), UsageError);

  ConnectionSet empty_demand;
  empty_demand.cls = ConnClass::unicast;
  empty_demand.items.push_back({0, 3, {}});
  CHECK_THROWS_AS(check_class(net, empty_demand), UsageError);

  ConnectionSet not_a_source;
  not_a_source.cls = ConnClass::general;
  not_a_source.items.push_back({1, 3, {0}});
  CHECK_THROWS_AS(check_class(net, not_a_source), UsageError);

  // a multiple multicast where one receiver never hears the second source
  Network mm(f, {{"S1", 0, 1}, {"S2", 0, 1}, {"R", 2, 2}, {"T1", 2, 0}, {"T2", 2, 0}},
             {{0, 2}, {1, 3}, {4, 6}, {4, 8}, {5, 7}, {5, 9}},
             {{0, 1}, {1, 1}}, {{3, 2}, {4, 2}});
  ConnectionSet missing;
  missing.cls = ConnClass::multiple_multicast;
  missing.items.push_back({0, 3, {0}});
  missing.items.push_back({1, 3, {0}});
  missing.items.push_back({0, 4, {0}});
  CHECK_THROWS_AS(check_class(mm, missing), UsageError);

  ConnectionSet tl_solo;
  tl_solo.cls = ConnClass::two_level_multicast;
  tl_solo.items.push_back({0, 3, {0}});
  CHECK_NOTHROW(check_class(net, tl_solo));  // one subset receiver is fine

  auto bf = butterfly(f);  // two receivers whose subset demands collide
  ConnectionSet tl_overlap;
  tl_overlap.cls = ConnClass::two_level_multicast;
  tl_overlap.items.push_back({0, 4, {0}});
  tl_overlap.items.push_back({0, 5, {0}});
  CHECK_THROWS_AS(check_class(bf, tl_overlap), UsageError);
}

TEST_CASE("field size policy upgrades only when needed") {
  auto net = butterfly(Gf::get(2));
  net = net.with_connections(multicast_all(net));
  SplitRng rng(1);

  auto explicit_q = random_code(net, 8, 4, rng);
  CHECK(explicit_q.stats.q == 8);
  CHECK(explicit_q.net.field()->order() == 8);

  CHECK_THROWS_AS(random_code(net, 6, 1, rng), Error);  // not a prime power

  ConnectionSet uni;
  uni.cls = ConnClass::unicast;
  uni.items.push_back({0, 4, {0, 1}});
  auto one_rx = random_code(net.with_connections(uni), 0, 4, rng);
  CHECK(one_rx.stats.q == 2);  // a single receiver never forces an upgrade

  CHECK_THROWS_AS(random_code(net.with_connections(ConnectionSet{}), 0, 1, rng), UsageError);
}
