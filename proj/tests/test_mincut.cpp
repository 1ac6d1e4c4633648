#include "adtnc/error.hpp"
#include "adtnc/mincut.hpp"
#include "adtnc/system.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adtnc;

TEST_CASE("relay example cut ranks and minimum") {
  auto net = oracle::relay_example(Gf::from_order(256));
  CHECK(cut_rank(net, {0}) == 2);
  CHECK(cut_rank(net, {0, 1}) == 2);
  CHECK(cut_rank(net, {0, 2}) == 4);
  CHECK(cut_rank(net, {0, 1, 2}) == 2);

  auto rep = mincut_enumeration(net, 0, 3);
  CHECK(rep.value == 2);
  CHECK(rep.omega == std::vector<int>{0});
  CHECK(cut_rank(net, rep.omega) == rep.value);

  SplitRng rng(5);
  auto alg = mincut_algebraic(net, 0, 3, 8, rng);
  CHECK(alg.value == 2);
  CHECK_FALSE(alg.low_field_warning);
  // the stored draw really attains the reported rank
  auto probe = mincut_probe(net, 0, 3);
  CHECK(rank(system_matrix(probe, alg.assignment).m) == alg.value);
}

TEST_CASE("degenerate pairs") {
  const Gf* f = Gf::from_order(256);
  SUBCASE("no path gives zero") {
    Network net(f, {{"s", 0, 1}, {"x", 1, 0}, {"t", 1, 0}}, {{0, 1}}, {{0, 1}}, {{2, 1}});
    CHECK(mincut_enumeration(net, 0, 2).value == 0);
    SplitRng rng(1);
    CHECK(mincut_algebraic(net, 0, 2, 4, rng).value == 0);
  }
  SUBCASE("single edge gives one") {
    Network net(f, {{"s", 0, 1}, {"t", 1, 0}}, {{0, 1}}, {{0, 1}}, {{1, 1}});
    CHECK(mincut_enumeration(net, 0, 1).value == 1);
    SplitRng rng(2);
    CHECK(mincut_algebraic(net, 0, 1, 4, rng).value == 1);
  }
  SUBCASE("identical endpoints rejected") {
    auto net = oracle::relay_example(f);
    CHECK_THROWS_AS(mincut_enumeration(net, 1, 1), UsageError);
    SplitRng rng(3);
    CHECK_THROWS_AS(mincut_algebraic(net, 7, 7, 1, rng), UsageError);
  }
}

TEST_CASE("enumeration refuses oversized networks") {
  const Gf* f = Gf::get(2);
  std::vector<NodeDecl> nodes;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 21; ++i) nodes.push_back({"n" + std::to_string(i), i > 0, i < 20});
  for (int i = 0; i + 1 < 21; ++i) edges.push_back({i == 0 ? 0 : 2 * i, 2 * i + 1});
  Network net(f, nodes, edges, {{0, 1}}, {{20, 1}});
  net.require_valid();
  CHECK_THROWS_AS(mincut_enumeration(net, 0, 20), UsageError);
  CHECK(mincut_enumeration(net, 0, 20, 21).value == 1);
}

TEST_CASE("methods agree on random networks at a large field") {
  const Gf* f = Gf::get(2, 16);
  int pairs_checked = 0;
  for (int rep = 0; rep < 100; ++rep) {
    SplitRng rng(52000 + rep);
    auto net = oracle::random_network(f, rng);
    for (int s = 0; s < net.node_count(); ++s)
      for (int t = s + 1; t < net.node_count(); ++t) {
        auto ex = mincut_enumeration(net, s, t);
        SplitRng trial_rng = rng.split(uint64_t(s) * 100 + uint64_t(t));
        auto alg = mincut_algebraic(net, s, t, 4, trial_rng);
        REQUIRE(alg.value == ex.value);
        ++pairs_checked;
      }
  }
  CHECK(pairs_checked > 1000);
}

TEST_CASE("reverse direction of a layered network has no capacity") {
  const Gf* f = Gf::get(2, 16);
  SplitRng rng(909);
  auto net = oracle::random_network(f, rng);
  int last = net.node_count() - 1;
  CHECK(mincut_enumeration(net, last, 0).value == 0);
}

TEST_CASE("algebraic value never exceeds enumeration even at tiny fields") {
  for (uint32_t q : {2u, 3u}) {
    const Gf* f = Gf::get(q);
    for (int rep = 0; rep < 40; ++rep) {
      SplitRng rng(61000 + rep + q * 1000);
      auto net = oracle::random_network(f, rng);
      int t = net.node_count() - 1;
      auto ex = mincut_enumeration(net, 0, t);
      auto alg = mincut_algebraic(net, 0, t, 3, rng);
      CHECK(alg.value <= ex.value);
    }
  }
}

TEST_CASE("deleting an edge never raises the min-cut") {
  const Gf* f = Gf::get(2, 16);
  for (int rep = 0; rep < 30; ++rep) {
    SplitRng rng(71000 + rep);
    auto net = oracle::random_network(f, rng);
    if (net.edges().empty()) continue;
    int t = net.node_count() - 1;
    int before = mincut_enumeration(net, 0, t).value;
    auto dead = net.edges()[rng.bounded(net.edges().size())];
    int after = mincut_enumeration(net.with_edges_removed({dead}), 0, t).value;
    CHECK(after <= before);
    SplitRng r2 = rng.split(1);
    auto alg = mincut_algebraic(net.with_edges_removed({dead}), 0, t, 4, r2);
    CHECK(alg.value <= before);
  }
}

TEST_CASE("small fields are flagged") {
  auto net = oracle::relay_example(Gf::get(2));
  SplitRng rng(4);
  auto rep = mincut_algebraic(net, 0, 3, 4, rng);
  CHECK(rep.low_field_warning);
  CHECK(rep.confidence == doctest::Approx(1.0 / 64).epsilon(1e-9));
  CHECK(rep.value <= 2);
}

TEST_CASE("batch driver picks a method and stays deterministic") {
  auto net = oracle::relay_example(Gf::from_order(256));
  SplitRng r1(9), r2(9);
  auto a = mincut_all_pairs(net, {{0, 3}, {0, 1}}, {}, 4, r1);
  auto b = mincut_all_pairs(net, {{0, 3}, {0, 1}}, {}, 4, r2);
  REQUIRE(a.size() == 2);
  CHECK(a[0].method == CutMethod::enumeration);  // 4 nodes, small
  CHECK(a[0].value == 2);
  CHECK(a[1].value == b[1].value);
  CHECK(a[0].omega == b[0].omega);

  auto forced = mincut_all_pairs(net, {{0, 3}}, CutMethod::algebraic, 6, r1);
  CHECK(forced[0].method == CutMethod::algebraic);
  CHECK(forced[0].value == 2);
  CHECK(mincut_all_pairs(net, {}, {}, 4, r1).empty());
}
