#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "adtnc/gf.hpp"
#include "adtnc/matrix.hpp"
#include "adtnc/network.hpp"
#include "adtnc/rng.hpp"
#include "adtnc/system.hpp"

namespace adtnc {

/* One receiver's share of a verification: the (source index, local process)
 * pairs it must recover, in decode order, and whether a decoder exists. */
struct ReceiverCheck {
  int dest_node = -1;
  std::vector<std::pair<int, int>> demands;
  int required = 0;
  int achieved_rank = 0;
  bool ok = false;
  std::string note;
};

struct CodeVerdict {
  bool feasible = false;
  std::vector<ReceiverCheck> receivers;
  /* decoders[i] pairs with receivers[i]: nu(T) x required, so the receiver's
   * output row Z times the decoder reproduces the demanded processes in
   * `demands` order. Zero columns when the check failed. */
  std::vector<Matrix<Fe>> decoders;
};

struct CodeStats {
  int trials_run = 0;
  bool succeeded = false;
  int success_trial = -1;  // 1-based index of the first feasible draw
  double bound = 0.0;      // per-draw success probability lower bound
  std::uint64_t q = 0;     // field order actually used
  int eta = 0;             // edge count entering the bound exponent
};

struct CodeResult {
  Network net;  // the input network, possibly rebound to a larger field
  CodeAssignment code;
  CodeVerdict verdict;
  CodeStats stats;
};

/* (1 - receivers * failures / q)^eta, clamped to [0, 1]. */
double random_coding_bound(double q, double receivers, double eta, double failures = 1);

/* Checks that the items fit the declared class (reference validity, single
 * source where required, full or disjoint demands). Throws UsageError. */
void check_class(const Network& net, const ConnectionSet& conns);

/* Does the assignment satisfy every connection? Non-general classes reduce to
 * one linear solve per receiver; the general class checks the two-part
 * criterion (absent pairs see nothing, stacked present blocks invertible).
 * dead masks failed edges exactly as in system_matrix. */
CodeVerdict verify(const Network& net, const CodeAssignment& code,
                   const std::optional<ConnectionSet>& conns = {},
                   const std::set<std::pair<int, int>>& dead = {});

/* Draw-and-verify for unicast and single multicast; dispatches the other
 * classes to their constructions below. q = 0 picks the smallest power of two
 * exceeding the receiver count (keeping a larger current field); an explicit
 * q overrides. */
CodeResult random_code(const Network& net, int q, int trials, SplitRng& rng);

/* Receivers want disjoint parts of one source. Checks the group rate
 * condition for every receiver subset (via a super destination), then draws
 * beta and epsilon at random and solves the encoder so each receiver sees
 * exactly its demand. Throws InfeasibleError naming a violating group. */
CodeResult construct_disjoint_multicast(const Network& net, SplitRng& rng, int q = 0,
                                        int retries = 32);

/* Disjoint tier plus receivers that want everything: the disjoint solve, then
 * encoder rows are perturbed inside the constraint null space until every
 * full receiver's block is invertible. */
CodeResult construct_two_level(const Network& net, SplitRng& rng, int q = 0, int retries = 32);

/* Every receiver wants everything from every source: joins the sources behind
 * a super source, runs the single-multicast path with a block-diagonal
 * encoder, and translates the result back onto the original network. */
CodeResult solve_multiple_multicast(const Network& net, int q, int trials, SplitRng& rng);

}  // namespace adtnc
