#pragma once

#include <set>
#include <utility>
#include <vector>

#include "adtnc/coding.hpp"
#include "adtnc/network.hpp"
#include "adtnc/rng.hpp"

namespace adtnc {

/* A failure realized two equivalent ways: the surviving network with the
 * failed edges deleted outright, and the same failure as a coefficient mask
 * for system_matrix. Port ids are identical on both sides. */
struct FailedInstance {
  Network network;
  std::set<std::pair<int, int>> dead;
};

FailedInstance apply_failure(const Network& net, const FailurePattern& f);

/* The failure model as an explicit list of (pattern, probability), edge lists
 * sorted, duplicates merged, in deterministic order. Explicit lists get their
 * leftover mass as an all-alive pattern; an iid rate expands over every edge
 * subset, which needs |edges| <= 16; no model at all yields the single
 * all-alive pattern. */
std::vector<std::pair<FailurePattern, double>> expand_failures(const Network& net);

/* One draw from the model. Explicit lists walk the cumulative distribution;
 * an iid rate flips one coin per edge (any edge count). */
FailurePattern sample_failure(const Network& net, SplitRng& rng);

/* Expected residual s-t min-cut under the model, exactly. */
double time_average_mincut(const Network& net, int s, int t);

struct MonteCarloCut {
  double mean = 0;
  double std_error = 0;  // sample standard deviation over sqrt(samples)
  int samples = 0;
};

/* The same expectation estimated by sampling patterns. */
MonteCarloCut time_average_mincut_mc(const Network& net, int s, int t, int samples,
                                     SplitRng& rng);

struct PatternVerdict {
  FailurePattern pattern;
  double probability = 0;
  CodeVerdict verdict;
};

struct StaticReport {
  Network net;  // the input network, possibly rebound to a larger field
  CodeAssignment code;
  CodeStats stats;
  bool found = false;
  std::vector<PatternVerdict> checks;  // per pattern, for the reported code
};

/* One fixed assignment that serves every connection under every pattern.
 * Wants q above receivers x patterns for a good per-draw chance; q = 0
 * upgrades automatically. Throws InfeasibleError naming a pattern whose
 * residual cut cannot carry some demand. */
StaticReport static_solution(const Network& net, int q, int trials, SplitRng& rng);

struct PairMargin {
  int source_node = -1;
  int dest_node = -1;
  double demanded = 0;
  double average_cut = 0;
  double margin = 0;  // average_cut - demanded
};

struct TimeVaryingReport {
  bool feasible = false;
  std::vector<PairMargin> pairs;
};

/* Can a scheme that adapts to each pattern carry the demands on long-run
 * average? Necessary per connected pair: demanded rate at most the expected
 * residual cut. */
TimeVaryingReport feasibility_time_varying(const Network& net);

}  // namespace adtnc
