#pragma once

#include <optional>
#include <vector>

#include "adtnc/network.hpp"
#include "adtnc/rng.hpp"

namespace adtnc {

enum class CutMethod { enumeration, algebraic };

std::string cut_method_name(CutMethod m);

struct CutReport {
  int value = 0;
  CutMethod method = CutMethod::enumeration;
  int s_node = -1;
  int t_node = -1;
  std::vector<int> omega;     // enumeration: minimizing node set, sorted
  CodeAssignment assignment;  // algebraic: the rank-achieving draw
  int trials = 0;
  // Per-trial probability that a uniform draw already attains the max rank,
  // (1 - 1/q)^eta with eta = |edges|. Exact methods report 1.
  double confidence = 1.0;
  bool low_field_warning = false;
};

/* Rank over the network's field of the 0/1 incidence between output ports of
 * omega-side nodes and input ports of the complement's nodes. */
int cut_rank(const Network& net, const std::vector<int>& omega);

/* The probe used by the algebraic method: same topology with endpoints
 * rebound to full size (one source s with mu = |O(s)|, one destination t with
 * nu = |I(t)|). Exposed so reports can be re-verified. */
Network mincut_probe(const Network& net, int s_node, int t_node);

/* Exact minimum over the 2^(|V|-2) node partitions keeping s on the omega
 * side and t on the complement. Exponential; refuses beyond node_cap. */
CutReport mincut_enumeration(const Network& net, int s_node, int t_node, int node_cap = 20);

/* Randomized lower bound: max rank of the probe's system matrix over `trials`
 * uniform assignments. Equals the true min-cut with high probability once the
 * field is large. */
CutReport mincut_algebraic(const Network& net, int s_node, int t_node, int trials,
                           SplitRng& rng);

/* Batch driver; method picked per network size (enumeration up to 12 nodes)
 * unless forced. Each pair gets an independent rng stream. */
std::vector<CutReport> mincut_all_pairs(const Network& net,
                                        const std::vector<std::pair<int, int>>& pairs,
                                        std::optional<CutMethod> force, int trials,
                                        SplitRng& rng);

}  // namespace adtnc
