#pragma once

#include <set>
#include <utility>
#include <vector>

#include "adtnc/matrix.hpp"
#include "adtnc/network.hpp"
#include "adtnc/rng.hpp"

namespace adtnc {

/* Port-indexed adjacency: entry (i, j) is 1 for a physical edge (i, j), the
 * coefficient beta(i, j) for an intra-node input -> output pair, 0 otherwise.
 * Edges listed in dead contribute 0 instead of 1; this is the variable-zeroing
 * view of a link failure and must match deleting the edge outright. */
Matrix<Fe> adjacency_matrix(const Network& net, const CodeAssignment& code,
                            const std::set<std::pair<int, int>>& dead = {});

/* (I - F)^-1 for nilpotent F, by back substitution along a topological order
 * of F's nonzero pattern. Equals the path-sum sum(F^k). Throws UsageError when
 * the pattern has a cycle (delay analysis handles those). */
Matrix<Fe> transfer_matrix(const Matrix<Fe>& f);

/* Rows are source processes (sources stacked in declaration order), columns
 * are ports; entries alpha(i, e) live on the owning source's output ports. */
Matrix<Fe> encoding_matrix(const Network& net, const CodeAssignment& code);

/* Rows are destination processes (stacked in declaration order), columns are
 * ports; entries epsilon(e, i) live on the owning destination's input ports. */
Matrix<Fe> decoding_matrix(const Network& net, const CodeAssignment& code);

struct SystemMatrix {
  Matrix<Fe> m;  // total source processes x total destination processes
  std::vector<std::pair<int, int>> row_blocks;  // [begin, end) per source
  std::vector<std::pair<int, int>> col_blocks;  // [begin, end) per destination

  Matrix<Fe> block(int source, int dest) const;
  Matrix<Fe> dest_block(int dest) const;  // all rows, one destination's columns
};

/* M = A (I - F)^-1 B^T. dead masks failed edges as in adjacency_matrix. */
SystemMatrix system_matrix(const Network& net, const CodeAssignment& code,
                           const std::set<std::pair<int, int>>& dead = {});

/* Uniform draw over every free coefficient: alpha on all (process, source
 * output port) pairs, beta on all intra-node pairs, epsilon on all
 * (destination input port, process) pairs. Draw order is fixed, so one rng
 * state yields one assignment. */
CodeAssignment random_assignment(const Network& net, SplitRng& rng);

}  // namespace adtnc
