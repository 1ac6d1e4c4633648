#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adtnc/matrix.hpp"
#include "adtnc/network.hpp"
#include "adtnc/poly.hpp"
#include "adtnc/rng.hpp"
#include "adtnc/system.hpp"

namespace adtnc {

/* Memory-one time semantics: every traversal of a physical edge or an
 * intra-node coefficient costs one clock tick. The port state evolves as
 *   Y_t = Y_{t-1} F + X_t A        Z_t = Y_t B^T
 * so the end-to-end map is M(D) = A (I - D F)^{-1} B^T over rational
 * functions in the delay variable D. Cycles in F are welcome here; that is
 * what the delay analysis is for. */

// (I - D F)^{-1} exactly, entries rational in D.
Matrix<Rat> delayed_transfer(const Matrix<Fe>& f, const Gf* field);

// The same inverse as a power series: sum of D^k F^k for k below `order`.
Matrix<Poly> delayed_transfer_series(const Matrix<Fe>& f, const Gf* field, int order);

/* A code whose endpoint filters are rational in D; relay coefficients stay
 * plain field scalars. Keys follow CodeAssignment exactly. */
struct DelayedCode {
  std::map<std::pair<int, int>, Rat> encoding;       // (local process, output port)
  std::map<std::pair<int, int>, uint32_t> internal;  // (input port, output port)
  std::map<std::pair<int, int>, Rat> decoding;       // (input port, local process)

  static DelayedCode from_static(const Network& net, const CodeAssignment& code);
};

struct DelayedSystem {
  Matrix<Rat> m;  // total source processes x total destination processes
  std::vector<std::pair<int, int>> row_blocks;  // [begin, end) per source
  std::vector<std::pair<int, int>> col_blocks;  // [begin, end) per destination

  Matrix<Rat> block(int source, int dest) const;
  Matrix<Rat> dest_block(int dest) const;
};

DelayedSystem delayed_system_matrix(const Network& net, const DelayedCode& code);

enum class DelayMethod { symbolic, evaluation };
std::string delay_method_name(DelayMethod m);

struct DelayCheck {
  bool nonsingular = false;
  DelayMethod method = DelayMethod::symbolic;
  Rat det;                 // symbolic: the exact determinant
  int degree_bound = 0;    // evaluation: cap on the cleared determinant's degree
  uint64_t eval_order = 0; // evaluation: order of the field the point came from
};

/* Invertibility of a square rational matrix over GF(q)(D). The symbolic
 * method eliminates exactly and is the arbiter. The evaluation method tests
 * det != 0 at one random point of a field with more than twice degree_bound
 * elements (embedding characteristic-2 entries into an extension when the
 * base field is too small): a nonzero answer is proof, a zero answer is
 * wrong with probability below one half. */
DelayCheck delayed_nonsingular(const Matrix<Rat>& m, DelayMethod method = DelayMethod::symbolic,
                               SplitRng* rng = nullptr);

/* Clock-by-clock run of a static assignment: x carries one row of source
 * symbols per tick, the result one row of receiver reads per tick. */
Matrix<Fe> simulate_time(const Network& net, const CodeAssignment& code, const Matrix<Fe>& x);

/* Every entry evaluated at D = 1; on an acyclic network with a static code
 * this collapses the delayed map onto the static one. Throws when a
 * denominator vanishes there. */
Matrix<Fe> at_unit_delay(const Matrix<Rat>& m, const Gf* field);

}  // namespace adtnc
