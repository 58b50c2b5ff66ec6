#pragma once

#include <cstdint>
#include <vector>

#include "ccstream/similarity.h"

namespace ccstream {

// Lower-bound fixtures: point sets under the l1 <= 1 similarity whose optimal
// correlation-clustering cost encodes an INDEX or DISJ answer. Arrival order
// is Alice's points, then Bob's.
struct Gadget {
  L1ThresholdOracle oracle;
  std::uint64_t expected_opt;
};

// Alice: (4i + x_i) o 0^l for i = 1..l. Bob: (4b) o e_i^l for i = 1..l.
// `b` is 1-based. Optimum is 0 when x_b = 1, else l - 1 (a star around
// Alice's b-th point). Requires l >= 2 and 1 <= b <= l.
Gadget IndexGadget(const std::vector<bool>& x, std::size_t b);

// Points in R^2, ids a_1..a_l, p_1..p_l, b_1..b_l, q_1..q_l:
//   a_i = (2i, x_i), p_i = (2i, x_i - 1), b_i = (2i, 3 - y_i),
//   q_i = (2i, 4 - y_i).
// Each index with x_i = y_i = 1 joins its two pairs into a path p-a-b-q that
// costs exactly 1, so the optimum is the number of such indices (0 iff the
// sets are disjoint). Requires |x| = |y| >= 1.
Gadget DisjGadget(const std::vector<bool>& x, const std::vector<bool>& y);

}  // namespace ccstream
