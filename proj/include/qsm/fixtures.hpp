#pragma once
// In-tree model library: the standard Sullivan targets and free-Lie sources
// used by the selftest suite and the unit tests.

#include <string>
#include <utility>
#include <vector>

#include "qsm/freelie.hpp"
#include "qsm/sullivan.hpp"

namespace qsm::fixtures {

// --- Sullivan targets ---

// S^n: (x_n) for odd n, (x_n, y_{2n-1}; dy = x^2) for even n. n >= 2.
MinimalModel sphere(int n, int cap);
// CP^n: (x_2, y_{2n+1}; dy = x^{n+1}). n >= 2.
MinimalModel projective(int n, int cap);
// Three odd generators and a top class: (v_1, v_2, v_3, y; dy = v_1 v_2 v_3).
MinimalModel three_stage(int d1, int d2, int d3, int top, int cap);
// Cayley plane: (x_8, y_23; dy = x^3).
MinimalModel cayley_plane(int cap);
// Quadratic filtration of depth two: (x_3, y_3, z_5, u_7; dz = xy, du = xz).
MinimalModel depth_two(int cap);

// Named target suite for invariant-equality sweeps: S^2..S^8, CP^2..CP^4,
// the (5,6,7,17) three-stage model, and the depth-two model.
std::vector<std::pair<std::string, MinimalModel>> target_suite(int cap);

// --- Lie sources ---

// S^dim: one generator of Lie degree dim-1, zero differential. dim >= 2.
FreeDGL sphere_source(int dim, int cap);
// Wedge of spheres of the given dimensions (each >= 2), in the given order
// (must be non-decreasing so generator ids respect the degree order).
FreeDGL wedge_source(const std::vector<int>& dims, int cap);
// CP^n as an iterated attachment: i_1; dw = [i,i]; du = [i,w];
// da = [i,u] + 1/4 [w,w]. n in 2..4.
FreeDGL projective_source(int n, int cap);
// CP^2 v CP^2 u e^4 attached along [i_1, i_2].
FreeDGL two_planes_source(int cap);

// One stage of the inductive family: start from S^{m0}, then per stage wedge
// spheres of the listed dimensions and attach a cell along
// [alpha, [i_1, [... [i_{t-1}, i_t]]]], where alpha is the class of the
// previous stage's cell (initially the base sphere) and i_j are the new
// sphere classes. Cell dimension: deg(alpha) + sum(m_j) - t + 1.
FreeDGL iterated_family_source(int m0,
                               const std::vector<std::vector<int>>& stages,
                               int cap);

// Named source suite for chain-level sweeps: S^2..S^5, CP^2..CP^4, the
// two-planes complex, and the one-stage iterated family (2; {2,2}).
std::vector<std::pair<std::string, FreeDGL>> source_suite();

}  // namespace qsm::fixtures
