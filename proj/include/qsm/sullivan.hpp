#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsm/cohomology.hpp"
#include "qsm/freelie.hpp"

namespace qsm {

// A minimal Sullivan algebra: free CDGA, all generators of degree >= 2, and
// the differential has no linear part (image in wordlength >= 2).
struct MinimalModel {
  FreeCDGA A;
  int connectivity() const;  // (min generator degree) - 1; cap-1 if no gens
  int top_generator_degree() const;
};
MinimalModel make_minimal(FreeCDGA A);

// Quadratic part of the differential on a generator: the wordlength-2
// component of d(gen).
Polynomial d1_gen(const MinimalModel& M, int id);

// Graded subspace of the generator space V: per degree, echelon spanning
// vectors over the generators of that degree.
struct GradedSubspace {
  // indexed by degree; each entry is a RowSpace over the generator ids of
  // that degree (in id order)
  std::vector<RowSpace> spaces;
  std::vector<std::vector<int>> gen_ids;  // degree -> generator ids
  int total_dim() const;
  bool contains_all() const;  // equals the full generator space?
};

// The lower filtration of V by the quadratic part:
//   V_0 = V cap ker d1,  V_{i+1} = { v : d1 v in Lambda^2 V_i }.
// `stages[i]` is V_i; stages end when V_i = V (exhaustion is asserted, as it
// must hold for a minimal Sullivan algebra of simply connected finite type).
struct D1Filtration {
  std::vector<GradedSubspace> stages;
  int depth;  // largest i with V_{i-1} a proper subspace of V_i (0 if V_0 = V)
};
D1Filtration d1_filtration(const MinimalModel& M);
int d1_depth(const MinimalModel& M);

// Homotopy Lie algebra on the dual of the generators: L_n has one basis
// element for each generator of degree n+1; the bracket is dual to d1 via
//   <v; s[x,y]> = (-1)^{deg y + 1} <d1 v; sx, sy>,
//   <v w; sx, sy> = <v;sx><w;sy> + (-1)^{|v||w|} <w;sx><v;sy>,
//   <v; sx> = (-1)^{deg v} sx(v).
// Antisymmetry and Jacobi are validated on construction.
GradedLie homotopy_lie(const MinimalModel& M);

// Whitehead length: largest n with [L,L]^{(n)} != 0 for the homotopy Lie
// algebra (1 if L is nonzero abelian, 0 if L = 0). Exact: L is finite.
int whitehead_length(const MinimalModel& M);

// d-length: 1 + min{ i >= 1 : d_i != 0 } where d_i raises wordlength by i;
// nullopt (= infinity) when d = 0.
std::optional<int> d_length(const MinimalModel& M);

// Kotani-style freeness criterion inputs: for formal X with cup length c and
// Conn(Y) >= dim X, H^*(F_*(X,Y)) is free iff d_length(Y) > c.
bool kotani_predicts_free(int cup_length_of_x, std::optional<int> dlen);

// Structural checks used by the property suites.
// (a) The degree-n part of L/[L,L] matches the dual of the d1-kernel stage:
//     dim(L_n / [L,L]_n) == dim V_0^{n+1} for all n with n+1 <= top degree.
bool check_indecomposables_match_v0(const MinimalModel& M);
// (b) For u in V_{n+1} (filtration stage n+1), d1 u lies in
//     V_0 ^ V_n + Lambda^2 V_{n-1} (with V_{-1} = 0).
bool check_d1_stage_decomposition(const MinimalModel& M);

// Deterministic pseudo-random minimal models for property testing: at most
// max_gens generators with degrees in [2, max_degree]; differentials are
// sampled from the exact kernel of d on candidate decomposable values, so
// d*d = 0 always holds. Same seed -> same model.
MinimalModel random_minimal_model(std::uint64_t seed, int max_gens,
                                  int max_degree, int cap);

}  // namespace qsm
