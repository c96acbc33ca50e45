#pragma once
// Reduction of the pair-generator mapping-space model to a minimal free CDGA.
// Along a homology splitting basis {a_k, b_k, c_j} of the coalgebra (d a_k =
// b_k, d c_j = 0), the pairs v (x) a_k / v (x) b_k generate a contractible
// tensor factor; one generator per (v, c_j) survives, with the induced
// differential. The reduction keeps an explicit quasi-isomorphism witness.

#include <map>
#include <vector>

#include "qsm/bs.hpp"
#include "qsm/cdga.hpp"

namespace qsm {

struct ReducedGenInfo {
  int ygen;     // Sullivan generator of the target
  int bdegree;  // coalgebra homology degree it pairs with
  int cidx;     // index of the homology representative at that degree
};

struct ReducedModel {
  FreeCDGA R;                        // free CDGA on the surviving generators
  std::vector<ReducedGenInfo> info;  // per R generator
  // R generator -> its image in the pair model (a dga quasi-isomorphism
  // section, verified generator by generator during the reduction).
  std::map<int, Polynomial> psi;
  // Pair-model generator -> its image in R under the dga retraction (the
  // surviving part of its expression in the split coordinates). Extends
  // multiplicatively: substitute() with these images retracts any pair-model
  // polynomial onto R.
  std::vector<Polynomial> retract;
  std::vector<int> ranks;  // generators per degree; index 0..R.cap
};

ReducedModel minimal_reduce(const BSModel& BS);

}  // namespace qsm
