#pragma once
// Splitting analysis for based mapping spaces under cell attachment.
//
// Given a free DGL model of X, a cycle z (the attaching class of a cell of
// dimension `cell`), and a minimal Sullivan model of Y, decide whether the
// based mapping space out of the enlarged space X~ = X u_z e^cell splits off
// the mapping space out of X as a product factor, and verify the verdict on
// the computed models:
//   - when the bracket length of [z] exceeds the quadratic-filtration depth
//     of the target, an explicit product witness is constructed and checked
//     to induce a cohomology isomorphism degree by degree;
//   - otherwise the hypothesis fails, and when the base model has zero
//     differential but the total model does not, that is a certificate that
//     no splitting exists at all.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsm/freelie.hpp"
#include "qsm/reduce.hpp"
#include "qsm/sullivan.hpp"

namespace qsm {

enum class SplitStatus { Splits, HypothesisFails, UnknownWithinCap };
std::string to_string(SplitStatus s);

struct SplitCheck {
  SplitStatus status = SplitStatus::UnknownWithinCap;
  bool class_zero = false;            // attaching class nullhomotopic
  std::optional<int> bracket_len;     // nullopt when the class is zero
  int depth = 0;                      // quadratic-filtration depth of target
  int whitehead = 0;                  // Whitehead length of target
  int truncation = 0;                 // chain slice top degree T = dim X~
  int checked_up_to = 0;              // cohomology compared through here
  bool certified_nonsplit = false;
  std::string nonsplit_reason;
  std::string c_alpha;                // cone cycle representative, printed
  int nonzero_tails = 0;              // factor generators needing corrections
  std::vector<int> base_degrees;      // reduced model generators of F(X,Y)
  std::vector<int> total_degrees;     // reduced model generators of F(X~,Y)
  std::vector<int> factor_degrees;    // product-factor generators
  std::vector<std::string> transcript;
};

// Decide and verify the splitting question for one attached cell. `z` must be
// a cycle of Lie degree cell-2 in X (zero allowed), `cell_name` names the new
// generator, and `cap` bounds every cochain degree that is examined.
SplitCheck splitting_check(const FreeDGL& X, const LieElement& z, int cell,
                           const std::string& cell_name, const MinimalModel& Y,
                           int cap);

// One cell of a stagewise decomposition of a DGL into cell attachments.
struct CellStage {
  std::string name;
  int cell_dim = 0;                // Lie degree + 1
  bool class_zero = false;
  std::optional<int> bracket_len;  // within the subcomplex built so far
  bool splits = false;
};

struct Decomposition {
  int depth = 0;
  bool all_split = false;
  std::vector<CellStage> stages;
  std::map<int, int> cells_per_dim;
  // Generator counts of the mapping-space model per degree 1..cap: predicted
  // from the cell counts (sum over cells of dim k of dim V^{n+k}) vs produced
  // by the actual reduction.
  std::vector<int> predicted_ranks;
  std::vector<int> reduction_ranks;
  bool ranks_match = false;
};

// Treat every generator of X as a cell attached along its differential (in
// id order, which must be non-decreasing in degree) and analyze each stage
// within the subcomplex spanned by the earlier generators; cross-check the
// predicted generator ranks against the reduced model of F(X,Y).
Decomposition decompose(const FreeDGL& X, const MinimalModel& Y, int cap);

}  // namespace qsm
