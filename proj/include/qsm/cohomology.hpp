#pragma once
#include <optional>
#include <string>
#include <vector>

#include "qsm/cdga.hpp"

namespace qsm {

// Degreewise cohomology of a free CDGA, with canonical representatives.
// Valid in degrees 0..cap-1 (computing H^n needs the differential into
// degree n+1, so n+1 <= cap must be enumerable).
class Cohomology {
 public:
  explicit Cohomology(const FreeCDGA& A);

  int max_degree() const { return A_->cap - 1; }
  int dim(int n);
  // Canonical representatives: cocycles, one per class; the coordinate vector
  // of rep j is monic echelon against the coboundary space.
  const std::vector<Polynomial>& reps(int n);
  // Coordinates of the class of cocycle z over reps(n). Throws internal_error
  // if z is not a cocycle of degree n.
  Vec class_coords(const Polynomial& z, int n);
  bool is_coboundary(const Polynomial& z, int n);
  const std::vector<Monomial>& mono_basis(int n);

 private:
  struct DegreeData {
    bool ready = false;
    std::vector<Monomial> basis;
    RowSpace coboundaries{0};
    std::vector<Polynomial> reps;
    std::vector<Vec> rep_residuals;  // residual of each rep vs coboundaries
    RowSpace rep_space{0};           // echelon of rep_residuals for coords
  };
  const FreeCDGA* A_;
  std::vector<DegreeData> data_;
  DegreeData& at(int n);
};

// Length of the longest nonzero product of positive-degree cohomology classes
// representable within degrees < cap. `exact` is set when the bound cannot be
// hit by the cap (top nonzero degree * (length+1) already exceeds nothing).
struct CupLength {
  int value = 0;
  bool within_cap_only = false;  // true if a longer product might exist above cap
};
CupLength cup_length(const FreeCDGA& A);

// Is H^*(A) a free graded-commutative algebra (within degrees < cap)?
// Checks that the canonical surjection from the free algebra on one chosen
// generator per indecomposable class is injective degreewise. When not free,
// reports the lowest failing degree and a nonzero polynomial in the chosen
// generators that maps to zero in cohomology (a relation witness).
struct FreenessReport {
  bool free_within_cap = true;
  int failing_degree = -1;
  std::string relation;  // human-readable witness, empty if free
  std::vector<int> generator_degrees;
};
FreenessReport cohomology_freeness(const FreeCDGA& A);

}  // namespace qsm
