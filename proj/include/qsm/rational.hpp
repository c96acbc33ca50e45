#pragma once
#include <gmpxx.h>

#include <string>

namespace qsm {

// Exact rational scalar. All arithmetic in the engine is exact; no floats.
using Q = mpq_class;

// Canonical text form: "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string q_str(const Q& x);

// Parse "p", "-p", "p/q". Throws input_error on malformed text or zero
// denominator.
Q q_parse(const std::string& s);

inline bool q_is_zero(const Q& x) { return sgn(x) == 0; }

}  // namespace qsm
