#pragma once
#include <stdexcept>
#include <string>

namespace qsm {

// Bad user input (files, flags, model data). CLI exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated internal invariant (d^2 != 0, rank mismatch, ...). CLI exit code 3.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

[[noreturn]] inline void fail_input(const std::string& m) { throw input_error(m); }
[[noreturn]] inline void fail_internal(const std::string& m) { throw internal_error(m); }

inline void check_input(bool c, const std::string& m) {
  if (!c) fail_input(m);
}
inline void check_internal(bool c, const std::string& m) {
  if (!c) fail_internal(m);
}

}  // namespace qsm
