#include "qsm/rational.hpp"

#include <cctype>

#include "qsm/errors.hpp"

namespace qsm {

std::string q_str(const Q& x) {
  // mpq_class::get_str already prints "p" or "p/q" in canonical form, but
  // make sure the value is canonicalized first.
  Q c = x;
  c.canonicalize();
  return c.get_str();
}

Q q_parse(const std::string& s) {
  check_input(!s.empty(), "empty rational literal");
  std::string::size_type slash = s.find('/');
  auto check_int = [&](const std::string& t) {
    check_input(!t.empty(), "malformed rational literal '" + s + "'");
    std::string::size_type i = 0;
    if (t[0] == '-' || t[0] == '+') i = 1;
    check_input(i < t.size(), "malformed rational literal '" + s + "'");
    for (; i < t.size(); ++i)
      check_input(std::isdigit(static_cast<unsigned char>(t[i])) != 0,
                  "malformed rational literal '" + s + "'");
  };
  if (slash == std::string::npos) {
    check_int(s);
    Q v;
    check_input(v.set_str(s, 10) == 0, "malformed rational literal '" + s + "'");
    v.canonicalize();
    return v;
  }
  std::string num = s.substr(0, slash);
  std::string den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Q v;
  check_input(v.set_str(num + "/" + den, 10) == 0,
              "malformed rational literal '" + s + "'");
  check_input(sgn(v.get_den()) != 0, "zero denominator in '" + s + "'");
  v.canonicalize();
  return v;
}

}  // namespace qsm
