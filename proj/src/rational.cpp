#include "pf/rational.hpp"

namespace pf {

std::string rat_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

Rational rat_parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Int(s));
  return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

} // namespace pf
