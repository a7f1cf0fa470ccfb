#ifndef PF_RATIONAL_HPP
#define PF_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace pf {

using Int = boost::multiprecision::cpp_int;

// Exact scalar of the whole engine. cpp_rational keeps lowest terms and a
// positive denominator as invariants, which is exactly the contract we need.
using Rational = boost::multiprecision::cpp_rational;

// cpp_rational rejects negative denominators at construction; route all
// p/q building through here.
inline Rational make_rat(Int p, Int q) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(p, q);
}
inline Rational rat(long p, long q = 1) { return make_rat(Int(p), Int(q)); }

// Repo-wide convention: "p/q", or just "p" when q == 1.
std::string rat_str(const Rational& r);
Rational rat_parse(const std::string& s);

inline int parity(long d) { return ((d % 2) + 2) % 2; }
inline Rational sign_pow(long e) { return parity(e) ? Rational(-1) : Rational(1); }

} // namespace pf

#endif
