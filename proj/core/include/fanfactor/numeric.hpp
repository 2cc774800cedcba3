#pragma once

#include <gmpxx.h>

#include <string>

namespace fanfactor {

// All arithmetic in this library is exact: multiprecision integers for lattice
// data, multiprecision rationals wherever division shows up. No floating point.
using Int = mpz_class;
using Rat = mpq_class;

inline int sign(const Int& a) { return sgn(a); }
inline int sign(const Rat& a) { return sgn(a); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int abs_int(const Int& a) { return abs(a); }

// Reduced fraction with positive denominator. mpq_class(n, d) does not
// canonicalize on its own, so route all num/den construction through here.
inline Rat make_rat(const Int& num, const Int& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Int rat_num(const Rat& q) { return q.get_num(); }
inline Int rat_den(const Rat& q) { return q.get_den(); }
inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline std::string to_string(const Int& a) { return a.get_str(); }
inline std::string to_string(const Rat& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

inline Int int_from_string(const std::string& s) { return Int(s); }

}  // namespace fanfactor
