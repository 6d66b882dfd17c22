#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace nahmforge {

// Coefficients and exponents live in the same field: exact rationals with
// arbitrary-precision integer parts.  mpq_class keeps values canonical
// (reduced, positive denominator) through arithmetic.
using Rational = mpq_class;
using Exponent = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p/q" style strings (the CLI order syntax).
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    if (r.get_den() <= 0) throw std::invalid_argument("bad rational: " + s);
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline mpz_class floor_q(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline mpz_class ceil_q(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

// std::max/min cannot deduce through gmpxx expression templates.
inline Rational qmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational qmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

inline long to_long(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer out of long range");
    return z.get_si();
}

}  // namespace nahmforge
