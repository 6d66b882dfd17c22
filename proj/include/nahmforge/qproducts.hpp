#pragma once

#include <limits>

#include "nahmforge/qseries.hpp"

namespace nahmforge {

inline constexpr long kInfinity = -1;  // product length sentinel

/* (sign * q^offset ; q^step)_length.  step > 0; infinite products need
 * offset > 0 (offset <= 0 is reachable only through pochhammer_shift). */
struct ProductSpec {
    int sign = -1;          // the "a" in (a;q)_n is sign * q^offset
    Exponent offset = 1;
    Exponent step = 1;
    long length = kInfinity;
};

/* theta(sign * q^offset) in base q^base: sum_n q^{base n^2/2 + offset n} sign^n. */
struct ThetaSpec {
    int sign = 1;
    Exponent offset = 0;
    Exponent base = 1;
};

QSeries pochhammer(const ProductSpec& spec, const Exponent& accuracy);

// (a q^{-n}; q)_infty via (-a)^n q^{-n(n+1)/2} (a;q)_infty (q/a;q)_n with
// a = a_sign * q^alpha (base step 1).
QSeries pochhammer_shift(int a_sign, const Exponent& alpha, long n, const Exponent& accuracy);

// (sign q^offset; q^step)_infty for arbitrary rational offset, routing
// through pochhammer_shift when offset <= 0.
QSeries pochhammer_any(int sign, const Exponent& offset, const Exponent& step,
                       const Exponent& accuracy);

// J_m = (q^m;q^m)_infty and J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_infty.
QSeries J(const Exponent& m, const Exponent& accuracy);
QSeries J2(const Exponent& a, const Exponent& m, const Exponent& accuracy);

QSeries theta(const ThetaSpec& spec, const Exponent& accuracy);

// phi(q) = sum_{n in Z} q^{n^2}; psi(q) = sum_{n>=0} q^{n(n+1)/2};
// theta0 = phi(q^4); theta1 = 2q psi(q^8).
QSeries phi(const Exponent& accuracy);
QSeries psi(const Exponent& accuracy);
QSeries theta0(const Exponent& accuracy);
QSeries theta1(const Exponent& accuracy);

// Gaussian coefficient [n m]_q; zero outside 0 <= m <= n.  Exact polynomial.
QSeries qbinom(long n, long m, const Exponent& accuracy);

}  // namespace nahmforge
