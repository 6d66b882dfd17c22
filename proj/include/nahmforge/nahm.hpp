#pragma once

#include <functional>
#include <vector>

#include "nahmforge/qseries.hpp"

namespace nahmforge {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

/* A = L D L^T with L unit lower triangular.  positive_definite iff every
 * pivot d_i is positive; the factorization is exact over the rationals. */
struct LDL {
    Mat L;
    Vec d;
    bool positive_definite = false;
};

LDL ldl_factor(const Mat& A);

// Solves A x = b through an existing factorization (requires PD).
Vec ldl_solve(const LDL& F, const Vec& b);

/* Cartan-like r x r matrix: 2 on the diagonal except 1 in the last slot,
 * -1 on the off-diagonals; the 1 x 1 case is (1). */
Mat tadpole_matrix(long r);

// Q(n) = (1/2) n^T A n + B^T n + C at an integer point.
Rational quad_value(const Mat& A, const Vec& B, const Rational& C,
                    const std::vector<long>& n);

/* Enumerates integer points with Q(n) < bound (all of Z^r, or the
 * nonnegative orthant).  A must be positive definite; the search prunes by
 * the LDL completed-square decomposition and touches no point outside the
 * feasible region, using exact arithmetic throughout.
 *
 * Coordinates are fixed from the last index down to the first; on_push /
 * on_pop bracket each fixed coordinate so callers can maintain incremental
 * state (e.g. a carried series product), and on_point fires at full depth. */
struct LatticeCallbacks {
    std::function<void(long index, long value)> on_push;
    std::function<void()> on_pop;
    std::function<void(const std::vector<long>& n, const Rational& q_value)> on_point;
};

void enumerate_lattice(const Mat& A, const Vec& B, const Rational& C,
                       const Rational& bound, bool nonnegative,
                       const LatticeCallbacks& cb);

// Reference enumerator: certified bounding box from the diagonal of A^{-1},
// then direct evaluation of Q at every box point.  For cross-checks.
void enumerate_lattice_bruteforce(const Mat& A, const Vec& B, const Rational& C,
                                  const Rational& bound, bool nonnegative,
                                  const LatticeCallbacks& cb);

/* sum over n >= 0 of sign_1^{n_1} ... sign_r^{n_r} *
 * q^{k((1/2) n^T A n + B^T n + C)} / prod_i (q^k;q^k)_{n_i}.
 * signs == nullptr means all +1. */
QSeries nahm_sum(const Mat& A, const Vec& B, const Rational& C,
                 const Rational& k, const Exponent& accuracy,
                 const std::vector<int>* signs = nullptr);

/* Tadpole sum chi_r(x;q^k) with x_i = q^{k e_i}: the Nahm sum for the
 * tadpole matrix with linear term e and base q^k. */
struct TadpoleSpec {
    long r = 1;
    std::vector<Exponent> e;  // one entry per variable, in base-k units
    Rational k = 1;
};

QSeries chi(const TadpoleSpec& spec, const Exponent& accuracy);

/* (q;q)_inf^r * sum over n >= 0 of
 * q^{(1/2) n^T T_r n} (-q^{1/2};q)_{n_r} / prod_i (q;q)_{n_i}^2. */
QSeries new_repn_rhs(long r, const Exponent& accuracy);

}  // namespace nahmforge
