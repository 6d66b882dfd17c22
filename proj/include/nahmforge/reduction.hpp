#pragma once

#include "nahmforge/nahm.hpp"

namespace nahmforge {

/* Auxiliary multi-sum families.
 *
 *   G  (k=1..4):  sum_{m,n,r>=0} (-1)^m q^{(n-m)^2+(n-r)^2+(m,n,r).beta_k}
 *                  / ((q^4;q^4)_m (q^4;q^4)_n (q^4;q^4)_r)
 *   Gt (k=1..4):  same with sign (-1)^n
 *   L  (k=1..4, parity p): the G sum restricted to n-m == p (mod 2)
 *   Z  (k=1..5):  sum_{n>=0} q^{2n1^2+2(n1+n2)^2+(n2-n3)^2+4 n.alpha_k}
 *                  / prod (q^4;q^4)_{n_i}
 *   Zsplit (k=1..5, parity p): the Z sum restricted to n2-n3 == p (mod 2)
 *   H  (k=1..3):  sum_{m,n>=0} q^{m^2+(m-n)^2+(m,n).gamma_k}
 *                  / ((q^4;q^4)_m (q^4;q^4)_n);  parity p restricts n (mod 2)
 *   Ht (k=1..3):  same with sign (-1)^m */
enum class Family { G, Gt, Z, Zsplit, H, Ht, L };

constexpr int kNoParity = -1;

struct FamilyIndex {
    Family family = Family::G;
    int k = 1;
    int parity = kNoParity;
};

// The constant vectors shared by the family evaluators and the catalog.
const Vec& beta_vector(int k);   // k = 1..4, length 3
const Vec& alpha_vector(int k);  // k = 1..5, length 3
const Vec& gamma_vector(int k);  // k = 1..3, length 2

QSeries family_sum(const FamilyIndex& idx, const Exponent& accuracy);

/* One instance of the rank-reduction right sides.  The rank is 2r (even) or
 * 2r+1 (odd); exponents holds e_1..e_rank with x_i = q^{base * e_i}.  The
 * even case requires e_{2i} + e_{2i+1} = 0 for i = 1..r-1 (pairs taken in
 * 1-based x indexing) and uses x_0 := 1/x_1; the odd case requires
 * e_{2i-1} + e_{2i} = 0 for i = 1..r.  ell_margin widens every bilateral
 * theta-factor interval by that many extra terms per side; the result must
 * not depend on it (truncation-soundness knob for tests). */
struct RankReductionInstance {
    bool even = true;
    long r = 1;
    std::vector<Exponent> exponents;
    Rational base = 1;
    long ell_margin = 0;
};

QSeries reduce_even_rhs(const RankReductionInstance& inst, const Exponent& accuracy);
QSeries reduce_odd_rhs(const RankReductionInstance& inst, const Exponent& accuracy);

/* Finite double-sum identities: both sides of display `id` (1..12) at index
 * i >= 0, scaled by (q;q)_N with N = n+r the fixed sum of the two summation
 * indices, which turns both sides into exact Laurent polynomials in q^{1/2}.
 * The left side is
 *   (q;q)_N * sum_{n+r=N} sgn^n q^{-nr/2+(un+vr)/2} / ((q;q)_n (q;q)_r)
 * with (parity of N, u, v, sgn) determined by id; the right side is the
 * stated closed form times (q;q)_N. */
QSeries finite_sum_lhs(int id, long i);
QSeries finite_sum_rhs(int id, long i);

/* Shifted infinite products: both sides of display `id` (1..7) at shift
 * index i >= 0, e.g. id 2 is (q^{-i-1/2};q)_inf against
 * (-1)^{i+1} q^{-(i+1)^2/2} (q^{1/2};q)_inf (q^{1/2};q)_{i+1}. */
QSeries shift_identity_lhs(int id, long i, const Exponent& accuracy);
QSeries shift_identity_rhs(int id, long i, const Exponent& accuracy);

/* Theta recombinations of the rank-4 sums (cases 1..5), matching
 * chi(r=4, e, k=4) for e = (0,0,0,0), (0,-1,1,0), (0,0,0,1/2), (1,-1,1,0),
 * (1,-1,1,-1/2) respectively. */
QSeries chi4_theta_rhs(int case_id, const Exponent& accuracy);

/* Theta recombinations of the rank-5 sums S(a,b,c) =
 * chi5(q^{4a},q^{-4a},q^{4b},q^{-4b},q^{4c};q^4), cases 1..6 for (a,b,c) =
 * (0,0,0), (1,1,1/2), (-1,-1,0), (0,0,1/2), (0,-1,0), (1,0,1/2). */
QSeries chi5_theta_rhs(int case_id, const Exponent& accuracy);

/* q^{a2^2+b2^2-a1^2-b1^2} (-q^{2+4c1};q^4)_inf / (-q^{2+4c2};q^4)_inf
 * times S(a2,b2,c2); valid when a1-a2 = b1-b2 = 2(c1-c2) with c1-c2 an
 * integer. */
QSeries s_scaling(long a1, long b1, const Rational& c1,
                  long a2, long b2, const Rational& c2, const Exponent& accuracy);

/* Theta recombination of chi(r=3, e=(a,-a,c), k=1) for the six admissible
 * pairs (a,c) with c - a/2 in {0, 1/2}, using the Rogers single-sum closed
 * forms. */
QSeries chi3_theta_rhs(long a, const Rational& c, const Exponent& accuracy);

}  // namespace nahmforge
