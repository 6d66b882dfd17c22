#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nahmforge/nahm.hpp"
#include "nahmforge/qproducts.hpp"
#include "nahmforge/reduction.hpp"

namespace nahmforge {

/* A general Nahm sum: sum over n >= 0 of
 * q^{base((1/2) n^T A n + B^T n + C)} / prod (q^base;q^base)_{n_i},
 * optionally with per-coordinate signs (-1)^{n_i}. */
struct NahmSpec {
    Mat A;
    Vec B;
    Rational C = 0;
    Rational base = 1;
    std::vector<int> signs;  // empty: all +1
};

/* A single sum over n >= 0 of
 *   sgn^n q^{a2 n^2 + a1 n + a0}
 *   * prod_j (num[j].sign q^{num[j].offset}; q^{num[j].step})_{n + num[j].shift}
 *   / prod_j (q^{den[j].step}; q^{den[j].step})_{den[j].mult n + den[j].shift},
 * optionally restricted to n == parity (mod 2). */
struct SingleSumSpec {
    Rational a2 = 0, a1 = 0, a0 = 0;
    int sgn = 1;
    struct NumFactor {
        int sign = 1;
        Exponent offset = 1;
        Exponent step = 1;
        long shift = 0;
    };
    struct DenFactor {
        Exponent step = 1;
        long mult = 1;
        long shift = 0;
    };
    std::vector<NumFactor> num;
    std::vector<DenFactor> den;
    int parity = -1;  // -1: no restriction
};

QSeries nahm_spec_sum(const NahmSpec& spec, const Exponent& accuracy);
QSeries single_sum(const SingleSumSpec& spec, const Exponent& accuracy);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct Const { Rational c; };
    struct QPow { Exponent e; };
    struct Poch { ProductSpec spec; };
    struct Jn { Exponent m; };
    struct J2n { Exponent a, m; };
    struct ThetaN { ThetaSpec spec; };
    struct PhiN {};
    struct PsiN {};
    struct Theta0N {};
    struct Theta1N {};
    struct QBinom { long n, m; };
    struct Nahm { NahmSpec spec; };
    struct Chi { TadpoleSpec spec; };
    struct FamilyN { FamilyIndex idx; };
    struct ReduceEven { RankReductionInstance inst; };
    struct ReduceOdd { RankReductionInstance inst; };
    struct FiniteSum { int id; long i; bool lhs; };
    struct Chi4Theta { int case_id; };
    struct Chi5Theta { int case_id; };
    struct Chi3Theta { long a; Rational c; };
    struct NewRepn { long r; };
    struct SingleSumN { SingleSumSpec spec; };
    struct Neg { ExprPtr x; };
    struct Add { ExprPtr x, y; };
    struct Mul { ExprPtr x, y; };
    struct Div { ExprPtr x, y; };
    struct IntPow { ExprPtr x; long n; };
    struct SubstQk { ExprPtr x; Rational k; };

    using Node =
        std::variant<Const, QPow, Poch, Jn, J2n, ThetaN, PhiN, PsiN, Theta0N, Theta1N,
                     QBinom, Nahm, Chi, FamilyN, ReduceEven, ReduceOdd, FiniteSum,
                     Chi4Theta, Chi5Theta, Chi3Theta, NewRepn, SingleSumN, Neg, Add,
                     Mul, Div, IntPow, SubstQk>;
    Node node;
};

// constructors
ExprPtr e_const(const Rational& c);
ExprPtr e_qpow(const Exponent& e);
ExprPtr e_poch(const ProductSpec& spec);
ExprPtr e_J(const Exponent& m);
ExprPtr e_J2(const Exponent& a, const Exponent& m);
ExprPtr e_theta(const ThetaSpec& spec);
ExprPtr e_phi();
ExprPtr e_psi();
ExprPtr e_theta0();
ExprPtr e_theta1();
ExprPtr e_qbinom(long n, long m);
ExprPtr e_nahm(NahmSpec spec);
ExprPtr e_chi(TadpoleSpec spec);
ExprPtr e_family(const FamilyIndex& idx);
ExprPtr e_reduce_even(RankReductionInstance inst);
ExprPtr e_reduce_odd(RankReductionInstance inst);
ExprPtr e_finite_sum(int id, long i, bool lhs);
ExprPtr e_chi4_theta(int case_id);
ExprPtr e_chi5_theta(int case_id);
ExprPtr e_chi3_theta(long a, const Rational& c);
ExprPtr e_new_repn(long r);
ExprPtr e_single_sum(SingleSumSpec spec);
ExprPtr e_neg(ExprPtr x);
ExprPtr e_add(ExprPtr x, ExprPtr y);
ExprPtr e_sub(ExprPtr x, ExprPtr y);  // sugar: Add(x, Neg(y))
ExprPtr e_mul(ExprPtr x, ExprPtr y);
ExprPtr e_div(ExprPtr x, ExprPtr y);
ExprPtr e_intpow(ExprPtr x, long n);
ExprPtr e_subst_qk(ExprPtr x, const Rational& k);

/* Evaluate below the requested order.  Accuracy propagation may fall short
 * when factors have nonzero valuation; evaluation re-runs with the observed
 * deficit added until the root is accurate below `accuracy`.  If that fails
 * to converge the result carries its true (smaller) accuracy. */
QSeries eval(const ExprPtr& e, const Exponent& accuracy);

// JSON round trip: {"op": <name>, "args": [...]}; exponents as "p/q" strings.
std::string to_json(const ExprPtr& e);
ExprPtr expr_from_json(const std::string& text);

}  // namespace nahmforge
