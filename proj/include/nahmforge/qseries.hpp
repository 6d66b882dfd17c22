#pragma once

#include <map>
#include <optional>
#include <tuple>

#include "nahmforge/rational.hpp"

namespace nahmforge {

/* Truncated Laurent-Puiseux series in q over exact rationals.
 *
 * A series stores a sparse map exponent -> nonzero coefficient together with
 * an accuracy order: every coefficient of an exponent strictly below
 * `accuracy` is exact, everything at or above it is unknown.  The zero series
 * has an empty map and no valuation (BOTTOM). */
class QSeries {
public:
    using TermMap = std::map<Exponent, Rational>;

    // Zero series accurate below `accuracy`.
    static QSeries zero(const Exponent& accuracy);
    // c * q^e; requires accuracy > e unless c == 0.
    static QSeries monomial(const Rational& c, const Exponent& e, const Exponent& accuracy);

    const Exponent& accuracy() const { return accuracy_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Lowest known exponent; empty for the zero series (BOTTOM).
    std::optional<Exponent> valuation() const;

    // Coefficient of q^e; requires e < accuracy.
    Rational coeff(const Exponent& e) const;

    QSeries operator+(const QSeries& g) const;
    QSeries operator-(const QSeries& g) const;
    QSeries operator-() const;
    QSeries operator*(const QSeries& g) const;

    // Multiplicative inverse.  Requires a nonzero series; the result has
    // valuation -v and accuracy (accuracy - 2v) where v is the valuation.
    QSeries inverse() const;

    // q -> q^k with k > 0; exponents and accuracy scale by k.
    QSeries substitute_qk(const Rational& k) const;

    // Drops terms at or above new_accuracy.  Raising the accuracy asserts
    // exactness and is only valid for series known to be exact (finite
    // products, polynomials); callers own that claim.
    QSeries truncated(const Exponent& new_accuracy) const;
    QSeries with_accuracy(const Exponent& claimed) const;

    // In-place f += scale * q^shift * g, truncating at this->accuracy().
    // Used by the lattice evaluators to accumulate many terms cheaply; the
    // caller is responsible for g being accurate below accuracy() - shift.
    void add_scaled_inplace(const QSeries& g, const Exponent& shift, const Rational& scale);
    void add_term_inplace(const Exponent& e, const Rational& c);

    // q -> -q; requires all exponents integral.
    QSeries negate_odd_exponents() const;
    // q -> i*q on a series with only even integer exponents (result stays
    // rational): coefficient at exponent e picks up sign (-1)^(e/2).
    QSeries twist_even_mod4() const;
    // i * f(i*q) on a series with only odd integer exponents: sign -1 at
    // e = 1 (mod 4), +1 at e = 3 (mod 4).
    QSeries twist_odd_mod4() const;

    struct Mismatch {
        Exponent exponent;
        Rational lhs;
        Rational rhs;
    };
    // Smallest exponent below `order` where f and g differ.  Hard error if
    // either side is not accurate below `order`.
    static std::optional<Mismatch> first_mismatch(const QSeries& f, const QSeries& g,
                                                  const Exponent& order);

    bool operator==(const QSeries& g) const {
        return accuracy_ == g.accuracy_ && terms_ == g.terms_;
    }

private:
    QSeries(TermMap terms, Exponent accuracy)
        : terms_(std::move(terms)), accuracy_(std::move(accuracy)) {}

    TermMap terms_;
    Exponent accuracy_;
};

QSeries make_monomial(const Rational& c, const Exponent& e, const Exponent& accuracy);
QSeries add(const QSeries& f, const QSeries& g);
QSeries mul(const QSeries& f, const QSeries& g);
QSeries invert(const QSeries& g);
QSeries substitute_qk(const QSeries& f, const Rational& k);
std::optional<QSeries::Mismatch> first_mismatch(const QSeries& f, const QSeries& g,
                                                const Exponent& order);

}  // namespace nahmforge
