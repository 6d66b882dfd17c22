#include "nahmforge/qproducts.hpp"

#include <stdexcept>

namespace nahmforge {

QSeries pochhammer(const ProductSpec& spec, const Exponent& accuracy) {
    if (!(spec.step > 0)) throw std::domain_error("pochhammer: step must be positive");
    if (spec.length == kInfinity) {
        if (!(spec.offset > 0))
            throw std::domain_error("pochhammer: infinite product needs offset > 0 "
                                    "(use pochhammer_shift)");
        if (!(accuracy > 0)) return QSeries::zero(accuracy);
        QSeries p = QSeries::monomial(1, 0, accuracy);
        Exponent e = spec.offset;
        while (e < accuracy) {
            QSeries f = QSeries::monomial(1, 0, accuracy);
            f.add_term_inplace(e, -spec.sign);
            p = p * f;
            e += spec.step;
        }
        return p;
    }
    if (spec.length < 0) throw std::domain_error("pochhammer: negative length");
    // Finite products are exact Laurent polynomials.  Work at an accuracy
    // high enough that no term is lost: terms reach up to the sum of positive
    // exponents, and each factor with negative valuation lowers the accuracy
    // of the running product by that much.
    Exponent maxe = 0, mine = 0;
    Exponent e = spec.offset;
    for (long k = 0; k < spec.length; ++k, e += spec.step) {
        if (e > 0) maxe += e;
        if (e < 0) mine += e;
    }
    Exponent acc = qmax(accuracy, maxe + 1) - mine;
    QSeries p = QSeries::monomial(1, 0, acc);
    e = spec.offset;
    for (long k = 0; k < spec.length; ++k, e += spec.step) {
        QSeries f = QSeries::zero(acc);
        f.add_term_inplace(0, 1);
        f.add_term_inplace(e, -spec.sign);
        if (f.is_zero()) return QSeries::zero(acc);  // factor 1 - q^0
        p = p * f;
    }
    return p;
}

QSeries pochhammer_shift(int a_sign, const Exponent& alpha, long n, const Exponent& accuracy) {
    if (n < 0) throw std::domain_error("pochhammer_shift: n must be nonnegative");
    if (!(alpha > 0)) {
        // (a;q)_infty itself is not constructible; the identity still holds
        // when the finite factor (q/a;q)_n vanishes, which forces 0.
        if (a_sign == 1 && is_integer(alpha) && alpha >= 1 && alpha <= n)
            return QSeries::zero(accuracy);
        throw std::domain_error("pochhammer_shift: right side not constructible");
    }
    // (-a)^n q^{-n(n+1)/2 + n*alpha} (a;q)_infty (q/a;q)_n
    Rational sgn = (a_sign == 1) ? ((n % 2 == 0) ? 1 : -1) : 1;
    Exponent shift = Exponent(n) * alpha - rat(n * (n + 1), 2);

    QSeries fin = pochhammer({a_sign, 1 - alpha, 1, n}, 1);
    if (fin.is_zero()) return QSeries::zero(accuracy);
    Exponent vfin = *fin.valuation();

    Exponent acc_inf = accuracy - shift - vfin;
    // The result's valuation is shift + vfin; nothing survives below accuracy.
    if (!(acc_inf > 0)) return QSeries::zero(accuracy);
    QSeries inf = pochhammer({a_sign, alpha, 1, kInfinity}, acc_inf);
    QSeries prod = inf * fin.with_accuracy(acc_inf + vfin);

    Exponent macc = qmax(accuracy - shift, Exponent(1));
    QSeries out = prod * QSeries::monomial(sgn, shift, shift + macc + (0 - qmin(vfin, Exponent(0))));
    if (out.accuracy() < accuracy)
        throw std::logic_error("pochhammer_shift: internal accuracy shortfall");
    return out.truncated(accuracy);
}

QSeries pochhammer_any(int sign, const Exponent& offset, const Exponent& step,
                       const Exponent& accuracy) {
    if (!(step > 0)) throw std::domain_error("pochhammer_any: step must be positive");
    if (offset > 0) return pochhammer({sign, offset, step, kInfinity}, accuracy);
    Exponent a0 = offset / step;
    Exponent acc1 = accuracy / step;
    long n = to_long(floor_q(-a0)) + 1;  // a0 + n in (0, 1]
    return pochhammer_shift(sign, a0 + n, n, acc1).substitute_qk(step);
}

QSeries J(const Exponent& m, const Exponent& accuracy) {
    if (!(m > 0)) throw std::domain_error("J: m must be positive");
    return pochhammer({1, m, m, kInfinity}, accuracy);
}

QSeries J2(const Exponent& a, const Exponent& m, const Exponent& accuracy) {
    if (!(a > 0) || !(a < m)) throw std::domain_error("J2: need 0 < a < m");
    return pochhammer({1, a, m, kInfinity}, accuracy) *
           pochhammer({1, m - a, m, kInfinity}, accuracy) *
           pochhammer({1, m, m, kInfinity}, accuracy);
}

QSeries theta(const ThetaSpec& spec, const Exponent& accuracy) {
    if (!(spec.base > 0)) throw std::domain_error("theta: base must be positive");
    QSeries out = QSeries::zero(accuracy);
    // Note the explicit return type: gmpxx expression templates must not
    // outlive the Exponent temporaries they reference.
    auto expo = [&](const mpz_class& n) -> Exponent {
        return spec.base * Exponent(n) * Exponent(n) / 2 + spec.offset * Exponent(n);
    };
    auto cf = [&](const mpz_class& n) {
        return (spec.sign == 1 || mpz_even_p(n.get_mpz_t())) ? Rational(1) : Rational(-1);
    };
    // Exponent is convex in n; scan outward from the integer nearest the vertex.
    mpz_class n0 = floor_q(-spec.offset / spec.base);
    for (mpz_class n = n0; expo(n) < accuracy; --n) out.add_term_inplace(expo(n), cf(n));
    for (mpz_class n = n0 + 1; expo(n) < accuracy; ++n) out.add_term_inplace(expo(n), cf(n));
    return out;
}

QSeries phi(const Exponent& accuracy) { return theta({1, 0, 2}, accuracy); }

QSeries psi(const Exponent& accuracy) {
    QSeries out = QSeries::zero(accuracy);
    for (mpz_class n = 0;; ++n) {
        Exponent e = Exponent(n * (n + 1)) / 2;
        if (!(e < accuracy)) break;
        out.add_term_inplace(e, 1);
    }
    return out;
}

QSeries theta0(const Exponent& accuracy) {
    QSeries out = QSeries::zero(accuracy);
    for (mpz_class i = 0;; ++i) {
        Exponent e = Exponent(4 * i * i);
        if (!(e < accuracy)) break;
        out.add_term_inplace(e, i == 0 ? 1 : 2);
    }
    return out;
}

QSeries theta1(const Exponent& accuracy) {
    QSeries out = QSeries::zero(accuracy);
    for (mpz_class i = 0;; ++i) {
        Exponent e = Exponent((2 * i + 1) * (2 * i + 1));
        if (!(e < accuracy)) break;
        out.add_term_inplace(e, 2);
    }
    return out;
}

QSeries qbinom(long n, long m, const Exponent& accuracy) {
    if (m < 0 || m > n || n < 0) return QSeries::zero(accuracy);
    // Pascal recurrence [n m] = [n-1 m-1] + q^m [n-1 m]; exact polynomial of
    // degree m(n-m).
    Exponent acc = qmax(accuracy, Exponent(m) * Exponent(n - m) + 1);
    std::vector<QSeries> row(n + 1, QSeries::zero(acc));
    row[0] = QSeries::monomial(1, 0, acc);
    for (long i = 1; i <= n; ++i) {
        for (long j = std::min<long>(i, m); j >= 1; --j) {
            QSeries shifted = QSeries::zero(acc);
            shifted.add_scaled_inplace(row[j], Exponent(j), 1);
            row[j] = row[j - 1] + shifted;
        }
    }
    return row[m];
}

}  // namespace nahmforge
