#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "nahmforge/qproducts.hpp"
#include "nahmforge/reduction.hpp"

using namespace nahmforge;

namespace {

void check_agree(const QSeries& f, const QSeries& g) {
    Exponent order = qmin(f.accuracy(), g.accuracy());
    auto m = QSeries::first_mismatch(f, g, order);
    std::string where = m ? "mismatch at q^" + to_string(m->exponent) : "";
    CHECK_MESSAGE(!m.has_value(), where);
}

// exact Laurent polynomials: either claimed accuracy is extendable
void check_exact_equal(const QSeries& f, const QSeries& g) {
    Exponent big = qmax(f.accuracy(), g.accuracy());
    check_agree(f.with_accuracy(big), g.with_accuracy(big));
}

QSeries ipow(const QSeries& f, int n) {
    QSeries out = f;
    for (int i = 1; i < n; ++i) out = out * f;
    return out;
}

int par(long v) { return (int)(((v % 2) + 2) % 2); }

// Direct triple-sum evaluation of the G-type families over a certified box.
QSeries naive_g(int k, bool sign_m, bool sign_n, int u_par, const Exponent& acc) {
    const Vec& beta = beta_vector(k);
    QSeries out = QSeries::zero(acc);
    std::vector<QSeries> inv;
    long L = 32;
    for (long j = 0; j <= L; ++j)
        inv.push_back(pochhammer({1, 4, 4, j}, 1).with_accuracy(acc).inverse());
    for (long m = 0; m <= L; ++m)
        for (long n = 0; n <= L; ++n)
            for (long r = 0; r <= L; ++r) {
                Exponent e = Exponent((n - m) * (n - m) + (n - r) * (n - r)) +
                             beta[0] * m + beta[1] * n + beta[2] * r;
                if (!(e < acc)) continue;
                if (u_par >= 0 && par(n - m) != u_par) continue;
                int sg = 1;
                if (sign_m && m % 2 != 0) sg = -sg;
                if (sign_n && n % 2 != 0) sg = -sg;
                out.add_scaled_inplace(inv[m] * inv[n] * inv[r], e, sg);
            }
    return out;
}

QSeries naive_h(int k, bool sign_m, int n_par, const Exponent& acc) {
    const Vec& ga = gamma_vector(k);
    QSeries out = QSeries::zero(acc);
    std::vector<QSeries> inv;
    long L = 16;
    for (long j = 0; j <= L; ++j)
        inv.push_back(pochhammer({1, 4, 4, j}, 1).with_accuracy(acc).inverse());
    for (long m = 0; m <= L; ++m)
        for (long n = 0; n <= L; ++n) {
            Exponent e = Exponent(m * m + (m - n) * (m - n)) + ga[0] * m + ga[1] * n;
            if (!(e < acc)) continue;
            if (n_par >= 0 && par(n) != n_par) continue;
            int sg = (sign_m && m % 2 != 0) ? -1 : 1;
            out.add_scaled_inplace(inv[m] * inv[n], e, sg);
        }
    return out;
}

QSeries naive_z(int k, int d_par, const Exponent& acc) {
    const Vec& al = alpha_vector(k);
    QSeries out = QSeries::zero(acc);
    std::vector<QSeries> inv;
    long L = 10;
    for (long j = 0; j <= L; ++j)
        inv.push_back(pochhammer({1, 4, 4, j}, 1).with_accuracy(acc).inverse());
    for (long a = 0; a <= L; ++a)
        for (long b = 0; b <= L; ++b)
            for (long c = 0; c <= L; ++c) {
                Exponent e = Exponent(2 * a * a + 2 * (a + b) * (a + b) +
                                      (b - c) * (b - c)) +
                             4 * (al[0] * a + al[1] * b + al[2] * c);
                if (!(e < acc)) continue;
                if (d_par >= 0 && par(b - c) != d_par) continue;
                out.add_scaled_inplace(inv[a] * inv[b] * inv[c], e, 1);
            }
    return out;
}

QSeries half(const Exponent& w) { return QSeries::monomial(rat(1, 2), 0, w); }

// (q^a, q^{m-a}; q^m)_inf
QSeries P2(long a, long m, const Exponent& w) {
    return pochhammer({1, a, m, kInfinity}, w) * pochhammer({1, m - a, m, kInfinity}, w);
}

}  // namespace

TEST_CASE("family sums match direct multi-sum evaluation") {
    const Exponent acc = 11;
    for (int k = 1; k <= 4; ++k) {
        check_agree(family_sum({Family::G, k, kNoParity}, acc),
                    naive_g(k, true, false, -1, acc));
        check_agree(family_sum({Family::Gt, k, kNoParity}, acc),
                    naive_g(k, false, true, -1, acc));
        for (int p : {0, 1})
            check_agree(family_sum({Family::L, k, p}, acc), naive_g(k, true, false, p, acc));
    }
    for (int k = 1; k <= 5; ++k) {
        check_agree(family_sum({Family::Z, k, kNoParity}, acc), naive_z(k, -1, acc));
        for (int p : {0, 1})
            check_agree(family_sum({Family::Zsplit, k, p}, acc), naive_z(k, p, acc));
    }
    for (int k = 1; k <= 3; ++k) {
        check_agree(family_sum({Family::H, k, kNoParity}, acc), naive_h(k, false, -1, acc));
        check_agree(family_sum({Family::Ht, k, kNoParity}, acc), naive_h(k, true, -1, acc));
        for (int p : {0, 1}) {
            check_agree(family_sum({Family::H, k, p}, acc), naive_h(k, false, p, acc));
            check_agree(family_sum({Family::Ht, k, p}, acc), naive_h(k, true, p, acc));
        }
    }
}

TEST_CASE("family index validation") {
    CHECK_THROWS_AS(family_sum({Family::G, 5, kNoParity}, 5), std::domain_error);
    CHECK_THROWS_AS(family_sum({Family::G, 1, 0}, 5), std::domain_error);
    CHECK_THROWS_AS(family_sum({Family::L, 1, kNoParity}, 5), std::domain_error);
    CHECK_THROWS_AS(family_sum({Family::Z, 6, kNoParity}, 5), std::domain_error);
    CHECK_THROWS_AS(family_sum({Family::Zsplit, 1, 2}, 5), std::domain_error);
    CHECK_THROWS_AS(family_sum({Family::H, 4, kNoParity}, 5), std::domain_error);
}

TEST_CASE("G-type closed forms as eta-like quotients") {
    const Exponent w = 60;
    auto Jm = [&](long m) { return J(m, w); };
    QSeries g1 = family_sum({Family::G, 1, kNoParity}, w);
    QSeries g4 = family_sum({Family::G, 4, kNoParity}, w);
    QSeries head = Jm(2) * Jm(8);
    QSeries a = ipow(Jm(4), 2) * head.inverse();
    QSeries b = QSeries::monomial(2, 1, w) * ipow(Jm(2), 2) * ipow(Jm(8), 3) *
                ipow(Jm(12), 2) * (ipow(Jm(4), 6) * Jm(6)).inverse();
    check_agree(g1, a + b);
    check_agree(g4, a - b);

    QSeries gt1 = family_sum({Family::Gt, 1, kNoParity}, w);
    check_agree(gt1, ipow(Jm(2), 3) * ipow(Jm(8), 2) * ipow(Jm(12), 2) *
                         (ipow(Jm(4), 6) * Jm(24)).inverse());
    // the k=4 twisted sum coincides with k=1
    check_agree(family_sum({Family::Gt, 4, kNoParity}, w), gt1);

    check_agree(family_sum({Family::G, 2, kNoParity}, w),
                QSeries::monomial(2, 0, w) * Jm(2) * ipow(Jm(6), 2) * ipow(Jm(8), 3) *
                    (ipow(Jm(4), 5) * Jm(12)).inverse());
    check_agree(family_sum({Family::Gt, 2, kNoParity}, w),
                QSeries::monomial(-2, 1, w) * ipow(Jm(2), 3) * Jm(8) * ipow(Jm(24), 2) *
                    (ipow(Jm(4), 5) * Jm(12)).inverse());
    check_agree(family_sum({Family::G, 3, kNoParity}, w),
                ipow(Jm(4), 3) * ipow(Jm(12), 2) *
                    (Jm(2) * Jm(6) * ipow(Jm(8), 3)).inverse());
    check_agree(family_sum({Family::Gt, 3, kNoParity}, w),
                Jm(2) * Jm(6) * Jm(24) * (ipow(Jm(8), 2) * Jm(12)).inverse());
}

TEST_CASE("parity splits recombine the signed sums") {
    const Exponent w = 40;
    for (int k = 1; k <= 4; ++k) {
        QSeries l0 = family_sum({Family::L, k, 0}, w);
        QSeries l1 = family_sum({Family::L, k, 1}, w);
        check_agree(l0 + l1, family_sum({Family::G, k, kNoParity}, w));
        check_agree(l0 - l1, family_sum({Family::Gt, k, kNoParity}, w));
    }
    // the k=1 and k=4 twisted sums coincide, so the parity splits differ by
    // the same series: L_1^{(0)} - L_4^{(0)} = L_1^{(1)} - L_4^{(1)}
    check_agree(family_sum({Family::Gt, 4, kNoParity}, w),
                family_sum({Family::Gt, 1, kNoParity}, w));
    check_agree(family_sum({Family::L, 1, 0}, w) - family_sum({Family::L, 4, 0}, w),
                family_sum({Family::L, 1, 1}, w) - family_sum({Family::L, 4, 1}, w));
}

TEST_CASE("triple-sum identities dZ1-dZ4 and the dZ5 conjecture") {
    const Exponent w = 50;
    auto Jm = [&](long m) { return J(m, w); };
    check_agree(family_sum({Family::Z, 1, kNoParity}, w),
                Jm(6) * Jm(12) * (Jm(3) * Jm(8) * P2(1, 12, w)).inverse());
    check_agree(family_sum({Family::Z, 2, kNoParity}, w),
                Jm(12) * (Jm(8) * P2(1, 12, w) * P2(5, 12, w)).inverse());
    check_agree(family_sum({Family::Z, 3, kNoParity}, w),
                ipow(Jm(6), 5) * Jm(8) *
                    (ipow(Jm(3), 2) * ipow(Jm(4), 2) * ipow(Jm(12), 2)).inverse());
    check_agree(family_sum({Family::Z, 4, kNoParity}, w),
                Jm(6) * Jm(12) * (Jm(3) * Jm(8) * P2(5, 12, w)).inverse());
    check_agree(family_sum({Family::Z, 5, kNoParity}, w),
                Jm(6) * Jm(8) * P2(2, 12, w) *
                    (ipow(Jm(4), 2) * P2(1, 12, w) * P2(5, 12, w)).inverse());
}

TEST_CASE("Z sums recombine from the signed triple sums and thetas") {
    const Exponent w = 40;
    QSeries jinv = J(4, w).inverse();
    for (int k = 1; k <= 4; ++k) {
        QSeries g = family_sum({Family::G, k, kNoParity}, w);
        QSeries gt = family_sum({Family::Gt, k, kNoParity}, w);
        QSeries z = family_sum({Family::Z, k, kNoParity}, w);
        QSeries rhs =
            k < 4 ? ((g + gt) * theta0(w) + (g - gt) * theta1(w)) * half(w) * jinv
                  : ((g + gt) * theta1(w) + (g - gt) * theta0(w)) * half(w) * jinv *
                        QSeries::monomial(1, -1, w);
        check_agree(z, rhs);
    }
    for (int k = 1; k <= 5; ++k) {
        QSeries z = family_sum({Family::Z, k, kNoParity}, w);
        QSeries z0 = family_sum({Family::Zsplit, k, 0}, w);
        QSeries z1 = family_sum({Family::Zsplit, k, 1}, w);
        check_agree(z0 + z1, z);
        check_agree(z0, (z + z.negate_odd_exponents()) * half(w));
        check_agree(z1, (z - z.negate_odd_exponents()) * half(w));
    }
}

TEST_CASE("H splits as single sums") {
    const Exponent w = 40;
    auto single = [&](long pref_off, long num_off, bool shift_num, long qa, long qb,
                      long qc, bool odd_den) {
        // (-q^{pref_off};q^4)_inf * sum_n q^{qa n^2 + qb n + qc}
        //      (-q^{num_off};q^4)_{n (+1)} / (q^4;q^4)_{2n (+1)}
        QSeries out = QSeries::zero(w);
        for (long n = 0;; ++n) {
            Exponent e = Exponent(qa * n * n + qb * n + qc);
            if (!(e < w)) break;
            QSeries num = pochhammer({-1, num_off, 4, n + (shift_num ? 1 : 0)}, 1)
                              .with_accuracy(w);
            QSeries den = pochhammer({1, 4, 4, 2 * n + (odd_den ? 1 : 0)}, 1)
                              .with_accuracy(w)
                              .inverse();
            out.add_scaled_inplace(num * den, e, 1);
        }
        return out * pochhammer_any(-1, pref_off, 4, w);
    };
    // prefactor offset 2 pairs with numerator (-q^2;q^4)_n, offset 0/4 with (-q^4;q^4)_n
    check_agree(family_sum({Family::H, 1, 0}, w), single(2, 2, false, 2, 0, 0, false));
    check_agree(family_sum({Family::H, 1, 1}, w), single(0, 4, false, 2, 2, 1, true));
    check_agree(family_sum({Family::H, 2, 0}, w), single(2, 2, false, 2, 4, 0, false));
    check_agree(family_sum({Family::H, 2, 1}, w), single(0, 4, false, 2, 6, 3, true));
    check_agree(family_sum({Family::H, 3, 0}, w), single(0, 4, false, 2, 2, 0, false));
    check_agree(family_sum({Family::H, 3, 1}, w), single(2, 2, true, 2, 4, 1, true));
}

TEST_CASE("H splits as products") {
    const Exponent w = 60;
    QSeries j4inv = J(4, w).inverse();
    auto sq = [&](int sign, long off) {
        QSeries p = pochhammer({sign, off, 4, kInfinity}, w);
        return p * p;
    };
    auto t28 = [&](long a) { return J2(a, 28, w); };
    auto t56 = [&](long a) { return P2(a, 56, w); };
    auto mono = [&](const Rational& c, const Exponent& e) {
        return QSeries::monomial(c, e, w);
    };
    check_agree(family_sum({Family::H, 1, 0}, w), sq(-1, 2) * t28(6) * t56(16) * j4inv);
    check_agree(family_sum({Family::H, 1, 1}, w),
                mono(2, 1) * sq(-1, 4) * t28(8) * t56(12) * j4inv);
    check_agree(family_sum({Family::H, 2, 0}, w), sq(-1, 2) * t28(2) * t56(24) * j4inv);
    check_agree(family_sum({Family::H, 2, 1}, w),
                mono(2, 3) * sq(-1, 4) * t28(12) * t56(4) * j4inv);
    check_agree(family_sum({Family::H, 3, 0}, w),
                mono(2, 0) * sq(-1, 4) * t28(4) * t56(20) * j4inv);
    check_agree(family_sum({Family::H, 3, 1}, w),
                mono(1, 1) * sq(-1, 2) * t28(10) * t56(8) * j4inv);

    // byproducts: twisting q -> sqrt(-1) q flips the product signs
    auto t28m = [&](long a) {
        return pochhammer({-1, a, 28, kInfinity}, w) *
               pochhammer({-1, 28 - a, 28, kInfinity}, w) *
               pochhammer({1, 28, 28, kInfinity}, w);
    };
    check_agree(family_sum({Family::Ht, 1, 0}, w), sq(1, 2) * t28m(6) * t56(16) * j4inv);
    check_agree(family_sum({Family::Ht, 2, 0}, w), sq(1, 2) * t28m(2) * t56(24) * j4inv);
    check_agree(family_sum({Family::Ht, 3, 1}, w),
                mono(-1, 1) * sq(1, 2) * t28m(10) * t56(8) * j4inv);

    // the same byproducts as exponent twists of the plain splits
    check_agree(family_sum({Family::Ht, 1, 0}, w),
                family_sum({Family::H, 1, 0}, w).twist_even_mod4());
    check_agree(family_sum({Family::Ht, 2, 0}, w),
                family_sum({Family::H, 2, 0}, w).twist_even_mod4());
    check_agree(family_sum({Family::Ht, 3, 1}, w),
                family_sum({Family::H, 3, 1}, w).twist_odd_mod4());
}

TEST_CASE("finite double-sum displays") {
    for (int id = 1; id <= 12; ++id)
        for (long i = 0; i <= 15; ++i)
            check_exact_equal(finite_sum_lhs(id, i), finite_sum_rhs(id, i));
    CHECK_THROWS_AS(finite_sum_lhs(0, 1), std::domain_error);
    CHECK_THROWS_AS(finite_sum_lhs(13, 1), std::domain_error);
    CHECK_THROWS_AS(finite_sum_rhs(1, -1), std::domain_error);
}

TEST_CASE("shifted infinite products") {
    const Exponent w = 20;
    for (int id = 1; id <= 7; ++id)
        for (long i = 0; i <= 15; ++i)
            check_agree(shift_identity_lhs(id, i, w), shift_identity_rhs(id, i, w));
    CHECK_THROWS_AS(shift_identity_lhs(8, 0, w), std::domain_error);
    CHECK_THROWS_AS(shift_identity_rhs(0, 0, w), std::domain_error);
}

TEST_CASE("even rank reduction against the direct sums") {
    const Exponent w = 14;
    const std::vector<std::vector<Exponent>> cases = {
        {0, 0, 0, 0},
        {0, -1, 1, 0},
        {1, -1, 1, 0},
        {1, -1, 1, rat(-1, 2)},
        {rat(1, 2), 2, -2, rat(-1, 2)},
    };
    for (const auto& e : cases) {
        TadpoleSpec spec{4, e, 1};
        RankReductionInstance inst{true, 2, e, 1, 0};
        check_agree(chi(spec, w), reduce_even_rhs(inst, w));
    }
    // base 2 and rank 6
    {
        std::vector<Exponent> e = {0, -1, 1, 0};
        TadpoleSpec spec{4, e, 2};
        RankReductionInstance inst{true, 2, e, 2, 0};
        check_agree(chi(spec, 20), reduce_even_rhs(inst, 20));
    }
    {
        std::vector<Exponent> e(6, 0);
        TadpoleSpec spec{6, e, 1};
        RankReductionInstance inst{true, 3, e, 1, 0};
        check_agree(chi(spec, 10), reduce_even_rhs(inst, 10));
    }
    CHECK_THROWS_AS(reduce_even_rhs({true, 2, {0, 1, 1, 0}, 1, 0}, 5), std::domain_error);
    CHECK_THROWS_AS(reduce_even_rhs({true, 2, {0, 0, 0}, 1, 0}, 5), std::domain_error);
    CHECK_THROWS_AS(reduce_even_rhs({false, 1, {0, 0, 0}, 1, 0}, 5), std::domain_error);
}

TEST_CASE("odd rank reduction against the direct sums") {
    const Exponent w = 14;
    const std::vector<std::vector<Exponent>> cases = {
        {0, 0, 0},
        {-1, 1, rat(-1, 2)},
        {-2, 2, rat(-1, 2)},
        {1, -1, rat(1, 2)},
        {rat(1, 2), rat(-1, 2), 1},
    };
    for (const auto& e : cases) {
        TadpoleSpec spec{3, e, 1};
        RankReductionInstance inst{false, 1, e, 1, 0};
        check_agree(chi(spec, w), reduce_odd_rhs(inst, w));
    }
    {
        std::vector<Exponent> e(5, 0);
        TadpoleSpec spec{5, e, 1};
        RankReductionInstance inst{false, 2, e, 1, 0};
        check_agree(chi(spec, 12), reduce_odd_rhs(inst, 12));
    }
    {
        std::vector<Exponent> e = {-1, 1, rat(1, 2), rat(-1, 2), 0};
        TadpoleSpec spec{5, e, 2};
        RankReductionInstance inst{false, 2, e, 2, 0};
        check_agree(chi(spec, 16), reduce_odd_rhs(inst, 16));
    }
    CHECK_THROWS_AS(reduce_odd_rhs({false, 1, {0, 1, 0}, 1, 0}, 5), std::domain_error);
    CHECK_THROWS_AS(reduce_odd_rhs({true, 2, {0, 0, 0, 0}, 1, 0}, 5), std::domain_error);
}

TEST_CASE("bilateral truncation does not depend on the interval margin") {
    std::vector<Exponent> e4 = {1, -1, 1, rat(-1, 2)};
    RankReductionInstance a{true, 2, e4, 1, 0};
    RankReductionInstance b{true, 2, e4, 1, 3};
    CHECK(reduce_even_rhs(a, 12) == reduce_even_rhs(b, 12));
    std::vector<Exponent> e3 = {-2, 2, rat(-1, 2)};
    RankReductionInstance c{false, 1, e3, 1, 0};
    RankReductionInstance d{false, 1, e3, 1, 3};
    CHECK(reduce_odd_rhs(c, 12) == reduce_odd_rhs(d, 12));
}

TEST_CASE("rank-4 theta recombination") {
    const Exponent w = 40;
    const std::vector<std::vector<Exponent>> es = {
        {0, 0, 0, 0}, {0, -1, 1, 0}, {0, 0, 0, rat(1, 2)},
        {1, -1, 1, 0}, {1, -1, 1, rat(-1, 2)}};
    for (int c = 1; c <= 5; ++c) {
        TadpoleSpec spec{4, es[c - 1], 4};
        check_agree(chi(spec, w), chi4_theta_rhs(c, w));
    }
    CHECK_THROWS_AS(chi4_theta_rhs(0, w), std::domain_error);
    CHECK_THROWS_AS(chi4_theta_rhs(6, w), std::domain_error);
}

TEST_CASE("rank-5 theta recombination") {
    const Exponent w = 30;
    const std::vector<std::array<Rational, 3>> abc = {
        {0, 0, 0},           {1, 1, rat(1, 2)}, {-1, -1, 0},
        {0, 0, rat(1, 2)},   {0, -1, 0},        {1, 0, rat(1, 2)}};
    for (int c = 1; c <= 6; ++c) {
        const auto& [a, b, cc] = abc[c - 1];
        TadpoleSpec spec{5, {a, -a, b, -b, cc}, 4};
        check_agree(chi(spec, w), chi5_theta_rhs(c, w));
    }
    CHECK_THROWS_AS(chi5_theta_rhs(7, w), std::domain_error);
}

TEST_CASE("rank-5 scaling relations") {
    const Exponent w = 25;
    auto S = [&](long a, long b, const Rational& c) {
        TadpoleSpec spec{5, {Rational(a), Rational(-a), Rational(b), Rational(-b), c}, 4};
        return chi(spec, w);
    };
    check_agree(S(-1, -1, rat(-1, 2)), s_scaling(-1, -1, rat(-1, 2), 1, 1, rat(1, 2), w));
    check_agree(S(-2, -2, rat(-1, 2)), s_scaling(-2, -2, rat(-1, 2), 0, 0, rat(1, 2), w));
    check_agree(S(-1, -2, rat(-1, 2)), s_scaling(-1, -2, rat(-1, 2), 1, 0, rat(1, 2), w));
    // the identity scaling is the sum itself
    check_agree(S(1, 1, rat(1, 2)), s_scaling(1, 1, rat(1, 2), 1, 1, rat(1, 2), w));
    CHECK_THROWS_AS(s_scaling(1, 0, 0, 0, 0, 0, w), std::domain_error);
    CHECK_THROWS_AS(s_scaling(1, 1, rat(1, 4), 0, 0, rat(-1, 4), w), std::domain_error);
}

TEST_CASE("rank-3 theta recombination") {
    const Exponent w = 30;
    const std::vector<std::pair<long, Rational>> pairs = {
        {-1, rat(-1, 2)}, {-2, rat(-1, 2)}, {0, 0}, {-1, 0}, {1, rat(1, 2)}, {0, rat(1, 2)}};
    for (const auto& [a, c] : pairs) {
        TadpoleSpec spec{3, {Rational(a), Rational(-a), c}, 1};
        check_agree(chi(spec, w), chi3_theta_rhs(a, c, w));
    }
    CHECK_THROWS_AS(chi3_theta_rhs(2, 1, w), std::domain_error);
    CHECK_THROWS_AS(chi3_theta_rhs(0, rat(1, 4), w), std::domain_error);
}
