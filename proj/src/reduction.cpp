#include "nahmforge/reduction.hpp"

#include <functional>
#include <mutex>
#include <stdexcept>

#include "nahmforge/qproducts.hpp"

namespace nahmforge {

namespace {

Rational dot(const Vec& a, const Vec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/* 1/(q^s;q^s)_j at a fixed relative accuracy, extended lazily by multiplying
 * the geometric series for 1/(1-q^{sj}). */
class InvPoch {
public:
    InvPoch(Exponent step, Exponent relacc)
        : step_(std::move(step)), relacc_(std::move(relacc)) {
        cache_.push_back(QSeries::monomial(1, 0, relacc_));
    }

    const QSeries& operator[](long j) {
        while ((long)cache_.size() <= j) {
            long m = (long)cache_.size();
            QSeries g = QSeries::zero(relacc_);
            for (Exponent e = 0; e < relacc_; e += step_ * m) g.add_term_inplace(e, 1);
            cache_.push_back(cache_.back() * g);
        }
        return cache_[j];
    }

private:
    Exponent step_;
    Exponent relacc_;
    std::vector<QSeries> cache_;
};

/* Re-evaluates at growing working accuracy until the result honestly reaches
 * the requested order; prefactors with negative valuation eat accuracy, and
 * the deficit is known only after one evaluation. */
template <typename F>
QSeries boosted(const Exponent& accuracy, F&& eval) {
    Exponent work = accuracy;
    for (int iter = 0; iter < 12; ++iter) {
        QSeries f = eval(work);
        if (!(f.accuracy() < accuracy)) return f.truncated(accuracy);
        work += accuracy - f.accuracy();
    }
    throw std::logic_error("accuracy boosting did not converge");
}

/* sum over the nonnegative orthant of
 * coeff(n) q^{(1/2) n^T A n + B^T n} / prod_i (q^step;q^step)_{n_i},
 * coeff returning 0 to drop a point. */
QSeries lattice_qsum(const Mat& A, const Vec& B, const Exponent& step,
                     const Exponent& accuracy,
                     const std::function<long(const std::vector<long>&)>& coeff) {
    LDL F = ldl_factor(A);
    if (!F.positive_definite)
        throw std::logic_error("lattice_qsum: form not positive definite");
    Vec s = ldl_solve(F, B);
    Rational qfloor = -dot(s, B) / 2;
    QSeries out = QSeries::zero(accuracy);
    if (!(accuracy > qfloor)) return out;

    InvPoch inv(step, accuracy - qfloor);
    std::vector<QSeries> prod{QSeries::monomial(1, 0, accuracy - qfloor)};
    LatticeCallbacks cb;
    cb.on_push = [&](long, long v) { prod.push_back(prod.back() * inv[v]); };
    cb.on_pop = [&] { prod.pop_back(); };
    cb.on_point = [&](const std::vector<long>& n, const Rational& q) {
        long c = coeff(n);
        if (c != 0) out.add_scaled_inplace(prod.back(), q, c);
    };
    enumerate_lattice(A, B, 0, accuracy, true, cb);
    return out;
}

/* One side sum of the triple-sum families for fixed n:
 * sum over m >= 0 with u = n - m of sgn^m q^{u^2 - a u} / (q^4;q^4)_m,
 * keeping exponents below `cut`, optionally restricted to u == parity (2). */
QSeries g_side(long n, const Rational& a, int sign, int parity, const Exponent& cut,
               InvPoch& inv, const Exponent& relacc) {
    QSeries s = QSeries::zero(relacc);
    Exponent disc = cut + a * a / 4;
    if (!(disc > 0)) return s;
    mpz_class rad;
    mpz_sqrt(rad.get_mpz_t(), ceil_q(disc).get_mpz_t());
    long R = to_long(rad) + 1;
    long mc = to_long(floor_q(Rational(n) - a / 2));
    long mlo = mc - R - 1;
    if (mlo < 0) mlo = 0;
    for (long m = mlo; m <= mc + R + 1; ++m) {
        Rational u = Rational(n) - m;
        Exponent f = u * u - a * u;
        if (!(f < cut)) continue;
        if (parity >= 0 && (((n - m) % 2) + 2) % 2 != parity) continue;
        int sg = (sign == -1 && m % 2 != 0) ? -1 : 1;
        s.add_scaled_inplace(inv[m], f, sg);
    }
    return s;
}

/* sum over m,n,r >= 0 of
 * inner^m outer^n q^{(n-m)^2+(n-r)^2+am+bn+cr} / prod (q^4;q^4),
 * via the substitution u = n-m, v = n-r, which factors the m- and r-sums
 * for each fixed n:  exponent = u^2 - au + v^2 - cv + (a+b+c) n. */
QSeries g_family(const Vec& beta, int inner_sign, int outer_sign, int u_parity,
                 const Exponent& accuracy) {
    const Rational &a = beta[0], &b = beta[1], &c = beta[2];
    Rational sigma = a + b + c;
    if (!(sigma > 0)) throw std::logic_error("g_family: linear part not coercive");
    Rational marg = a * a / 4 + c * c / 4;  // real minima of the side sums
    Exponent relacc = accuracy + marg;
    QSeries out = QSeries::zero(accuracy);
    if (!(relacc > 0)) return out;
    InvPoch inv(4, relacc);
    for (long n = 0; Rational(n) * sigma - marg < accuracy; ++n) {
        Exponent cutA = accuracy - sigma * n + c * c / 4;
        Exponent cutC = accuracy - sigma * n + a * a / 4;
        QSeries An = g_side(n, a, inner_sign, u_parity, cutA, inv, relacc);
        if (An.is_zero()) continue;
        QSeries Cn = g_side(n, c, 1, -1, cutC, inv, relacc);
        if (Cn.is_zero()) continue;
        int sg = (outer_sign == -1 && n % 2 != 0) ? -1 : 1;
        out.add_scaled_inplace(inv[n] * An * Cn, sigma * n, sg);
    }
    return out;
}

/* sum over ell in Z of q^{(ell - s/2)^2 - e*ell}: all terms with exponent
 * below `cutoff`, plus `margin` extra terms on each side. */
QSeries bilateral_factor(const Rational& s, const Rational& e, const Exponent& cutoff,
                         long margin) {
    auto f = [&](const mpz_class& l) -> Exponent {
        Rational L(l);
        return (L - s / 2) * (L - s / 2) - e * L;
    };
    std::vector<Exponent> expos;
    mpz_class l0 = floor_q(s / 2 + e / 2);  // vertex of the convex exponent
    long extra = margin;
    for (mpz_class l = l0;; --l) {
        Exponent v = f(l);
        if (v < cutoff) {
            expos.push_back(std::move(v));
        } else if (extra-- <= 0) {
            break;
        } else {
            expos.push_back(std::move(v));
        }
    }
    extra = margin;
    for (mpz_class l = l0 + 1;; ++l) {
        Exponent v = f(l);
        if (v < cutoff) {
            expos.push_back(std::move(v));
        } else if (extra-- <= 0) {
            break;
        } else {
            expos.push_back(std::move(v));
        }
    }
    Exponent acc = cutoff;
    for (const auto& v : expos) acc = qmax(acc, v + 1);
    QSeries out = QSeries::zero(acc);
    for (const auto& v : expos) out.add_term_inplace(v, 1);
    return out;
}

void add_rank1(Mat& A, const std::vector<std::pair<long, Rational>>& w, const Rational& c) {
    for (const auto& [i, wi] : w)
        for (const auto& [j, wj] : w) A[i][j] += 2 * c * wi * wj;
}

struct ReductionData {
    Mat A;
    Vec B_plain;  // linear part of the explicit sum
    Vec B_eff;    // with the real minima of the bilateral factors folded in
    Rational C_eff = 0;
    // per bilateral factor: (coordinate pair giving s = n_u - n_v, x-exponent)
    struct Bil {
        long u, v;  // v == -1 means the fixed n_0 = 0
        Rational e;
    };
    std::vector<Bil> bils;
    Exponent pref_offset;  // prefactor (-q^{1/2 + pref_offset};q)_inf
    long qq_inv_power;     // power of 1/(q;q)_inf
};

QSeries reduction_sum(const ReductionData& d, long ell_margin, const Exponent& w) {
    LDL F = ldl_factor(d.A);
    if (!F.positive_definite)
        throw std::logic_error("reduction_sum: form not positive definite");
    Vec sv = ldl_solve(F, d.B_eff);
    Rational qfloor = d.C_eff - dot(sv, d.B_eff) / 2;

    QSeries out = QSeries::zero(w);
    if (w > qfloor) {
        InvPoch inv(1, w - qfloor);
        std::vector<QSeries> prod{QSeries::monomial(1, 0, w - qfloor)};
        LatticeCallbacks cb;
        cb.on_push = [&](long, long v) { prod.push_back(prod.back() * inv[v]); };
        cb.on_pop = [&] { prod.pop_back(); };
        cb.on_point = [&](const std::vector<long>& n, const Rational& qeff) {
            Rational X = quad_value(d.A, d.B_plain, 0, n);
            QSeries term = prod.back() *
                           QSeries::monomial(1, X, w - qeff + X + 1);
            for (const auto& bil : d.bils) {
                Rational s = Rational(n[bil.u]) - (bil.v >= 0 ? Rational(n[bil.v]) : Rational(0));
                Rational vmin = -bil.e * s / 2 - bil.e * bil.e / 4;
                term = term * bilateral_factor(s, bil.e, w - qeff + vmin, ell_margin);
                if (term.is_zero()) break;
            }
            out.add_scaled_inplace(term, 0, 1);
        };
        enumerate_lattice(d.A, d.B_eff, d.C_eff, w, true, cb);
    }
    QSeries pref = pochhammer_any(-1, rat(1, 2) + d.pref_offset, 1, w);
    QSeries pinv = pochhammer({1, 1, 1, kInfinity}, w).inverse();
    for (long i = 0; i < d.qq_inv_power; ++i) pref = pref * pinv;
    return out * pref;
}

const Vec kBeta[] = {{2, 0, 0}, {2, -2, 2}, {2, 0, 2}, {0, 0, 2}};
const Vec kAlpha[] = {
    {0, 0, 0}, {0, rat(-1, 2), rat(1, 2)}, {0, 0, rat(1, 2)},
    {1, rat(1, 2), rat(1, 2)}, {1, rat(1, 2), 0}};
const Vec kGamma[] = {{0, 0}, {0, 2}, {-2, 2}};

int norm_parity(long v) { return (int)(((v % 2) + 2) % 2); }

QSeries exact_mul(const QSeries& f, const QSeries& g) {
    if (f.is_zero() || g.is_zero())
        return QSeries::zero(qmax(f.accuracy(), g.accuracy()));
    Exponent df = f.terms().rbegin()->first, dg = g.terms().rbegin()->first;
    Exponent acc = df + dg + 1;
    return f.with_accuracy(acc - *g.valuation()) * g.with_accuracy(acc - *f.valuation());
}

struct FiniteSumParams {
    bool odd;
    long u, v;
    int sgn;
};

FiniteSumParams finite_sum_params(int id) {
    switch (id) {
        case 1: return {false, 1, 0, -1};
        case 2: return {true, 1, 0, -1};
        case 3: return {false, 1, 0, 1};
        case 4: return {true, 1, 0, 1};
        case 5: return {false, 0, 0, -1};
        case 6: return {true, 0, 0, -1};
        case 7: return {false, 0, 0, 1};
        case 8: return {true, 0, 0, 1};
        case 9: return {false, -1, 1, -1};
        case 10: return {false, -1, 0, -1};
        case 11: return {true, -1, 0, -1};
        case 12: return {true, -1, 0, 1};
        default: throw std::domain_error("finite_sum: id out of range");
    }
}

// (sign*q^{off};q)_len as an exact Laurent polynomial
QSeries fpoch(int sign, const Exponent& off, long len) {
    return pochhammer({sign, off, 1, len}, 1);
}

// (q^a,q^{m-a};q^m)_inf
QSeries pairP(long a, long m, const Exponent& acc) {
    return pochhammer({1, a, m, kInfinity}, acc) * pochhammer({1, m - a, m, kInfinity}, acc);
}

}  // namespace

const Vec& beta_vector(int k) {
    if (k < 1 || k > 4) throw std::domain_error("beta_vector: k out of range");
    return kBeta[k - 1];
}

const Vec& alpha_vector(int k) {
    if (k < 1 || k > 5) throw std::domain_error("alpha_vector: k out of range");
    return kAlpha[k - 1];
}

const Vec& gamma_vector(int k) {
    if (k < 1 || k > 3) throw std::domain_error("gamma_vector: k out of range");
    return kGamma[k - 1];
}

QSeries family_sum(const FamilyIndex& idx, const Exponent& accuracy) {
    auto need_parity = [&](bool need) {
        if (need && idx.parity != 0 && idx.parity != 1)
            throw std::domain_error("family_sum: parity required");
        if (!need && idx.parity != kNoParity)
            throw std::domain_error("family_sum: unexpected parity");
    };
    switch (idx.family) {
        case Family::G:
            need_parity(false);
            return g_family(beta_vector(idx.k), -1, 1, -1, accuracy);
        case Family::Gt:
            need_parity(false);
            return g_family(beta_vector(idx.k), 1, -1, -1, accuracy);
        case Family::L:
            need_parity(true);
            return g_family(beta_vector(idx.k), -1, 1, idx.parity, accuracy);
        case Family::Z:
        case Family::Zsplit: {
            need_parity(idx.family == Family::Zsplit);
            const Vec& al = alpha_vector(idx.k);
            Mat A = {{8, 4, 0}, {4, 6, -2}, {0, -2, 2}};
            Vec B = {4 * al[0], 4 * al[1], 4 * al[2]};
            int p = idx.parity;
            return lattice_qsum(A, B, 4, accuracy, [p](const std::vector<long>& n) -> long {
                if (p != kNoParity && norm_parity(n[1] - n[2]) != p) return 0;
                return 1;
            });
        }
        case Family::H:
        case Family::Ht: {
            if (idx.parity != kNoParity && idx.parity != 0 && idx.parity != 1)
                throw std::domain_error("family_sum: bad parity");
            const Vec& ga = gamma_vector(idx.k);
            Mat A = {{4, -2}, {-2, 2}};
            Vec B = {ga[0], ga[1]};
            int p = idx.parity;
            bool sign_m = (idx.family == Family::Ht);
            return lattice_qsum(A, B, 4, accuracy, [p, sign_m](const std::vector<long>& n) -> long {
                if (p != kNoParity && norm_parity(n[1]) != p) return 0;
                return (sign_m && n[0] % 2 != 0) ? -1 : 1;
            });
        }
    }
    throw std::domain_error("family_sum: invalid family");
}

QSeries reduce_even_rhs(const RankReductionInstance& inst, const Exponent& accuracy) {
    if (!inst.even) throw std::domain_error("reduce_even_rhs: instance not even");
    const long r = inst.r;
    if (r < 1) throw std::domain_error("reduce_even_rhs: r must be positive");
    if ((long)inst.exponents.size() != 2 * r)
        throw std::domain_error("reduce_even_rhs: need 2r exponents");
    if (!(inst.base > 0)) throw std::domain_error("reduce_even_rhs: base must be positive");
    const auto& e = inst.exponents;
    for (long i = 1; i < r; ++i)
        if (e[2 * i - 1] + e[2 * i] != 0)
            throw std::domain_error("reduce_even_rhs: pair constraint violated");
    // x_j in 1-based indexing, with x_0 = 1/x_1
    auto x = [&](long j) -> Exponent { return j == 0 ? Exponent(-e[0]) : e[j - 1]; };

    ReductionData d;
    const long dim = r + 1;
    d.A.assign(dim, Vec(dim, 0));
    add_rank1(d.A, {{0, 1}}, rat(1, 2));                    // (1/2) n_1^2
    add_rank1(d.A, {{0, 1}, {1, 1}}, rat(1, 2));            // (1/2)(n_1+n_2)^2
    for (long i = 2; i <= r; ++i)                           // (1/4)(n_i-n_{i+1})^2
        add_rank1(d.A, {{i - 1, 1}, {i, -1}}, rat(1, 4));
    d.B_plain.assign(dim, 0);
    d.B_plain[0] = -x(0);                                   // x_0^{-n_1}
    for (long j = 1; j <= r; ++j) d.B_plain[j] += x(2 * j) - x(2 * j - 2);
    d.B_eff = d.B_plain;
    for (long k = 2; k <= r; ++k) {
        Rational ex = x(2 * k - 2);
        d.bils.push_back({k - 1, k, ex});                   // s = n_k - n_{k+1}
        d.B_eff[k - 1] -= ex / 2;
        d.B_eff[k] += ex / 2;
        d.C_eff -= ex * ex / 4;
    }
    d.pref_offset = x(2 * r);
    d.qq_inv_power = r - 1;

    Exponent acc1 = accuracy / inst.base;
    QSeries f = boosted(acc1, [&](const Exponent& w) {
        return reduction_sum(d, inst.ell_margin, w);
    });
    return f.substitute_qk(inst.base);
}

QSeries reduce_odd_rhs(const RankReductionInstance& inst, const Exponent& accuracy) {
    if (inst.even) throw std::domain_error("reduce_odd_rhs: instance not odd");
    const long r = inst.r;
    if (r < 1) throw std::domain_error("reduce_odd_rhs: r must be positive");
    if ((long)inst.exponents.size() != 2 * r + 1)
        throw std::domain_error("reduce_odd_rhs: need 2r+1 exponents");
    if (!(inst.base > 0)) throw std::domain_error("reduce_odd_rhs: base must be positive");
    const auto& e = inst.exponents;
    for (long i = 1; i <= r; ++i)
        if (e[2 * i - 2] + e[2 * i - 1] != 0)
            throw std::domain_error("reduce_odd_rhs: pair constraint violated");
    auto x = [&](long j) -> Exponent { return e[j - 1]; };

    ReductionData d;
    d.A.assign(r, Vec(r, 0));
    // (1/4) sum_{i=1}^r (n_i - n_{i-1})^2 with n_0 = 0
    add_rank1(d.A, {{0, 1}}, rat(1, 4));
    for (long i = 2; i <= r; ++i) add_rank1(d.A, {{i - 1, 1}, {i - 2, -1}}, rat(1, 4));
    d.B_plain.assign(r, 0);
    for (long j = 1; j <= r; ++j) d.B_plain[j - 1] = x(2 * j + 1) - x(2 * j - 1);
    d.B_eff = d.B_plain;
    for (long k = 1; k <= r; ++k) {
        Rational ex = x(2 * k - 1);
        // s = n_{k-1} - n_k, with n_0 = 0 for k = 1
        if (k == 1) {
            d.bils.push_back({0, -1, ex});
            // careful: s = -n_1 here, handled below by swapping the roles
        } else {
            d.bils.push_back({k - 2, k - 1, ex});
        }
        if (k >= 2) d.B_eff[k - 2] -= ex / 2;
        d.B_eff[k - 1] += ex / 2;
        d.C_eff -= ex * ex / 4;
    }
    d.pref_offset = x(2 * r + 1);
    d.qq_inv_power = r;

    /* The k = 1 factor has s = n_0 - n_1 = -n_1, but reduction_sum computes
     * s = n[u] - n[v] with the fixed n_0 dropped, giving +n_1.  The bilateral
     * sum is invariant under (s, e) -> (-s, -e) via ell -> -ell, so negating
     * e compensates; the fold above already used the matching sign. */
    d.bils[0].e = -d.bils[0].e;

    Exponent acc1 = accuracy / inst.base;
    QSeries f = boosted(acc1, [&](const Exponent& w) {
        return reduction_sum(d, inst.ell_margin, w);
    });
    return f.substitute_qk(inst.base);
}

namespace {

/* Row N of the Gaussian binomial triangle, cached across calls: the finite
 * sums use every [N n] of a row, and rows grow one Pascal step at a time. */
const std::vector<QSeries>& qbinom_row(long N) {
    static std::vector<std::vector<QSeries>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    while ((long)cache.size() <= N) {
        long n = (long)cache.size();
        std::vector<QSeries> row;
        row.reserve(n + 1);
        if (n == 0) {
            row.push_back(QSeries::monomial(1, 0, 1));
        } else {
            const std::vector<QSeries>& prev = cache[n - 1];
            for (long j = 0; j <= n; ++j) {
                Exponent acc = Exponent(j) * Exponent(n - j) + 1;
                QSeries out = QSeries::zero(acc);
                if (j > 0)
                    out.add_scaled_inplace(prev[j - 1].with_accuracy(acc), 0, 1);
                if (j < n)
                    out.add_scaled_inplace(prev[j].with_accuracy(acc - j), j, 1);
                row.push_back(std::move(out));
            }
        }
        cache.push_back(std::move(row));
    }
    return cache[N];
}

}  // namespace

QSeries finite_sum_lhs(int id, long i) {
    if (i < 0) throw std::domain_error("finite_sum_lhs: i must be nonnegative");
    FiniteSumParams p = finite_sum_params(id);
    long N = 2 * i + (p.odd ? 1 : 0);
    std::vector<Exponent> sh(N + 1);
    Exponent maxe = 0;
    for (long n = 0; n <= N; ++n) {
        long rr = N - n;
        sh[n] = rat(-n * rr, 2) + rat(p.u * n + p.v * rr, 2);
        maxe = qmax(maxe, sh[n] + n * rr);
    }
    QSeries out = QSeries::zero(maxe + 1);
    const std::vector<QSeries>& row = qbinom_row(N);
    for (long n = 0; n <= N; ++n) {
        int sg = (p.sgn == -1 && n % 2 != 0) ? -1 : 1;
        out.add_scaled_inplace(row[n].with_accuracy(maxe + 1 - sh[n]), sh[n], sg);
    }
    return out;
}

QSeries finite_sum_rhs(int id, long i) {
    if (i < 0) throw std::domain_error("finite_sum_rhs: i must be nonnegative");
    finite_sum_params(id);  // validate id
    const Exponent h = rat(1, 2);
    auto mono = [](const Rational& c, const Exponent& e) {
        return QSeries::monomial(c, e, e + 1);
    };
    auto one = [&] { return mono(1, 0); };
    auto zero = [] { return QSeries::zero(1); };
    long ii = i;
    switch (id) {
        case 1:
        case 10:
            return ii == 0 ? one() : zero();
        case 2:
            return exact_mul(mono((ii % 2 ? -1 : 1), rat(-ii * ii, 2)),
                             exact_mul(fpoch(1, h, ii), fpoch(1, h, ii + 1)));
        case 3:
            return exact_mul(mono(1, rat(-(ii * ii - ii), 2)),
                             exact_mul(fpoch(-1, 0, ii), fpoch(-1, 1, ii)));
        case 4:
            return exact_mul(mono(1, rat(-ii * ii, 2)),
                             exact_mul(fpoch(-1, h, ii), fpoch(-1, h, ii + 1)));
        case 5:
            return exact_mul(mono((ii % 2 ? -1 : 1), rat(-ii * ii, 2)),
                             exact_mul(fpoch(1, h, ii), fpoch(1, h, ii)));
        case 6:
            return zero();
        case 7:
            return exact_mul(mono(1, rat(-ii * ii, 2)),
                             exact_mul(fpoch(-1, h, ii), fpoch(-1, h, ii)));
        case 8:
            return exact_mul(mono(2, rat(-ii * (ii + 1), 2)),
                             exact_mul(fpoch(-1, 1, ii), fpoch(-1, 1, ii)));
        case 9:
            if (ii == 0) return one();
            return exact_mul(mono((ii % 2 ? 1 : -1), rat(-(ii * ii + 1), 2)),
                             exact_mul(fpoch(1, h, ii - 1), fpoch(1, h, ii + 1)));
        case 11:
            return exact_mul(mono((ii % 2 ? 1 : -1), rat(-(ii + 1) * (ii + 1), 2)),
                             exact_mul(fpoch(1, h, ii), fpoch(1, h, ii + 1)));
        case 12:
            return exact_mul(mono(1, rat(-(ii + 1) * (ii + 1), 2)),
                             exact_mul(fpoch(-1, h, ii), fpoch(-1, h, ii + 1)));
    }
    throw std::domain_error("finite_sum_rhs: id out of range");
}

QSeries shift_identity_lhs(int id, long i, const Exponent& accuracy) {
    if (i < 0) throw std::domain_error("shift_identity_lhs: i must be nonnegative");
    switch (id) {
        case 1: return pochhammer_any(1, -i, 1, accuracy);
        case 2: return pochhammer_any(1, rat(-2 * i - 1, 2), 1, accuracy);
        case 3: return pochhammer_any(1, rat(1 - 2 * i, 2), 1, accuracy);
        case 4: return pochhammer_any(-1, -i, 1, accuracy);
        case 5: return pochhammer_any(-1, rat(-2 * i - 1, 2), 1, accuracy);
        case 6: return pochhammer_any(-1, 1 - i, 1, accuracy);
        case 7: return pochhammer_any(-1, rat(1 - 2 * i, 2), 1, accuracy);
    }
    throw std::domain_error("shift_identity_lhs: id out of range");
}

QSeries shift_identity_rhs(int id, long i, const Exponent& accuracy) {
    if (i < 0) throw std::domain_error("shift_identity_rhs: i must be nonnegative");
    const Exponent h = rat(1, 2);
    auto build = [&](const Rational& c, const Exponent& sh, int psign, const Exponent& poff,
                     const QSeries& fin) {
        QSeries inf = pochhammer({psign, poff, 1, kInfinity}, accuracy - sh);
        QSeries prod = inf * fin.with_accuracy(accuracy - sh) *
                       QSeries::monomial(c, sh, qmax(accuracy, sh + 1));
        return prod.truncated(accuracy);
    };
    switch (id) {
        case 1:
            return QSeries::zero(accuracy);
        case 2:
            return build((i % 2 ? 1 : -1), rat(-(i + 1) * (i + 1), 2), 1, h,
                         fpoch(1, h, i + 1));
        case 3:
            return build((i % 2 ? -1 : 1), rat(-i * i, 2), 1, h, fpoch(1, h, i));
        case 4:
            return build(2, rat(-(i * i + i), 2), -1, 1, fpoch(-1, 1, i));
        case 5:
            return build(1, rat(-(i + 1) * (i + 1), 2), -1, h, fpoch(-1, h, i + 1));
        case 6:
            if (i == 0) return pochhammer({-1, 1, 1, kInfinity}, accuracy);
            return build(2, rat(-(i * i - i), 2), -1, 1, fpoch(-1, 1, i - 1));
        case 7:
            return build(1, rat(-i * i, 2), -1, h, fpoch(-1, h, i));
    }
    throw std::domain_error("shift_identity_rhs: id out of range");
}

QSeries chi4_theta_rhs(int case_id, const Exponent& accuracy) {
    struct Case {
        int k;
        bool swap;       // theta1 pairs with the even split
        Exponent shift;  // power of q in front
        Exponent pref;   // prefactor (-q^{pref};q^4)_inf
    };
    Case c;
    switch (case_id) {
        case 1: c = {1, false, 0, 2}; break;
        case 2: c = {2, true, -1, 2}; break;
        case 3: c = {3, false, 0, 4}; break;
        case 4: c = {4, true, -1, 2}; break;
        case 5: c = {5, true, -1, 0}; break;
        default: throw std::domain_error("chi4_theta_rhs: case out of range");
    }
    return boosted(accuracy, [&](const Exponent& w) {
        QSeries z0 = family_sum({Family::Zsplit, c.k, 0}, w);
        QSeries z1 = family_sum({Family::Zsplit, c.k, 1}, w);
        QSeries t0 = theta0(w), t1 = theta1(w);
        QSeries comb = c.swap ? z0 * t1 + z1 * t0 : z0 * t0 + z1 * t1;
        QSeries pref = pochhammer_any(-1, c.pref, 4, w);
        QSeries pinv = pochhammer({1, 4, 4, kInfinity}, w).inverse();
        return comb * pref * pinv *
               QSeries::monomial(1, c.shift, qmax(w, c.shift + 1));
    });
}

QSeries chi5_theta_rhs(int case_id, const Exponent& accuracy) {
    struct Case {
        int k;
        int hpar;        // parity of the H split paired with theta0^2/theta1^2
        int cpar;        // parity of the H split paired with theta0*theta1
        bool minus;      // theta0^2 takes (H - Ht)/2 instead of (H + Ht)/2
        Exponent shift;
        Exponent pref;
    };
    Case c;
    switch (case_id) {
        case 1: c = {1, 0, 1, false, 0, 2}; break;   // S(0,0,0)
        case 2: c = {1, 0, 1, true, -2, 4}; break;   // S(1,1,1/2)
        case 3: c = {2, 0, 1, true, -2, 2}; break;   // S(-1,-1,0)
        case 4: c = {2, 0, 1, false, 0, 4}; break;   // S(0,0,1/2)
        case 5: c = {3, 1, 0, false, -1, 2}; break;  // S(0,-1,0)
        case 6: c = {3, 1, 0, true, -1, 4}; break;   // S(1,0,1/2)
        default: throw std::domain_error("chi5_theta_rhs: case out of range");
    }
    return boosted(accuracy, [&](const Exponent& w) {
        QSeries h = family_sum({Family::H, c.k, c.hpar}, w);
        QSeries ht = family_sum({Family::Ht, c.k, c.hpar}, w);
        QSeries hc = family_sum({Family::H, c.k, c.cpar}, w);
        QSeries half = QSeries::monomial(rat(1, 2), 0, w);
        QSeries plus = (h + ht) * half, minus = (h - ht) * half;
        QSeries t0 = theta0(w), t1 = theta1(w);
        QSeries comb = c.minus ? minus * t0 * t0 + plus * t1 * t1
                               : plus * t0 * t0 + minus * t1 * t1;
        comb = comb + hc * t0 * t1;
        QSeries pref = pochhammer_any(-1, c.pref, 4, w);
        QSeries pinv = pochhammer({1, 4, 4, kInfinity}, w).inverse();
        return comb * pref * pinv * pinv *
               QSeries::monomial(1, c.shift, qmax(w, c.shift + 1));
    });
}

QSeries s_scaling(long a1, long b1, const Rational& c1,
                  long a2, long b2, const Rational& c2, const Exponent& accuracy) {
    if (a1 - a2 != b1 - b2 || Rational(a1 - a2) != 2 * (c1 - c2) || !is_integer(c1 - c2))
        throw std::domain_error("s_scaling: difference conditions violated");
    Exponent shift = Exponent(a2) * a2 + Exponent(b2) * b2 - Exponent(a1) * a1 -
                     Exponent(b1) * b1;
    return boosted(accuracy, [&](const Exponent& w) {
        TadpoleSpec spec{5,
                         {Exponent(a2), Exponent(-a2), Exponent(b2), Exponent(-b2), c2},
                         4};
        QSeries s2 = chi(spec, w);
        QSeries num = pochhammer_any(-1, 2 + 4 * c1, 4, w);
        QSeries den = pochhammer_any(-1, 2 + 4 * c2, 4, w);
        return s2 * num * den.inverse() *
               QSeries::monomial(1, shift, qmax(w, shift + 1));
    });
}

QSeries chi3_theta_rhs(long a, const Rational& c, const Exponent& accuracy) {
    static const std::vector<std::pair<long, Rational>> admissible = {
        {-1, rat(-1, 2)}, {-2, rat(-1, 2)}, {0, 0}, {-1, 0}, {1, rat(1, 2)}, {0, rat(1, 2)}};
    bool ok = false;
    for (const auto& [aa, cc] : admissible)
        if (aa == a && cc == c) ok = true;
    if (!ok) throw std::domain_error("chi3_theta_rhs: (a,c) not admissible");
    Rational t = c - Rational(a) / 2;  // 0 or 1/2

    return boosted(accuracy, [&](const Exponent& w) {
        // Rogers single-sum closed forms by parity of the summation index.
        QSeries qq_inv = pochhammer({1, 1, 1, kInfinity}, w).inverse();
        bool t0 = (t == 0);
        QSeries even = (t0 ? J2(2, 10, w) * pairP(6, 20, w)
                           : J2(1, 10, w) * pairP(8, 20, w)) * qq_inv;
        QSeries odd = (t0 ? J2(3, 10, w) * pairP(4, 20, w) *
                                QSeries::monomial(1, rat(1, 4), w)
                          : J2(4, 10, w) * pairP(2, 20, w) *
                                QSeries::monomial(1, rat(3, 4), w)) * qq_inv;
        QSeries ra = (norm_parity(a) == 0) ? even : odd;
        QSeries rb = (norm_parity(a) == 0) ? odd : even;
        QSeries t0q = theta0(4 * w).substitute_qk(rat(1, 4));
        QSeries t1q = theta1(4 * w).substitute_qk(rat(1, 4));
        QSeries pref = pochhammer_any(-1, rat(1, 2) + c, 1, w);
        Exponent sh = -Exponent(a) * a / 4;
        return (t0q * ra + t1q * rb) * pref * qq_inv *
               QSeries::monomial(1, sh, qmax(w, sh + 1));
    });
}

}  // namespace nahmforge
