#include "nahmforge/nahm.hpp"

#include <stdexcept>

#include "nahmforge/qproducts.hpp"

namespace nahmforge {

namespace {

void check_square(const Mat& A) {
    if (A.empty()) throw std::domain_error("empty matrix");
    for (const auto& row : A)
        if (row.size() != A.size()) throw std::domain_error("matrix not square");
}

Rational dot(const Vec& a, const Vec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/* 1/(q;q)_j (or its square) truncated at a fixed relative accuracy, built
 * incrementally: each step multiplies by the geometric series for 1/(1-q^j). */
class InvPochCache {
public:
    InvPochCache(Exponent relacc, int power)
        : relacc_(std::move(relacc)), power_(power) {
        cache_.push_back(QSeries::monomial(1, 0, relacc_));
    }

    const QSeries& operator[](long j) {
        while ((long)cache_.size() <= j) {
            long m = (long)cache_.size();
            QSeries g = QSeries::zero(relacc_);
            for (Exponent e = 0; e < relacc_; e += m) g.add_term_inplace(e, 1);
            QSeries next = cache_.back() * g;
            if (power_ == 2) next = next * g;
            cache_.push_back(std::move(next));
        }
        return cache_[j];
    }

private:
    Exponent relacc_;
    int power_;
    std::vector<QSeries> cache_;
};

struct Enumerator {
    const LDL& F;
    const Vec& s;
    Rational qfloor;
    Rational bound;
    bool nonnegative;
    const LatticeCallbacks& cb;

    long r;
    std::vector<long> n;
    Vec ns;  // n_i + s_i for the fixed coordinates

    void run() {
        r = (long)F.d.size();
        n.assign(r, 0);
        ns.assign(r, 0);
        if (!(qfloor < bound)) return;
        descend(r - 1, 0);
    }

    /* Coordinates above `i` are fixed; `quad` is their contribution
     * sum_{j>i} (1/2) d_j y_j^2 with y = L^T (n + s).  Lower levels only add
     * nonnegative amounts, so the feasible n_i form one integer interval
     * around the vertex of (1/2) d_i (n_i + t_i)^2. */
    void descend(long i, const Rational& quad) {
        Rational t = s[i];
        for (long j = i + 1; j < r; ++j) t += F.L[j][i] * ns[j];
        const Rational rem = bound - qfloor - quad;

        auto fits = [&](long v) {
            Rational y = t + v;
            return F.d[i] * y * y / 2 < rem;
        };
        long nc = to_long(floor_q(-t));
        long lo = nc + 1, hi = nc;
        for (long v = nc + 1; fits(v); ++v) hi = v;
        for (long v = nc; (!nonnegative || v >= 0) && fits(v); --v) lo = v;
        if (nonnegative && lo < 0) lo = 0;

        for (long v = lo; v <= hi; ++v) {
            n[i] = v;
            ns[i] = s[i] + v;
            Rational y = t + v;
            Rational quad2 = quad + F.d[i] * y * y / 2;
            if (cb.on_push) cb.on_push(i, v);
            if (i == 0) {
                cb.on_point(n, qfloor + quad2);
            } else {
                descend(i - 1, quad2);
            }
            if (cb.on_pop) cb.on_pop();
        }
    }
};

}  // namespace

LDL ldl_factor(const Mat& A) {
    check_square(A);
    const long r = (long)A.size();
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < i; ++j)
            if (A[i][j] != A[j][i]) throw std::domain_error("matrix not symmetric");

    LDL F;
    F.L.assign(r, Vec(r, 0));
    F.d.assign(r, 0);
    F.positive_definite = true;
    for (long j = 0; j < r; ++j) {
        Rational dj = A[j][j];
        for (long k = 0; k < j; ++k) dj -= F.L[j][k] * F.L[j][k] * F.d[k];
        F.d[j] = dj;
        F.L[j][j] = 1;
        if (!(dj > 0)) {
            F.positive_definite = false;
            return F;
        }
        for (long i = j + 1; i < r; ++i) {
            Rational x = A[i][j];
            for (long k = 0; k < j; ++k) x -= F.L[i][k] * F.L[j][k] * F.d[k];
            F.L[i][j] = x / dj;
        }
    }
    return F;
}

Vec ldl_solve(const LDL& F, const Vec& b) {
    if (!F.positive_definite) throw std::domain_error("ldl_solve: factorization not PD");
    const long r = (long)F.d.size();
    if ((long)b.size() != r) throw std::domain_error("ldl_solve: size mismatch");
    Vec y = b;
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < i; ++j) y[i] -= F.L[i][j] * y[j];
    for (long i = 0; i < r; ++i) y[i] /= F.d[i];
    for (long i = r - 1; i >= 0; --i)
        for (long j = i + 1; j < r; ++j) y[i] -= F.L[j][i] * y[j];
    return y;
}

Mat tadpole_matrix(long r) {
    if (r < 1) throw std::domain_error("tadpole_matrix: rank must be positive");
    Mat T(r, Vec(r, 0));
    for (long i = 0; i < r; ++i) T[i][i] = 2;
    T[r - 1][r - 1] = 1;
    for (long i = 0; i + 1 < r; ++i) T[i][i + 1] = T[i + 1][i] = -1;
    return T;
}

Rational quad_value(const Mat& A, const Vec& B, const Rational& C,
                    const std::vector<long>& n) {
    const long r = (long)A.size();
    Rational q = C;
    for (long i = 0; i < r; ++i) {
        q += B[i] * n[i];
        for (long j = 0; j < r; ++j) q += A[i][j] * n[i] * n[j] / 2;
    }
    return q;
}

void enumerate_lattice(const Mat& A, const Vec& B, const Rational& C,
                       const Rational& bound, bool nonnegative,
                       const LatticeCallbacks& cb) {
    check_square(A);
    LDL F = ldl_factor(A);
    if (!F.positive_definite)
        throw std::domain_error("enumerate_lattice: form not positive definite");
    Vec s = ldl_solve(F, B);
    Rational qfloor = C - dot(s, B) / 2;
    Enumerator en{F, s, qfloor, bound, nonnegative, cb};
    en.run();
}

void enumerate_lattice_bruteforce(const Mat& A, const Vec& B, const Rational& C,
                                  const Rational& bound, bool nonnegative,
                                  const LatticeCallbacks& cb) {
    check_square(A);
    const long r = (long)A.size();
    LDL F = ldl_factor(A);
    if (!F.positive_definite)
        throw std::domain_error("enumerate_lattice_bruteforce: form not positive definite");
    Vec s = ldl_solve(F, B);
    Rational R2 = bound - (C - dot(s, B) / 2);
    if (!(R2 > 0)) return;

    // (n_i + s_i)^2 <= 2 (bound - floor) (A^{-1})_{ii} certifies the box.
    std::vector<long> lo(r), hi(r);
    for (long i = 0; i < r; ++i) {
        Vec e(r, 0);
        e[i] = 1;
        Rational aii = ldl_solve(F, e)[i];
        mpz_class m;
        mpz_sqrt(m.get_mpz_t(), ceil_q(2 * R2 * aii).get_mpz_t());
        long rad = to_long(m) + 1;
        lo[i] = to_long(ceil_q(-s[i])) - rad;
        hi[i] = to_long(floor_q(-s[i])) + rad;
        if (nonnegative && lo[i] < 0) lo[i] = 0;
        if (lo[i] > hi[i]) return;
    }

    std::vector<long> n(r, 0);
    // Same fixing order as the pruned enumerator: last coordinate first.
    std::function<void(long)> rec = [&](long i) {
        for (long v = lo[i]; v <= hi[i]; ++v) {
            n[i] = v;
            if (cb.on_push) cb.on_push(i, v);
            if (i == 0) {
                Rational q = quad_value(A, B, C, n);
                if (q < bound) cb.on_point(n, q);
            } else {
                rec(i - 1);
            }
            if (cb.on_pop) cb.on_pop();
        }
    };
    rec(r - 1);
}

QSeries nahm_sum(const Mat& A, const Vec& B, const Rational& C,
                 const Rational& k, const Exponent& accuracy,
                 const std::vector<int>* signs) {
    check_square(A);
    const long r = (long)A.size();
    if ((long)B.size() != r) throw std::domain_error("nahm_sum: size mismatch");
    if (!(k > 0)) throw std::domain_error("nahm_sum: base must be positive");
    if (signs && (long)signs->size() != r) throw std::domain_error("nahm_sum: sign size mismatch");

    LDL F = ldl_factor(A);
    if (!F.positive_definite)
        throw std::domain_error("nahm_sum: quadratic form not positive definite");
    Vec s = ldl_solve(F, B);
    Rational qfloor = C - dot(s, B) / 2;

    // Work in the base-1 variable and substitute q -> q^k at the end.
    Exponent acc1 = accuracy / k;
    QSeries out = QSeries::zero(acc1);
    if (acc1 > qfloor) {
        InvPochCache inv(acc1 - qfloor, 1);
        std::vector<QSeries> prod{QSeries::monomial(1, 0, acc1 - qfloor)};
        std::vector<int> sgn{1};
        LatticeCallbacks cb;
        cb.on_push = [&](long i, long v) {
            prod.push_back(prod.back() * inv[v]);
            int f = (signs && (*signs)[i] == -1 && (v % 2 != 0)) ? -1 : 1;
            sgn.push_back(sgn.back() * f);
        };
        cb.on_pop = [&] {
            prod.pop_back();
            sgn.pop_back();
        };
        cb.on_point = [&](const std::vector<long>&, const Rational& q) {
            out.add_scaled_inplace(prod.back(), q, sgn.back());
        };
        Enumerator en{F, s, qfloor, acc1, /*nonnegative=*/true, cb};
        en.run();
    }
    return out.substitute_qk(k);
}

QSeries chi(const TadpoleSpec& spec, const Exponent& accuracy) {
    if ((long)spec.e.size() != spec.r) throw std::domain_error("chi: exponent size mismatch");
    return nahm_sum(tadpole_matrix(spec.r), spec.e, 0, spec.k, accuracy);
}

QSeries new_repn_rhs(long r, const Exponent& accuracy) {
    if (r < 1) throw std::domain_error("new_repn_rhs: rank must be positive");
    Mat A = tadpole_matrix(r);
    LDL F = ldl_factor(A);
    Vec s(r, 0);

    QSeries sum = QSeries::zero(accuracy);
    if (accuracy > 0) {
        InvPochCache inv2(accuracy, 2);
        std::vector<QSeries> prod{QSeries::monomial(1, 0, accuracy)};
        LatticeCallbacks cb;
        cb.on_push = [&](long i, long v) {
            QSeries f = prod.back() * inv2[v];
            // The last coordinate is fixed first and carries (-q^{1/2};q)_{n_r}.
            if (i == r - 1 && v > 0)
                f = f * pochhammer({-1, rat(1, 2), 1, v}, accuracy).with_accuracy(accuracy);
            prod.push_back(std::move(f));
        };
        cb.on_pop = [&] { prod.pop_back(); };
        cb.on_point = [&](const std::vector<long>&, const Rational& q) {
            sum.add_scaled_inplace(prod.back(), q, 1);
        };
        Enumerator en{F, s, 0, accuracy, /*nonnegative=*/true, cb};
        en.run();
    }
    QSeries p = pochhammer({1, 1, 1, kInfinity}, accuracy);
    for (long i = 0; i < r; ++i) sum = sum * p;
    return sum;
}

}  // namespace nahmforge
