#include "nahmforge/catalog.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <utility>

namespace nahmforge {

const char* to_string(Status s) {
    switch (s) {
        case Status::Theorem: return "theorem";
        case Status::Conjecture: return "conjecture";
        case Status::KnownClassical: return "known-classical";
    }
    throw std::logic_error("unknown status");
}

Status status_from_string(const std::string& s) {
    if (s == "theorem") return Status::Theorem;
    if (s == "conjecture") return Status::Conjecture;
    if (s == "known-classical") return Status::KnownClassical;
    throw std::invalid_argument("unknown status: " + s);
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Match: return "match";
        case Outcome::Mismatch: return "mismatch";
        case Outcome::AccuracyInsufficient: return "accuracy-insufficient";
    }
    throw std::logic_error("unknown outcome");
}

namespace {

using E = ExprPtr;

E C(const Rational& v) { return e_const(v); }
E Q(const Rational& e) { return e_qpow(e); }
E Jn(long m) { return e_J(m); }
E Jam(long a, long m) { return e_J2(a, m); }
E Pinf(int sign, const Rational& off, const Rational& step) {
    return e_poch({sign, off, step, kInfinity});
}
E Pfin(int sign, const Rational& off, const Rational& step, long len) {
    return e_poch({sign, off, step, len});
}
E M(std::initializer_list<E> xs) {
    E out;
    for (const E& x : xs) out = out ? e_mul(out, x) : x;
    return out;
}
E F(E num, E den) { return e_div(std::move(num), std::move(den)); }
E Pw(E x, long n) { return e_intpow(std::move(x), n); }
// (q^a, q^{m-a}; q^m)_inf, the theta pair without the (q^m;q^m) factor
E pairp(long a, long m) { return e_mul(Pinf(1, a, m), Pinf(1, m - a, m)); }

E sum1(const Rational& a2, const Rational& a1,
       std::vector<SingleSumSpec::NumFactor> num,
       std::vector<SingleSumSpec::DenFactor> den, const Rational& a0 = 0,
       int sgn = 1) {
    SingleSumSpec s;
    s.a2 = a2;
    s.a1 = a1;
    s.a0 = a0;
    s.sgn = sgn;
    s.num = std::move(num);
    s.den = std::move(den);
    return e_single_sum(std::move(s));
}

E X(long r, std::vector<Rational> e, const Rational& k) {
    return e_chi({r, std::move(e), k});
}
E Fam(Family f, int k, int p = kNoParity) { return e_family({f, k, p}); }

const Rational h = rat(1, 2);

std::pair<E, E> shift_pair(int K, long i) {
    if (i < 0) throw std::invalid_argument("shift identity needs i >= 0");
    auto sgn = [](long n) { return (n % 2) ? -1 : 1; };
    switch (K) {
        case 1: return {Pinf(1, -i, 1), C(0)};
        case 2:
            return {Pinf(1, -i - h, 1),
                    M({C(sgn(i + 1)), Q(rat(-(i + 1) * (i + 1), 2)), Pinf(1, h, 1),
                       Pfin(1, h, 1, i + 1)})};
        case 3:
            return {Pinf(1, h - i, 1),
                    M({C(sgn(i)), Q(rat(-i * i, 2)), Pinf(1, h, 1), Pfin(1, h, 1, i)})};
        case 4:
            return {Pinf(-1, -i, 1),
                    M({C(2), Q(rat(-(i * i + i), 2)), Pinf(-1, 1, 1), Pfin(-1, 1, 1, i)})};
        case 5:
            return {Pinf(-1, -i - h, 1),
                    M({Q(rat(-(i + 1) * (i + 1), 2)), Pinf(-1, h, 1),
                       Pfin(-1, h, 1, i + 1)})};
        case 6:
            return {Pinf(-1, 1 - i, 1),
                    i == 0 ? Pinf(-1, 1, 1)
                           : M({C(2), Q(rat(-(i * i - i), 2)), Pinf(-1, 1, 1),
                                Pfin(-1, 1, 1, i - 1)})};
        case 7:
            return {Pinf(-1, h - i, 1),
                    M({Q(rat(-i * i, 2)), Pinf(-1, h, 1), Pfin(-1, h, 1, i)})};
        default: throw std::invalid_argument("shift identity id out of range");
    }
}

std::pair<E, E> finite_sum_pair(int K, long i) {
    if (K < 1 || K > 12 || i < 0)
        throw std::invalid_argument("finite-sum instance out of range");
    return {e_finite_sum(K, i, true), e_finite_sum(K, i, false)};
}

struct Builder {
    std::vector<IdentityRecord> recs;

    IdentityRecord& add(std::string id, std::string label, Status st,
                        const Rational& order, E lhs, E rhs, std::string family,
                        std::string params = "") {
        IdentityRecord r;
        r.id = std::move(id);
        r.paper_label = std::move(label);
        r.status = st;
        r.default_order = order;
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
        r.family = std::move(family);
        r.family_params = std::move(params);
        recs.push_back(std::move(r));
        return recs.back();
    }
};

void add_classical(Builder& b) {
    for (long a : {0L, 1L}) {
        NahmSpec n;
        n.A = {{2}};
        n.B = {Rational(a)};
        b.add("RR-a" + std::to_string(a), "RR", Status::KnownClassical, 200, e_nahm(n),
              F(C(1), e_mul(Pinf(1, a + 1, 5), Pinf(1, 4 - a, 5))), "classical");
        b.add("Rogers-a" + std::to_string(a), "Rogers-id", Status::KnownClassical, 200,
              sum1(1, 2 * a, {}, {{4, 1, 0}}),
              F(C(1), M({Pinf(-1, 2, 2), Pinf(1, a + 1, 5), Pinf(1, 4 - a, 5)})),
              "classical");
    }
    // sum q^{n(n-1)/2} z^n / (q;q)_n = (-z;q)_inf and
    // sum z^n / (q;q)_n = 1/(z;q)_inf at z = s q^a
    struct Z { const char* tag; int s; Rational a; };
    for (const Z& z : {Z{"q", 1, 1}, Z{"mq", -1, 1}, Z{"qh", 1, h}, Z{"mqh", -1, h}}) {
        b.add(std::string("euler-prod-") + z.tag, "euler-2", Status::KnownClassical, 200,
              sum1(h, z.a - h, {}, {{1, 1, 0}}, 0, z.s), Pinf(-z.s, z.a, 1), "classical");
        b.add(std::string("euler-inv-") + z.tag, "euler", Status::KnownClassical, 200,
              sum1(0, z.a, {}, {{1, 1, 0}}, 0, z.s), F(C(1), Pinf(z.s, z.a, 1)),
              "classical");
    }
    b.add("qbi-spec", "qbi", Status::KnownClassical, 200,
          sum1(0, 1, {{-1, 0, 1, 0}}, {{1, 1, 0}}),
          F(Pinf(-1, 1, 1), Pinf(1, 1, 1)), "classical")
        .note = "binomial series at a = -1, z = q";
    b.add("heine-spec", "Heine", Status::KnownClassical, 200,
          sum1(0, 1, {{-1, 1, 1, 0}, {1, 1, 1, 0}}, {{1, 1, 0}, {1, 1, 0}}),
          F(e_mul(Pinf(1, 1, 1), Pinf(-1, 2, 1)), e_mul(Pinf(1, 1, 1), Pinf(1, 1, 1))),
          "classical")
        .note = "transformation at a = -q, b = c = q, t = q; the inner sum collapses";
    {
        // (-z;q)_N = sum_i [N i] z^i q^{i(i-1)/2} at N = 6, z = q^{1/2}
        E rhs;
        for (long i = 0; i <= 6; ++i) {
            E t = e_mul(e_qbinom(6, i), Q(i * h + rat(i * (i - 1), 2)));
            rhs = rhs ? e_add(rhs, t) : t;
        }
        b.add("finite-euler", "eq-finite", Status::KnownClassical, 60,
              Pfin(-1, h, 1, 6), rhs, "classical");
    }
    // theta(z) = (-q^{1/2} z, -q^{1/2}/z, q; q)_inf at z = s q^a
    for (const Z& z : {Z{"z1", 1, 0}, Z{"zm1", -1, 0}, Z{"zqh", 1, h}, Z{"zmqh", -1, h},
                       Z{"zq", 1, 1}, Z{"zmq", -1, 1}}) {
        b.add(std::string("jtp-") + z.tag, "JTP", Status::KnownClassical, 200,
              e_theta({z.s, z.a, 1}),
              M({Pinf(-z.s, h + z.a, 1), Pinf(-z.s, h - z.a, 1), Pinf(1, 1, 1)}),
              "classical");
    }
    b.add("phi-prod", "eq-psi", Status::KnownClassical, 200, e_phi(),
          F(Pw(Jn(2), 5), e_mul(Pw(Jn(1), 2), Pw(Jn(4), 2))), "classical");
    b.add("psi-prod", "eq-psi", Status::KnownClassical, 200, e_psi(),
          F(Pw(Jn(2), 2), Jn(1)), "classical");
    b.add("theta0-prod", "theta0-defn", Status::KnownClassical, 200, e_theta0(),
          F(Pw(Jn(8), 5), e_mul(Pw(Jn(4), 2), Pw(Jn(16), 2))), "classical");
    b.add("theta1-prod", "theta1-defn", Status::KnownClassical, 200, e_theta1(),
          F(M({C(2), Q(1), Pw(Jn(16), 2)}), Jn(8)), "classical");
}

void add_andrews_gordon(Builder& b) {
    for (long k = 2; k <= 5; ++k)
        for (long s = 1; s <= k; ++s) {
            NahmSpec n;
            n.A.assign(k - 1, Vec(k - 1));
            n.B.assign(k - 1, 0);
            for (long i = 1; i < k; ++i) {
                for (long j = 1; j < k; ++j) n.A[i - 1][j - 1] = 2 * std::min(i, j);
                n.B[i - 1] = std::max(0L, i - s + 1);
            }
            b.add("AG(" + std::to_string(k) + "," + std::to_string(s) + ")", "AG",
                  Status::KnownClassical, 200, e_nahm(n), F(Jam(s, 2 * k + 1), Jn(1)),
                  "AG", "2 <= k <= 5, 1 <= s <= k");
        }
}

void add_slater(Builder& b) {
    auto add = [&](const char* id, const char* label, E lhs, E rhs) {
        b.add(id, label, Status::KnownClassical, 200, std::move(lhs), std::move(rhs),
              "slater");
    };
    add("S.25", "S.25", sum1(1, 0, {{-1, 1, 2, 0}}, {{4, 1, 0}}),
        F(e_mul(Jn(2), Pw(Jn(3), 2)), M({Jn(1), Jn(4), Jn(6)})));
    add("R.4.2.11", "Entry 4.2.11", sum1(1, 2, {{-1, 1, 2, 0}}, {{4, 1, 0}}),
        F(Pw(Jn(6), 2), e_mul(Jn(3), Jn(4))));
    add("S.28", "S.28", sum1(1, 1, {{-1, 2, 2, 0}}, {{1, 2, 1}}),
        F(e_mul(Jn(3), Jn(12)), e_mul(Jn(1), Jn(6))));
    add("S.29", "S.29", sum1(1, 0, {{-1, 1, 2, 0}}, {{1, 2, 0}}),
        F(Pw(Jn(6), 2), e_mul(Jn(1), Jn(12))));
    add("S.50", "S.50", sum1(1, 2, {{-1, 1, 2, 0}}, {{1, 2, 1}}),
        F(e_mul(Jn(2), Pw(Jn(12), 2)), M({Jn(1), Jn(4), Jn(6)})));
    add("S.80", "S.80", sum1(1, 1, {{-1, 2, 2, 0}}, {{2, 2, 1}}),
        F(M({Jn(4), Jam(4, 14), Jam(6, 28)}), e_mul(Pw(Jn(2), 2), Jn(28))));
    add("S.81", "S.81", sum1(1, 1, {{-1, 2, 2, 0}}, {{2, 2, 0}}),
        F(M({Jn(4), Jam(2, 14), Jam(10, 28)}), e_mul(Pw(Jn(2), 2), Jn(28))));
    add("S.82", "S.82", sum1(1, 3, {{-1, 2, 2, 0}}, {{2, 2, 1}}),
        F(M({Jn(4), Jam(6, 14), Jam(2, 28)}), e_mul(Pw(Jn(2), 2), Jn(28))));
    add("S.117", "S.117", sum1(1, 0, {{-1, 1, 2, 0}}, {{2, 2, 0}}),
        F(M({Jn(2), Jam(3, 14), Jam(8, 28)}), M({Jn(1), Jn(4), Jn(28)})));
    add("S.118", "S.118", sum1(1, 2, {{-1, 1, 2, 0}}, {{2, 2, 0}}),
        F(M({Jn(2), Jam(1, 14), Jam(12, 28)}), M({Jn(1), Jn(4), Jn(28)})));
    add("S.119", "S.119", sum1(1, 2, {{-1, 1, 2, 1}}, {{2, 2, 1}}),
        F(M({Jn(2), Jam(5, 14), Jam(4, 28)}), M({Jn(1), Jn(4), Jn(28)})));
}

void add_finite_lemmas(Builder& b) {
    const char* fs_labels[12] = {"finite-sum-1", "finite-sum-2", "finite-sum-3",
                                 "finite-sum-4", "finite-sum-5", "finite-sum-6",
                                 "finite-sum-6-add", "finite-sum-7", "finite-sum-8",
                                 "finite-sum-9", "finite-sum-10", "finite-sum-11"};
    for (int K = 1; K <= 12; ++K) {
        auto [l, r] = finite_sum_pair(K, 2);
        b.add("finite-sum-" + std::to_string(K) + "(i)", fs_labels[K - 1],
              Status::KnownClassical, 1000, l, r, "finite-sum",
              "i >= 0; generator checks i = 0..15");
    }
    const char* sh_labels[7] = {"finite-1", "finite-2", "finite-add", "finite-3",
                                "finite-4", "finite-5", "finite-6"};
    for (int K = 1; K <= 7; ++K) {
        auto [l, r] = shift_pair(K, 2);
        b.add("shift-" + std::to_string(K) + "(i)", sh_labels[K - 1],
              Status::KnownClassical, 40, l, r, "shift",
              "i >= 0; generator checks i = 0..15");
    }
}

void add_dZ(Builder& b) {
    auto Zk = [](int k) { return Fam(Family::Z, k); };
    b.add("dZ1", "dZ1", Status::Theorem, 120, Zk(1),
          F(e_mul(Jn(6), Jn(12)), M({Jn(3), Jn(8), pairp(1, 12)})), "dZ");
    b.add("dZ2", "dZ2", Status::Theorem, 120, Zk(2),
          F(Jn(12), M({Jn(8), pairp(1, 12), pairp(5, 12)})), "dZ");
    b.add("dZ3", "dZ3", Status::Theorem, 120, Zk(3),
          F(e_mul(Pw(Jn(6), 5), Jn(8)), M({Pw(Jn(3), 2), Pw(Jn(4), 2), Pw(Jn(12), 2)})),
          "dZ");
    b.add("dZ4", "dZ4", Status::Theorem, 120, Zk(4),
          F(e_mul(Jn(6), Jn(12)), M({Jn(3), Jn(8), pairp(5, 12)})), "dZ");
    b.add("dZ5", "dZ5", Status::Conjecture, 300, Zk(5),
          F(M({Jn(6), Jn(8), pairp(2, 12)}),
            M({Pw(Jn(4), 2), pairp(1, 12), pairp(5, 12)})),
          "dZ")
        .note = "open case; checked to the default order only";
}

void add_G_forms(Builder& b) {
    E g1a = F(Pw(Jn(4), 2), e_mul(Jn(2), Jn(8)));
    E g1b = F(M({C(2), Q(1), Pw(Jn(2), 2), Pw(Jn(8), 3), Pw(Jn(12), 2)}),
              e_mul(Pw(Jn(4), 6), Jn(6)));
    E gt1 = F(M({Pw(Jn(2), 3), Pw(Jn(8), 2), Pw(Jn(12), 2)}),
              e_mul(Pw(Jn(4), 6), Jn(24)));
    b.add("G1-prod", "eq-G1", Status::Theorem, 120, Fam(Family::G, 1), e_add(g1a, g1b),
          "G");
    b.add("G2-prod", "eq-G2", Status::Theorem, 120, Fam(Family::G, 2),
          F(M({C(2), Jn(2), Pw(Jn(6), 2), Pw(Jn(8), 3)}), e_mul(Pw(Jn(4), 5), Jn(12))),
          "G");
    b.add("G3-prod", "eq-G3", Status::Theorem, 120, Fam(Family::G, 3),
          F(e_mul(Pw(Jn(4), 3), Pw(Jn(12), 2)), M({Jn(2), Jn(6), Pw(Jn(8), 3)})), "G");
    b.add("G4-prod", "eq-G4", Status::Theorem, 120, Fam(Family::G, 4), e_sub(g1a, g1b),
          "G");
    b.add("Gt1-prod", "eq-wG1", Status::Theorem, 120, Fam(Family::Gt, 1), gt1, "G");
    b.add("Gt2-prod", "eq-wG2", Status::Theorem, 120, Fam(Family::Gt, 2),
          F(M({C(-2), Q(1), Pw(Jn(2), 3), Jn(8), Pw(Jn(24), 2)}),
            e_mul(Pw(Jn(4), 5), Jn(12))),
          "G");
    b.add("Gt3-prod", "eq-wG3", Status::Theorem, 120, Fam(Family::Gt, 3),
          F(M({Jn(2), Jn(6), Jn(24)}), e_mul(Pw(Jn(8), 2), Jn(12))), "G");
    b.add("Gt4-prod", "eq-wG4", Status::Theorem, 120, Fam(Family::Gt, 4), gt1, "G");
}

void add_Z_recombinations(Builder& b) {
    for (int k = 1; k <= 4; ++k)
        for (int p = 0; p <= 1; ++p) {
            E comb = p == 0 ? e_add(Fam(Family::G, k), Fam(Family::Gt, k))
                            : e_sub(Fam(Family::G, k), Fam(Family::Gt, k));
            b.add("L-rec-" + std::to_string(k) + "-" + std::to_string(p), "L-defn",
                  Status::KnownClassical, 80, Fam(Family::L, k, p),
                  e_mul(C(h), std::move(comb)), "Z");
        }
    for (int k = 1; k <= 3; ++k) {
        E plus = e_add(Fam(Family::G, k), Fam(Family::Gt, k));
        E minus = e_sub(Fam(Family::G, k), Fam(Family::Gt, k));
        b.add("Z-rec-" + std::to_string(k), "Z123-split", Status::Theorem, 80,
              Fam(Family::Z, k),
              F(e_add(e_mul(plus, e_theta0()), e_mul(minus, e_theta1())),
                e_mul(C(2), Jn(4))),
              "Z");
    }
    {
        E plus = e_add(Fam(Family::G, 4), Fam(Family::Gt, 4));
        E minus = e_sub(Fam(Family::G, 4), Fam(Family::Gt, 4));
        b.add("Z-rec-4", "Z456-split", Status::Theorem, 80, Fam(Family::Z, 4),
              F(e_add(e_mul(plus, e_theta1()), e_mul(minus, e_theta0())),
                M({C(2), Q(1), Jn(4)})),
              "Z");
    }
    for (int k = 1; k <= 5; ++k)
        b.add("Z-split-" + std::to_string(k), "Zk01-exp", Status::KnownClassical, 80,
              e_add(Fam(Family::Zsplit, k, 0), Fam(Family::Zsplit, k, 1)),
              Fam(Family::Z, k), "Z");
}

const std::vector<Rational> kRank4E[5] = {
    {0, 0, 0, 0}, {0, -1, 1, 0}, {0, 0, 0, h}, {1, -1, 1, 0}, {1, -1, 1, -h}};

void add_rank_reduction(Builder& b) {
    const char* labels[5] = {"chi4-1", "chi4-2", "chi4-3", "chi4-5", "chi4-4"};
    for (int k = 1; k <= 5; ++k) {
        RankReductionInstance inst{true, 2, kRank4E[k - 1], 1, 0};
        b.add("chi4-reduce-" + std::to_string(k), labels[k - 1], Status::Theorem, 30,
              X(4, kRank4E[k - 1], 1), e_reduce_even(inst), "reduction");
    }
    b.add("chi6-reduce", "eq-reduce-even", Status::Theorem, 25,
          X(6, std::vector<Rational>(6, 0), 1),
          e_reduce_even({true, 3, std::vector<Rational>(6, 0), 1, 0}), "reduction");
    const std::pair<long, Rational> rank3[6] = {{-1, -h}, {-2, -h}, {0, 0},
                                                {-1, 0},  {1, h},   {0, h}};
    for (const auto& [a, c] : rank3) {
        std::vector<Rational> e{Rational(a), Rational(-a), c};
        std::string tag = std::to_string(a) + "," + to_string(c);
        b.add("chi3-reduce-(" + tag + ")", "eq-reduce-odd", Status::Theorem, 30,
              X(3, e, 1), e_reduce_odd({false, 1, e, 1, 0}), "reduction");
    }
    b.add("chi5-reduce", "eq-reduce-odd", Status::Theorem, 25,
          X(5, std::vector<Rational>(5, 0), 1),
          e_reduce_odd({false, 2, std::vector<Rational>(5, 0), 1, 0}), "reduction");
}

void add_rank4(Builder& b) {
    const char* theta_labels[5] = {"chi4-1-final", "chi4-2-final", "chi4-3-final",
                                   "chi4-4-final", "chi4-5-final"};
    for (int k = 1; k <= 5; ++k)
        b.add("chi4-theta-" + std::to_string(k), theta_labels[k - 1], Status::Theorem,
              120, X(4, kRank4E[k - 1], 4), e_chi4_theta(k), "rank4");

    auto pref = [](const Rational& off) { return F(Pinf(-1, off, 2), Jn(2)); };
    b.add("eq-4-1", "eq-4-1", Status::Theorem, 120, X(4, kRank4E[0], 2),
          e_mul(pref(1),
                e_add(F(M({Pw(Jn(4), 5), Jn(12), Jam(4, 24), Jam(10, 24)}),
                        M({Jn(1), Pw(Jn(2), 2), Pw(Jn(8), 2), Pw(Jn(24), 2)})),
                      F(M({C(2), Q(1), Pw(Jn(8), 2), Jn(12), Jam(5, 12),
                           Pw(Jam(2, 24), 2), Jam(10, 24)}),
                        M({Jn(1), Jn(4), Jam(1, 12), Jam(4, 24), Pw(Jn(24), 2)})))),
          "rank4");
    b.add("eq-4-2", "eq-4-2", Status::Theorem, 120, X(4, kRank4E[1], 2),
          e_mul(pref(1),
                e_add(F(e_mul(Pw(Jn(4), 5), Pw(Jn(24), 3)),
                        M({Jn(1), Jn(2), Pw(Jn(8), 3), Jam(2, 24), Jam(10, 24)})),
                      F(M({C(2), Jn(2), Jn(8), Pw(Jn(24), 3)}),
                        M({Jn(1), Jn(4), Pw(Jam(4, 24), 2)})))),
          "rank4");
    b.add("eq-4-3", "eq-4-3", Status::Theorem, 120, X(4, kRank4E[2], 2),
          e_mul(pref(2),
                e_add(F(e_mul(Pw(Jn(4), 5), Pw(Jn(12), 6)),
                        M({Pw(Jn(2), 3), Pw(Jn(6), 3), Pw(Jn(8), 2), Jam(2, 24),
                           Jam(10, 24)})),
                      F(M({C(4), Q(2), Pw(Jn(8), 2), Pw(Jn(24), 4)}),
                        M({Jn(2), Jn(4), Jn(6), Jam(2, 24), Jam(10, 24)})))),
          "rank4");
    b.add("eq-4-4", "eq-4-4", Status::Theorem, 120, X(4, kRank4E[3], 2),
          e_mul(pref(1),
                e_add(F(M({Q(1), Pw(Jn(4), 5), Pw(Jn(24), 3)}),
                        M({Jn(1), Jn(2), Pw(Jn(8), 3), Jam(6, 24), Jam(10, 24)})),
                      F(M({C(2), Pw(Jn(8), 3), Pw(Jn(12), 3), Pw(Jn(24), 2),
                           Jam(10, 24)}),
                        M({Jn(3), Pw(Jn(4), 3), Pw(Jam(5, 24), 2),
                           Pw(Jam(7, 24), 2)})))),
          "rank4");
    b.add("eq-4-5", "eq-4-5", Status::Theorem, 120, X(4, kRank4E[4], 2),
          e_mul(pref(0),
                e_add(F(M({Pw(Jn(4), 5), Pw(Jn(12), 2), Pw(Jn(24), 7)}),
                        M({Pw(Jn(2), 2), Pw(Jn(6), 2), Pw(Jn(8), 3), Pw(Jam(2, 24), 3),
                           Pw(Jam(10, 24), 3)})),
                      F(M({C(2), Pw(Jn(8), 3), Pw(Jn(12), 2)}),
                        M({Pw(Jn(2), 2), Jn(4), Jn(24)})))),
          "rank4")
        .note = "right side derived from the open dZ5 expansion; both sides are"
                " computed and compared directly here";
}

void add_H(Builder& b) {
    auto addp = [&](int k, int p, const char* label, E rhs) {
        b.add("H-" + std::to_string(k) + "-" + std::to_string(p) + "-prod", label,
              Status::Theorem, 120, Fam(Family::H, k, p), std::move(rhs), "H");
    };
    addp(1, 0, "H10-product",
         F(M({Pw(Pinf(-1, 2, 4), 2), Jam(6, 28), pairp(16, 56)}), Jn(4)));
    addp(1, 1, "H11-product",
         F(M({C(2), Q(1), Pw(Pinf(-1, 4, 4), 2), Jam(8, 28), pairp(12, 56)}), Jn(4)));
    addp(2, 0, "H20-product",
         F(M({Pw(Pinf(-1, 2, 4), 2), Jam(2, 28), pairp(24, 56)}), Jn(4)));
    addp(2, 1, "H21-product",
         F(M({C(2), Q(3), Pw(Pinf(-1, 4, 4), 2), Jam(12, 28), pairp(4, 56)}), Jn(4)));
    addp(3, 0, "H30-product",
         F(M({C(2), Pw(Pinf(-1, 4, 4), 2), Jam(4, 28), pairp(20, 56)}), Jn(4)));
    addp(3, 1, "H31-product",
         F(M({Q(1), Pw(Pinf(-1, 2, 4), 2), Jam(10, 28), pairp(8, 56)}), Jn(4)));

    b.add("Ht-1-0-prod", "wH10-product", Status::Theorem, 120, Fam(Family::Ht, 1, 0),
          F(M({Pw(Pinf(1, 2, 4), 2), Pinf(-1, 6, 28), Pinf(-1, 22, 28), Jn(28),
               pairp(16, 56)}),
            Jn(4)),
          "H");
    b.add("Ht-2-0-prod", "wH20-product", Status::Theorem, 120, Fam(Family::Ht, 2, 0),
          F(M({Pw(Pinf(1, 2, 4), 2), Pinf(-1, 2, 28), Pinf(-1, 26, 28), Jn(28),
               pairp(24, 56)}),
            Jn(4)),
          "H");
    b.add("Ht-3-1-prod", "wH31-product", Status::Theorem, 120, Fam(Family::Ht, 3, 1),
          F(M({C(-1), Q(1), Pw(Pinf(1, 2, 4), 2), Pinf(-1, 10, 28), Pinf(-1, 18, 28),
               Jn(28), pairp(8, 56)}),
            Jn(4)),
          "H");

    auto addm = [&](int k, int p, const char* label, const Rational& pref_off, E ss) {
        b.add("H-" + std::to_string(k) + "-" + std::to_string(p) + "-mid", label,
              Status::Theorem, 120, Fam(Family::H, k, p),
              e_mul(Pinf(-1, pref_off, 4), std::move(ss)), "H");
    };
    addm(1, 0, "H10-mid", 2, sum1(2, 0, {{-1, 2, 4, 0}}, {{4, 2, 0}}));
    addm(1, 1, "H11-mid", 0, sum1(2, 2, {{-1, 4, 4, 0}}, {{4, 2, 1}}, 1));
    addm(2, 0, "H20-mid", 2, sum1(2, 4, {{-1, 2, 4, 0}}, {{4, 2, 0}}));
    addm(2, 1, "H21-mid", 0, sum1(2, 6, {{-1, 4, 4, 0}}, {{4, 2, 1}}, 3));
    addm(3, 0, "H30-mid", 0, sum1(2, 2, {{-1, 4, 4, 0}}, {{4, 2, 0}}));
    addm(3, 1, "H31-mid", 2, sum1(2, 4, {{-1, 2, 4, 1}}, {{4, 2, 1}}, 1));
}

E chi5(const Rational& a, const Rational& bb, const Rational& c) {
    return X(5, {a, -a, bb, -bb, c}, 4);
}

void add_rank5(Builder& b) {
    const Rational abc[6][3] = {{0, 0, 0},  {1, 1, h}, {-1, -1, 0},
                                {0, 0, h},  {0, -1, 0}, {1, 0, h}};
    const char* proof_labels[6] = {"proof-5-1", "proof-5-2", "proof-5-4",
                                   "proof-5-5", "proof-5-7", "proof-5-8"};
    for (int k = 1; k <= 6; ++k)
        b.add("chi5-theta-" + std::to_string(k), proof_labels[k - 1], Status::Theorem,
              80, chi5(abc[k - 1][0], abc[k - 1][1], abc[k - 1][2]), e_chi5_theta(k),
              "rank5");

    b.add("eq-rank5-1", "eq-rank5-1", Status::Theorem, 100, chi5(0, 0, 0),
          e_add(e_add(F(M({C(4), Q(2), Pw(Jn(8), 6), Jam(8, 28), Jam(12, 56)}),
                        M({Jn(2), Pw(Jn(4), 5), Jn(8), Jn(56)})),
                      F(M({C(-2), Q(1), Jn(4), Jn(8), Jam(6, 28), Jam(16, 56)}),
                        e_mul(Pw(Jn(2), 3), Jn(56)))),
                e_add(F(M({C(h), Pw(Jn(2), 7), Jam(6, 28), Jam(16, 56)}),
                        M({Pw(Jn(1), 4), Jn(4), Pw(Jn(8), 3), Jn(56)})),
                      F(M({C(h), Pw(Jn(2), 5), Pw(Jn(28), 2), Jam(12, 56),
                           Jam(16, 56)}),
                        M({Pw(Jn(4), 5), Jn(8), Pw(Jn(56), 2), Jam(6, 28)})))),
          "rank5");
    b.add("eq-rank5-2", "eq-rank5-2", Status::Theorem, 100, chi5(1, 1, h),
          e_add(e_add(F(M({C(4), Pw(Jn(8), 7), Jam(8, 28), Jam(12, 56)}),
                        e_mul(Pw(Jn(4), 8), Jn(56))),
                      F(M({C(-2), Q(-1), Pw(Jn(8), 3), Jam(6, 28), Jam(16, 56)}),
                        M({Pw(Jn(2), 2), Pw(Jn(4), 2), Jn(56)}))),
                e_add(F(M({C(h), Q(-2), Pw(Jn(2), 8), Jam(6, 28), Jam(16, 56)}),
                        M({Pw(Jn(1), 4), Pw(Jn(4), 4), Jn(8), Jn(56)})),
                      F(M({C(-h), Q(-2), Pw(Jn(2), 6), Jn(8), Pw(Jn(28), 2),
                           Jam(12, 56), Jam(16, 56)}),
                        M({Pw(Jn(4), 8), Pw(Jn(56), 2), Jam(6, 28)})))),
          "rank5");
    b.add("eq-rank5-4", "eq-rank5-4", Status::Theorem, 100, chi5(-1, -1, 0),
          e_add(e_add(F(M({C(4), Q(2), Pw(Jn(8), 5), Jam(12, 28), Jam(4, 56)}),
                        M({Jn(2), Pw(Jn(4), 5), Jn(56)})),
                      F(M({C(-2), Q(-1), Jn(4), Jn(8), Jam(2, 28), Jam(24, 56)}),
                        e_mul(Pw(Jn(2), 3), Jn(56)))),
                e_add(F(M({C(h), Q(-2), Pw(Jn(2), 7), Jam(2, 28), Jam(24, 56)}),
                        M({Pw(Jn(1), 4), Jn(4), Pw(Jn(8), 3), Jn(56)})),
                      F(M({C(-h), Q(-2), Pw(Jn(2), 5), Pw(Jn(28), 2), Jam(4, 56),
                           Jam(24, 56)}),
                        M({Pw(Jn(4), 5), Jn(8), Pw(Jn(56), 2), Jam(2, 28)})))),
          "rank5");
    b.add("eq-rank5-5", "eq-rank5-5", Status::Theorem, 100, chi5(0, 0, h),
          e_add(e_add(F(M({C(4), Q(4), Pw(Jn(8), 7), Jam(12, 28), Jam(4, 56)}),
                        e_mul(Pw(Jn(4), 8), Jn(56))),
                      F(M({C(-2), Q(1), Pw(Jn(8), 3), Jam(2, 28), Jam(24, 56)}),
                        M({Pw(Jn(2), 2), Pw(Jn(4), 2), Jn(56)}))),
                e_add(F(M({C(h), Pw(Jn(2), 8), Jam(2, 28), Jam(24, 56)}),
                        M({Pw(Jn(1), 4), Pw(Jn(4), 4), Jn(8), Jn(56)})),
                      F(M({C(h), Pw(Jn(2), 6), Jn(8), Pw(Jn(28), 2), Jam(4, 56),
                           Jam(24, 56)}),
                        M({Pw(Jn(4), 8), Pw(Jn(56), 2), Jam(2, 28)})))),
          "rank5");
    b.add("eq-rank5-7", "eq-rank5-7", Status::Theorem, 100, chi5(0, -1, 0),
          e_add(e_add(F(M({C(4), Pw(Jn(8), 5), Jam(4, 28), Jam(20, 56)}),
                        M({Jn(2), Pw(Jn(4), 5), Jn(56)})),
                      F(M({C(-2), Q(1), Jn(4), Jn(8), Jam(10, 28), Jam(8, 56)}),
                        e_mul(Pw(Jn(2), 3), Jn(56)))),
                e_add(F(M({C(h), Pw(Jn(2), 7), Jam(10, 28), Jam(8, 56)}),
                        M({Pw(Jn(1), 4), Jn(4), Pw(Jn(8), 3), Jn(56)})),
                      F(M({C(-h), Pw(Jn(2), 5), Pw(Jn(28), 2), Jam(8, 56),
                           Jam(20, 56)}),
                        M({Pw(Jn(4), 5), Jn(8), Pw(Jn(56), 2), Jam(10, 28)})))),
          "rank5");
    b.add("eq-rank5-8", "eq-rank5-8", Status::Theorem, 100, chi5(1, 0, h),
          e_add(e_add(F(M({C(4), Pw(Jn(8), 7), Jam(4, 28), Jam(20, 56)}),
                        e_mul(Pw(Jn(4), 8), Jn(56))),
                      F(M({C(-2), Q(1), Pw(Jn(8), 3), Jam(10, 28), Jam(8, 56)}),
                        M({Pw(Jn(2), 2), Pw(Jn(4), 2), Jn(56)}))),
                e_add(F(M({C(h), Pw(Jn(2), 8), Jam(10, 28), Jam(8, 56)}),
                        M({Pw(Jn(1), 4), Pw(Jn(4), 4), Jn(8), Jn(56)})),
                      F(M({C(h), Pw(Jn(2), 6), Jn(8), Pw(Jn(28), 2), Jam(8, 56),
                           Jam(20, 56)}),
                        M({Pw(Jn(4), 8), Pw(Jn(56), 2), Jam(10, 28)})))),
          "rank5");

    // S(a1,b1,c1) = q^{a2^2+b2^2-a1^2-b1^2}
    //               * (-q^{2+4c1};q^4)/(-q^{2+4c2};q^4) * S(a2,b2,c2)
    auto scaling = [&](const char* id, Rational a1, Rational b1, Rational c1,
                       Rational a2, Rational b2, Rational c2) {
        E rhs = M({Q(a2 * a2 + b2 * b2 - a1 * a1 - b1 * b1),
                   F(Pinf(-1, 2 + 4 * c1, 4), Pinf(-1, 2 + 4 * c2, 4)),
                   chi5(a2, b2, c2)});
        b.add(id, id, Status::Theorem, 100, chi5(a1, b1, c1), std::move(rhs), "rank5");
    };
    scaling("eq-rank5-3", -1, -1, -h, 1, 1, h);
    scaling("eq-rank5-6", -2, -2, -h, 0, 0, h);
    scaling("eq-rank5-9", -1, -2, -h, 1, 0, h);
}

void add_rank3(Builder& b) {
    const std::pair<long, Rational> pairs[6] = {{-1, -h}, {-2, -h}, {0, 0},
                                                {-1, 0},  {1, h},   {0, h}};
    for (const auto& [a, c] : pairs)
        b.add("chi3-theta-(" + std::to_string(a) + "," + to_string(c) + ")",
              "eq-rank3-mid", Status::Theorem, 60,
              X(3, {Rational(a), Rational(-a), c}, 1), e_chi3_theta(a, c), "rank3");

    b.add("S.79", "S79", Status::KnownClassical, 200, sum1(1, 0, {}, {{1, 2, 0}}),
          F(e_mul(Jam(2, 10), pairp(6, 20)), Jn(1)), "rank3");
    b.add("S.94", "S94", Status::KnownClassical, 200, sum1(1, 1, {}, {{1, 2, 1}}),
          F(e_mul(Jam(3, 10), pairp(4, 20)), Jn(1)), "rank3");
    b.add("S.99", "S99", Status::KnownClassical, 200, sum1(1, 1, {}, {{1, 2, 0}}),
          F(e_mul(Jam(1, 10), pairp(8, 20)), Jn(1)), "rank3");
    b.add("Rogers-1", "Rogers-1", Status::KnownClassical, 200,
          sum1(1, 2, {}, {{1, 2, 1}}), F(e_mul(Jam(4, 10), pairp(2, 20)), Jn(1)),
          "rank3");
}

void add_new_repn(Builder& b) {
    for (long r = 2; r <= 5; ++r)
        b.add("new-repn-" + std::to_string(r), "eq-thm-new-repn", Status::Theorem, 30,
              X(r, std::vector<Rational>(r, 0), 1), e_new_repn(r), "new-repn", "r >= 1");
}

void add_quadratic_forms(Builder& b) {
    // the tadpole form written out as 1/2 n1^2 + 1/2 sum (n_i - n_{i+1})^2
    auto explicit_tadpole = [](long r) {
        NahmSpec n;
        n.A.assign(r, Vec(r, 0));
        n.B.assign(r, 0);
        n.A[0][0] = 1;
        for (long i = 0; i + 1 < r; ++i) {
            n.A[i][i] += 1;
            n.A[i + 1][i + 1] += 1;
            n.A[i][i + 1] -= 1;
            n.A[i + 1][i] -= 1;
        }
        return e_nahm(n);
    };
    b.add("X-square", "X-square", Status::KnownClassical, 40,
          X(5, std::vector<Rational>(5, 0), 1), explicit_tadpole(5), "engine-forms");
    b.add("X-rec", "X-rec", Status::KnownClassical, 40,
          X(4, std::vector<Rational>(4, 0), 1), explicit_tadpole(4), "engine-forms");
}

void add_tables(Builder& b) {
    struct Row { const char* abc; const char* cc; };
    const Row t1[5] = {{"(0,0,0)", "-1/4"},
                       {"(0,-2,0)", "5/12"},
                       {"(0,0,1)", "0"},
                       {"(2,-2,0)", "3/4"},
                       {"(2,-2,-1)", "2/3"}};
    for (const Row& r : t1) {
        auto& rec = b.add(std::string("Table-1-row-") + r.abc, "Table 1",
                          Status::Theorem, 1, C(1), C(1), "table");
        rec.metadata_only = true;
        rec.note = std::string("modular point (a,b,c) = ") + r.abc +
                   " with prefactor exponent C = " + r.cc +
                   "; modularity itself is outside the verification scope";
    }
    const Row t2[9] = {{"(0,0,0)", "-55/84"},   {"(1,1,1/2)", "67/42"},
                       {"(-1,-1,0)", "137/84"}, {"(0,0,1/2)", "-5/42"},
                       {"(0,-1,0)", "65/84"},   {"(1,0,1/2)", "43/42"},
                       {"(-1,-1,-2)", "67/42"}, {"(-2,-2,-1/2)", "331/42"},
                       {"(-1,-2,-1/2)", "211/42"}};
    for (const Row& r : t2) {
        bool conjectural = std::string(r.abc) == "(-1,-1,-2)";
        auto& rec = b.add(std::string("Table-2-row-") + r.abc, "Table 2",
                          conjectural ? Status::Conjecture : Status::Theorem, 1, C(1),
                          C(1), "table");
        rec.metadata_only = true;
        rec.note = std::string("modular point (a,b,c) = ") + r.abc +
                   " with prefactor exponent C = " + r.cc +
                   (conjectural ? "; conjectural case" : "") +
                   "; modularity itself is outside the verification scope";
    }
}

struct ParsedInstance {
    int kind = 0;  // 1 = finite-sum, 2 = shift
    int K = 0;
    bool generic = false;  // "(i)" rather than a concrete index
    long i = -1;
};

std::optional<ParsedInstance> parse_instance_id(const std::string& id) {
    auto open = id.rfind('(');
    if (open == std::string::npos || id.back() != ')') return {};
    std::string prefix = id.substr(0, open);
    std::string arg = id.substr(open + 1, id.size() - open - 2);
    ParsedInstance out;
    try {
        if (prefix.rfind("finite-sum-", 0) == 0) {
            out.kind = 1;
            out.K = std::stoi(prefix.substr(11));
        } else if (prefix.rfind("shift-", 0) == 0) {
            out.kind = 2;
            out.K = std::stoi(prefix.substr(6));
        } else {
            return {};
        }
        if (arg == "i") {
            out.generic = true;
        } else {
            size_t used = 0;
            out.i = std::stol(arg, &used);
            if (used != arg.size() || out.i < 0) return {};
        }
    } catch (const std::exception&) {
        return {};
    }
    if (out.kind == 1 && (out.K < 1 || out.K > 12)) return {};
    if (out.kind == 2 && (out.K < 1 || out.K > 7)) return {};
    return out;
}

std::pair<E, E> instance_pair(const ParsedInstance& p, long i) {
    return p.kind == 1 ? finite_sum_pair(p.K, i) : shift_pair(p.K, i);
}

}  // namespace

Catalog Catalog::builtin() {
    Builder b;
    add_classical(b);
    add_andrews_gordon(b);
    add_slater(b);
    add_finite_lemmas(b);
    add_dZ(b);
    add_G_forms(b);
    add_Z_recombinations(b);
    add_rank_reduction(b);
    add_rank4(b);
    add_H(b);
    add_rank5(b);
    add_rank3(b);
    add_new_repn(b);
    add_quadratic_forms(b);
    add_tables(b);
    Catalog cat;
    cat.records_ = std::move(b.recs);
    std::sort(cat.records_.begin(), cat.records_.end(),
              [](const IdentityRecord& x, const IdentityRecord& y) { return x.id < y.id; });
    for (size_t i = 1; i < cat.records_.size(); ++i)
        if (cat.records_[i].id == cat.records_[i - 1].id)
            throw std::logic_error("duplicate catalog id: " + cat.records_[i].id);
    return cat;
}

void Catalog::add_overlay_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("overlay is not valid JSON: ") +
                                    e.what());
    }
    if (!doc.is_object() || !doc.contains("identities") || !doc["identities"].is_array())
        throw std::invalid_argument("overlay must be {\"identities\": [...]}");
    std::vector<IdentityRecord> added;
    for (const auto& o : doc["identities"]) {
        IdentityRecord r;
        try {
            r.id = o.at("id").get<std::string>();
            r.paper_label = o.at("paper_label").get<std::string>();
            r.status = status_from_string(o.at("status").get<std::string>());
            const auto& ord = o.at("default_order");
            r.default_order = ord.is_string()
                                  ? parse_rational(ord.get<std::string>())
                                  : Rational((long)ord.get<long long>());
            r.lhs = expr_from_json(o.at("lhs").dump());
            r.rhs = expr_from_json(o.at("rhs").dump());
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument(std::string("malformed overlay entry: ") +
                                        e.what());
        }
        if (!(r.default_order > 0))
            throw std::invalid_argument("overlay entry " + r.id +
                                        ": default_order must be positive");
        r.family = "overlay";
        if (find(r.id))
            throw std::invalid_argument("overlay entry would shadow existing id: " +
                                        r.id);
        for (const auto& a : added)
            if (a.id == r.id)
                throw std::invalid_argument("duplicate id in overlay: " + r.id);
        added.push_back(std::move(r));
    }
    for (auto& r : added) records_.push_back(std::move(r));
    std::sort(records_.begin(), records_.end(),
              [](const IdentityRecord& x, const IdentityRecord& y) { return x.id < y.id; });
}

const IdentityRecord* Catalog::find(const std::string& id) const {
    auto it = std::lower_bound(
        records_.begin(), records_.end(), id,
        [](const IdentityRecord& r, const std::string& key) { return r.id < key; });
    return (it != records_.end() && it->id == id) ? &*it : nullptr;
}

std::vector<const IdentityRecord*> Catalog::list(const std::string& family,
                                                 std::optional<Status> status) const {
    std::vector<const IdentityRecord*> out;
    for (const auto& r : records_) {
        if (!family.empty() && r.family != family) continue;
        if (status && r.status != *status) continue;
        out.push_back(&r);
    }
    return out;
}

VerificationReport Catalog::verify(const std::string& id,
                                   std::optional<Rational> order) const {
    const IdentityRecord* rec = find(id);
    std::optional<ParsedInstance> inst = parse_instance_id(id);
    if (!rec && !(inst && !inst->generic))
        throw std::invalid_argument("unknown identity id: " + id);
    Rational ord;
    if (order) {
        ord = *order;
    } else if (rec) {
        ord = rec->default_order;
    } else {
        // a concrete instance of a generator inherits the generator's default
        std::string gen = id.substr(0, id.rfind('(')) + "(i)";
        const IdentityRecord* grec = find(gen);
        ord = grec ? grec->default_order : Rational(50);
    }
    if (!(ord > 0)) throw std::invalid_argument("verification order must be positive");

    VerificationReport rep;
    rep.id = id;
    rep.order_checked = ord;
    auto t0 = std::chrono::steady_clock::now();

    auto check_pair = [&](const ExprPtr& l, const ExprPtr& r) {
        if (rep.outcome == Outcome::Mismatch) return;
        QSeries L = eval(l, ord);
        QSeries R = eval(r, ord);
        Exponent reached = qmin(ord, qmin(L.accuracy(), R.accuracy()));
        auto m = QSeries::first_mismatch(L, R, reached);
        if (m) {
            rep.outcome = Outcome::Mismatch;
            rep.mismatch = m;
            rep.order_checked = qmin(rep.order_checked, reached);
        } else if (reached < ord) {
            if (rep.outcome == Outcome::Match) rep.outcome = Outcome::AccuracyInsufficient;
            rep.order_checked = qmin(rep.order_checked, reached);
        }
    };

    if (inst && inst->generic) {
        for (long i = 0; i <= 15 && rep.outcome != Outcome::Mismatch; ++i) {
            auto [l, r] = instance_pair(*inst, i);
            check_pair(l, r);
        }
    } else if (inst && !rec) {
        auto [l, r] = instance_pair(*inst, inst->i);
        check_pair(l, r);
    } else {
        check_pair(rec->lhs, rec->rhs);
    }

    rep.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace nahmforge
