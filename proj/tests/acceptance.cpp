/* End-to-end gate: one pass/fail line per criterion, nonzero exit on any
 * failure.  Identity checks go through the catalog; the property suite at the
 * end exercises the engine primitives directly. */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "nahmforge/catalog.hpp"

using namespace nahmforge;

namespace {

int failures = 0;

struct IdOrder {
    std::string id;
    std::optional<Rational> order;
};

bool verify_group(const Catalog& cat, const std::vector<IdOrder>& jobs,
                  std::string& detail) {
    std::atomic<size_t> next{0};
    std::atomic<bool> ok{true};
    std::mutex m;
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            VerificationReport rep;
            try {
                rep = cat.verify(jobs[i].id, jobs[i].order);
            } catch (const std::exception& e) {
                ok = false;
                std::lock_guard<std::mutex> lk(m);
                detail = jobs[i].id + " threw: " + e.what();
                continue;
            }
            if (rep.outcome != Outcome::Match) {
                ok = false;
                std::lock_guard<std::mutex> lk(m);
                detail = rep.id + " -> " + to_string(rep.outcome);
                if (rep.mismatch)
                    detail += " at q^" + to_string(rep.mismatch->exponent) + ": " +
                              rep.mismatch->lhs.get_str() + " vs " +
                              rep.mismatch->rhs.get_str();
            }
        }
    };
    size_t n = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()),
                                jobs.size());
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return ok;
}

template <typename Fn>
void criterion(int num, const std::string& what, Fn&& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count();
    std::cout << "criterion " << num << ": " << (ok ? "pass" : "FAIL") << "  " << what
              << "  [" << s << "s]";
    if (!ok) {
        std::cout << "  (" << detail << ")";
        ++failures;
    }
    std::cout << std::endl;
}

std::vector<IdOrder> at_order(std::initializer_list<const char*> ids,
                              const Rational& order) {
    std::vector<IdOrder> out;
    for (const char* id : ids) out.push_back({id, order});
    return out;
}

std::mt19937 rng(321);

QSeries random_poly(const Exponent& acc) {
    std::uniform_int_distribution<int> nterms(0, 5), expo(0, 9), den(1, 2),
        num(-4, 4);
    QSeries f = QSeries::zero(acc);
    int k = nterms(rng);
    for (int i = 0; i < k; ++i)
        f.add_term_inplace(expo(rng), rat(num(rng), den(rng)));
    return f;
}

Mat random_spd(long r) {
    std::uniform_int_distribution<int> off(-2, 2), diag(1, 3);
    Mat L(r, Vec(r, 0));
    Vec d(r);
    for (long i = 0; i < r; ++i) {
        L[i][i] = 1;
        d[i] = diag(rng);
        for (long j = 0; j < i; ++j) L[i][j] = rat(off(rng), 2);
    }
    Mat A(r, Vec(r, 0));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            for (long k = 0; k < r; ++k) A[i][j] += L[i][k] * d[k] * L[j][k];
    return A;
}

using PointSet = std::vector<std::pair<std::vector<long>, Rational>>;

PointSet collect(bool pruned, const Mat& A, const Vec& B, const Rational& bound) {
    PointSet out;
    LatticeCallbacks cb;
    cb.on_point = [&](const std::vector<long>& n, const Rational& q) {
        out.emplace_back(n, q);
    };
    if (pruned)
        enumerate_lattice(A, B, 0, bound, true, cb);
    else
        enumerate_lattice_bruteforce(A, B, 0, bound, true, cb);
    std::sort(out.begin(), out.end());
    return out;
}

bool agree(const QSeries& f, const QSeries& g) {
    return !QSeries::first_mismatch(f, g, qmin(f.accuracy(), g.accuracy()))
                .has_value();
}

}  // namespace

int main() {
    const Catalog cat = Catalog::builtin();

    criterion(1, "classical gate at order 200", [&](std::string& d) {
        return verify_group(
            cat,
            at_order({"RR-a0", "RR-a1", "Rogers-a0", "Rogers-a1", "euler-prod-q",
                      "euler-prod-mq", "euler-prod-qh", "euler-prod-mqh",
                      "euler-inv-q", "euler-inv-mq", "euler-inv-qh", "euler-inv-mqh",
                      "jtp-z1", "jtp-zm1", "jtp-zqh", "jtp-zmqh", "jtp-zq", "jtp-zmq",
                      "phi-prod", "psi-prod", "theta0-prod", "theta1-prod"},
                     200),
            d);
    });

    criterion(2, "shift identities and finite sums, i = 0..15, exact",
              [&](std::string& d) {
                  std::vector<IdOrder> jobs;
                  for (int k = 1; k <= 7; ++k)
                      jobs.push_back({"shift-" + std::to_string(k) + "(i)", {}});
                  for (int k = 1; k <= 12; ++k)
                      jobs.push_back({"finite-sum-" + std::to_string(k) + "(i)", {}});
                  return verify_group(cat, jobs, d);
              });

    criterion(3, "single-sum block at order 200", [&](std::string& d) {
        return verify_group(cat,
                            at_order({"S.25", "R.4.2.11", "S.28", "S.29", "S.50",
                                      "S.80", "S.81", "S.82", "S.117", "S.118",
                                      "S.119", "S.79", "S.94", "S.99", "Rogers-1"},
                                     200),
                            d);
    });

    criterion(4, "eight triple-sum product forms at order 120", [&](std::string& d) {
        return verify_group(cat,
                            at_order({"G1-prod", "G2-prod", "G3-prod", "G4-prod",
                                      "Gt1-prod", "Gt2-prod", "Gt3-prod", "Gt4-prod"},
                                     120),
                            d);
    });

    criterion(5,
              "dZ1-dZ4 at order 120; dZ5 conjecture-verified-to-order 300",
              [&](std::string& d) {
                  std::vector<IdOrder> jobs =
                      at_order({"dZ1", "dZ2", "dZ3", "dZ4"}, 120);
                  jobs.push_back({"dZ5", Rational(300)});
                  return verify_group(cat, jobs, d);
              });

    criterion(6, "rank-4 theta and product expansions at order 120",
              [&](std::string& d) {
                  return verify_group(
                      cat,
                      at_order({"chi4-theta-1", "chi4-theta-2", "chi4-theta-3",
                                "chi4-theta-4", "chi4-theta-5", "eq-4-1", "eq-4-2",
                                "eq-4-3", "eq-4-4", "eq-4-5"},
                               120),
                      d);
              });

    criterion(7, "double-sum products at order 120; nine rank-5 identities at 100",
              [&](std::string& d) {
                  std::vector<IdOrder> jobs = at_order(
                      {"H-1-0-prod", "H-1-1-prod", "H-2-0-prod", "H-2-1-prod",
                       "H-3-0-prod", "H-3-1-prod", "Ht-1-0-prod", "Ht-2-0-prod",
                       "Ht-3-1-prod", "H-1-0-mid", "H-1-1-mid", "H-2-0-mid",
                       "H-2-1-mid", "H-3-0-mid", "H-3-1-mid"},
                      120);
                  for (int k = 1; k <= 9; ++k)
                      jobs.push_back({"eq-rank5-" + std::to_string(k), Rational(100)});
                  return verify_group(cat, jobs, d);
              });

    criterion(8, "rank-reduction cross-checks at order >= 25", [&](std::string& d) {
        return verify_group(
            cat,
            {{"chi4-reduce-1", Rational(30)},
             {"chi4-reduce-2", Rational(30)},
             {"chi4-reduce-5", Rational(30)},
             {"chi6-reduce", Rational(25)},
             {"chi3-reduce-(-1,-1/2)", Rational(30)},
             {"chi3-reduce-(-2,-1/2)", Rational(30)},
             {"chi3-reduce-(0,0)", Rational(30)},
             {"chi3-reduce-(-1,0)", Rational(30)},
             {"chi3-reduce-(1,1/2)", Rational(30)},
             {"chi3-reduce-(0,1/2)", Rational(30)},
             {"chi5-reduce", Rational(25)}},
            d);
    });

    criterion(9, "product representations of chi_r, r = 2..5, at order 30",
              [&](std::string& d) {
                  return verify_group(cat,
                                      at_order({"new-repn-2", "new-repn-3",
                                                "new-repn-4", "new-repn-5"},
                                               30),
                                      d);
              });

    criterion(10, "six rank-3 theta evaluations at order 60", [&](std::string& d) {
        return verify_group(cat,
                            at_order({"chi3-theta-(-1,-1/2)", "chi3-theta-(-2,-1/2)",
                                      "chi3-theta-(0,0)", "chi3-theta-(-1,0)",
                                      "chi3-theta-(1,1/2)", "chi3-theta-(0,1/2)"},
                                     60),
                            d);
    });

    criterion(11, "engine property suite", [&](std::string& d) {
        // pruned lattice enumeration agrees with the certified brute force
        std::uniform_int_distribution<int> rr(1, 4), bi(-1, 2);
        for (int t = 0; t < 100; ++t) {
            long r = rr(rng);
            Mat A = random_spd(r);
            Vec B(r);
            for (auto& x : B) x = bi(rng);
            if (collect(true, A, B, 15) != collect(false, A, B, 15)) {
                d = "lattice enumeration disagreement, trial " + std::to_string(t);
                return false;
            }
        }
        // ring axioms on random truncated series
        const Exponent acc = 10;
        QSeries one = QSeries::monomial(1, 0, acc);
        for (int t = 0; t < 500; ++t) {
            QSeries f = random_poly(acc), g = random_poly(acc), h = random_poly(acc);
            bool ok = agree(f + g, g + f) && agree((f + g) + h, f + (g + h)) &&
                      agree(f * g, g * f) && agree((f * g) * h, f * (g * h)) &&
                      agree(f * (g + h), f * g + f * h) &&
                      agree(f + QSeries::zero(acc), f) && agree(f * one, f) &&
                      (f - f).is_zero();
            if (!ok) {
                d = "ring axiom failure, trial " + std::to_string(t);
                return false;
            }
        }
        // accuracy soundness: coarse evaluations are truncations of finer ones,
        // and inverses honour the documented accuracy loss
        for (const char* id : {"dZ2", "S.50", "eq-rank5-1", "H-3-1-mid"}) {
            const IdentityRecord* rec = cat.find(id);
            for (const ExprPtr& side : {rec->lhs, rec->rhs}) {
                QSeries lo = eval(side, 12), hi = eval(side, 31);
                if (lo.accuracy() < 12 || !agree(lo, hi.truncated(12))) {
                    d = std::string("accuracy drift on ") + id;
                    return false;
                }
            }
        }
        for (int t = 0; t < 50; ++t) {
            QSeries f = QSeries::monomial(1, 0, 20);  // unit constant term
            f.add_scaled_inplace(random_poly(19), 1, 1);
            QSeries inv = f.inverse();
            if (inv.accuracy() != 20 || !agree(f * inv, QSeries::monomial(1, 0, 20))) {
                d = "inverse contract failure, trial " + std::to_string(t);
                return false;
            }
        }
        return true;
    });

    std::cout << (failures ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS") << " ("
              << 11 - failures << "/11)" << std::endl;
    return failures;
}
