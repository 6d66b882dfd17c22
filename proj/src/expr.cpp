#include "nahmforge/expr.hpp"

#include <json.hpp>
#include <stdexcept>

namespace nahmforge {

using nlohmann::json;

QSeries nahm_spec_sum(const NahmSpec& spec, const Exponent& accuracy) {
    if (!spec.signs.empty() && spec.signs.size() != spec.A.size())
        throw std::domain_error("nahm_spec_sum: sign vector size mismatch");
    return nahm_sum(spec.A, spec.B, spec.C, spec.base, accuracy,
                    spec.signs.empty() ? nullptr : &spec.signs);
}

namespace {

/* Finite product truncated below acc as it is built; for offset > 0 the
 * dropped factors are 1 modulo q^acc, so nothing is lost.  Avoids
 * materializing the exact polynomial, whose degree grows quadratically. */
QSeries poch_truncated(int sign, const Exponent& offset, const Exponent& step,
                       long length, const Exponent& acc) {
    QSeries p = QSeries::monomial(1, 0, acc);
    Exponent e = offset;
    for (long k = 0; k < length; ++k, e += step) {
        if (!(e < acc)) break;
        QSeries f = QSeries::monomial(1, 0, acc);
        f.add_term_inplace(e, -sign);
        if (f.is_zero()) return QSeries::zero(acc);  // factor 1 - q^0
        p = p * f;
    }
    return p;
}

}  // namespace

QSeries single_sum(const SingleSumSpec& s, const Exponent& accuracy) {
    if (!(s.a2 > 0) && !(s.a2 == 0 && s.a1 > 0))
        throw std::domain_error("single_sum: exponent not coercive");
    QSeries out = QSeries::zero(accuracy);
    long nv = s.a2 > 0 ? to_long(ceil_q(-s.a1 / (2 * s.a2))) : 0;
    for (long n = 0;; ++n) {
        Exponent e = s.a2 * n * n + s.a1 * n + s.a0;
        if (!(e < accuracy)) {
            if (n >= nv) break;
            continue;
        }
        if (s.parity >= 0 && n % 2 != s.parity) continue;
        Exponent rel = accuracy - e;
        QSeries t = QSeries::monomial(1, 0, rel);
        for (const auto& f : s.num) {
            long len = n + f.shift;
            if (len < 0) throw std::domain_error("single_sum: negative factor length");
            QSeries p = f.offset > 0
                            ? poch_truncated(f.sign, f.offset, f.step, len, rel)
                            : pochhammer({f.sign, f.offset, f.step, len}, 1);
            if (p.is_zero()) {
                t = QSeries::zero(rel);
                break;
            }
            t = f.offset > 0
                    ? t * p
                    : t * p.with_accuracy(rel - qmin(*p.valuation(), Exponent(0)));
        }
        if (!t.is_zero())
            for (const auto& f : s.den) {
                long len = f.mult * n + f.shift;
                if (len < 0) throw std::domain_error("single_sum: negative factor length");
                t = t * poch_truncated(1, f.step, f.step, len, rel).inverse();
            }
        out.add_scaled_inplace(t, e, (s.sgn == -1 && n % 2 != 0) ? -1 : 1);
    }
    return out;
}

namespace {

ExprPtr mk(Expr::Node n) { return std::make_shared<Expr>(Expr{std::move(n)}); }

QSeries eval_once(const ExprPtr& e, const Exponent& w);

struct Evaluator {
    const Exponent& w;

    QSeries operator()(const Expr::Const& n) const {
        if (n.c == 0) return QSeries::zero(w);
        return QSeries::monomial(n.c, 0, w);
    }
    QSeries operator()(const Expr::QPow& n) const {
        return QSeries::monomial(1, n.e, qmax(w, n.e + 1));
    }
    QSeries operator()(const Expr::Poch& n) const {
        if (n.spec.length == kInfinity && !(n.spec.offset > 0))
            return pochhammer_any(n.spec.sign, n.spec.offset, n.spec.step, w);
        return pochhammer(n.spec, w);
    }
    QSeries operator()(const Expr::Jn& n) const { return J(n.m, w); }
    QSeries operator()(const Expr::J2n& n) const { return J2(n.a, n.m, w); }
    QSeries operator()(const Expr::ThetaN& n) const { return theta(n.spec, w); }
    QSeries operator()(const Expr::PhiN&) const { return phi(w); }
    QSeries operator()(const Expr::PsiN&) const { return psi(w); }
    QSeries operator()(const Expr::Theta0N&) const { return theta0(w); }
    QSeries operator()(const Expr::Theta1N&) const { return theta1(w); }
    QSeries operator()(const Expr::QBinom& n) const { return qbinom(n.n, n.m, w); }
    QSeries operator()(const Expr::Nahm& n) const { return nahm_spec_sum(n.spec, w); }
    QSeries operator()(const Expr::Chi& n) const { return chi(n.spec, w); }
    QSeries operator()(const Expr::FamilyN& n) const { return family_sum(n.idx, w); }
    QSeries operator()(const Expr::ReduceEven& n) const { return reduce_even_rhs(n.inst, w); }
    QSeries operator()(const Expr::ReduceOdd& n) const { return reduce_odd_rhs(n.inst, w); }
    QSeries operator()(const Expr::FiniteSum& n) const {
        QSeries f = n.lhs ? finite_sum_lhs(n.id, n.i) : finite_sum_rhs(n.id, n.i);
        return f.with_accuracy(qmax(f.accuracy(), w));  // exact polynomial
    }
    QSeries operator()(const Expr::Chi4Theta& n) const { return chi4_theta_rhs(n.case_id, w); }
    QSeries operator()(const Expr::Chi5Theta& n) const { return chi5_theta_rhs(n.case_id, w); }
    QSeries operator()(const Expr::Chi3Theta& n) const { return chi3_theta_rhs(n.a, n.c, w); }
    QSeries operator()(const Expr::NewRepn& n) const { return new_repn_rhs(n.r, w); }
    QSeries operator()(const Expr::SingleSumN& n) const { return single_sum(n.spec, w); }
    QSeries operator()(const Expr::Neg& n) const { return -eval_once(n.x, w); }
    QSeries operator()(const Expr::Add& n) const {
        return eval_once(n.x, w) + eval_once(n.y, w);
    }
    QSeries operator()(const Expr::Mul& n) const {
        return eval_once(n.x, w) * eval_once(n.y, w);
    }
    QSeries operator()(const Expr::Div& n) const {
        return eval_once(n.x, w) * eval_once(n.y, w).inverse();
    }
    QSeries operator()(const Expr::IntPow& n) const {
        if (n.n == 0) return QSeries::monomial(1, 0, w);
        QSeries b = eval_once(n.x, w);
        QSeries p = b;
        for (long i = 1; i < (n.n < 0 ? -n.n : n.n); ++i) p = p * b;
        return n.n < 0 ? p.inverse() : p;
    }
    QSeries operator()(const Expr::SubstQk& n) const {
        if (!(n.k > 0)) throw std::domain_error("subst_qk: k must be positive");
        return eval_once(n.x, w / n.k).substitute_qk(n.k);
    }
};

QSeries eval_once(const ExprPtr& e, const Exponent& w) {
    if (!e) throw std::domain_error("eval: null expression");
    return std::visit(Evaluator{w}, e->node);
}

// ---- JSON ----

json jrat(const Rational& r) { return r.get_str(); }

json jvec(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(jrat(x));
    return a;
}

json jmat(const Mat& m) {
    json a = json::array();
    for (const auto& row : m) a.push_back(jvec(row));
    return a;
}

Rational prat(const json& j) {
    if (j.is_number_integer()) return Rational((long)j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("expected rational (\"p/q\" string)");
}

Vec pvec(const json& j) {
    Vec v;
    for (const auto& x : j) v.push_back(prat(x));
    return v;
}

Mat pmat(const json& j) {
    Mat m;
    for (const auto& row : j) m.push_back(pvec(row));
    return m;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::G: return "G";
        case Family::Gt: return "Gt";
        case Family::Z: return "Z";
        case Family::Zsplit: return "Zsplit";
        case Family::H: return "H";
        case Family::Ht: return "Ht";
        case Family::L: return "L";
    }
    throw std::logic_error("unknown family");
}

Family family_from_name(const std::string& s) {
    if (s == "G") return Family::G;
    if (s == "Gt") return Family::Gt;
    if (s == "Z") return Family::Z;
    if (s == "Zsplit") return Family::Zsplit;
    if (s == "H") return Family::H;
    if (s == "Ht") return Family::Ht;
    if (s == "L") return Family::L;
    throw std::invalid_argument("unknown family name: " + s);
}

json jexpr(const ExprPtr& e);

struct Serializer {
    json operator()(const Expr::Const& n) const { return {{"op", "const"}, {"args", {jrat(n.c)}}}; }
    json operator()(const Expr::QPow& n) const { return {{"op", "qpow"}, {"args", {jrat(n.e)}}}; }
    json operator()(const Expr::Poch& n) const {
        return {{"op", "poch"},
                {"args", {n.spec.sign, jrat(n.spec.offset), jrat(n.spec.step), n.spec.length}}};
    }
    json operator()(const Expr::Jn& n) const { return {{"op", "J"}, {"args", {jrat(n.m)}}}; }
    json operator()(const Expr::J2n& n) const {
        return {{"op", "J2"}, {"args", {jrat(n.a), jrat(n.m)}}};
    }
    json operator()(const Expr::ThetaN& n) const {
        return {{"op", "theta"}, {"args", {n.spec.sign, jrat(n.spec.offset), jrat(n.spec.base)}}};
    }
    json operator()(const Expr::PhiN&) const { return {{"op", "phi"}, {"args", json::array()}}; }
    json operator()(const Expr::PsiN&) const { return {{"op", "psi"}, {"args", json::array()}}; }
    json operator()(const Expr::Theta0N&) const {
        return {{"op", "theta0"}, {"args", json::array()}};
    }
    json operator()(const Expr::Theta1N&) const {
        return {{"op", "theta1"}, {"args", json::array()}};
    }
    json operator()(const Expr::QBinom& n) const {
        return {{"op", "qbinom"}, {"args", {n.n, n.m}}};
    }
    json operator()(const Expr::Nahm& n) const {
        json signs = json::array();
        for (int s : n.spec.signs) signs.push_back(s);
        return {{"op", "nahm"},
                {"args", {jmat(n.spec.A), jvec(n.spec.B), jrat(n.spec.C), jrat(n.spec.base),
                          signs}}};
    }
    json operator()(const Expr::Chi& n) const {
        return {{"op", "chi"}, {"args", {n.spec.r, jvec(n.spec.e), jrat(n.spec.k)}}};
    }
    json operator()(const Expr::FamilyN& n) const {
        return {{"op", "family"}, {"args", {family_name(n.idx.family), n.idx.k, n.idx.parity}}};
    }
    json reduce(const char* op, const RankReductionInstance& inst) const {
        return {{"op", op}, {"args", {inst.r, jvec(inst.exponents), jrat(inst.base),
                                      inst.ell_margin}}};
    }
    json operator()(const Expr::ReduceEven& n) const { return reduce("reduce_even", n.inst); }
    json operator()(const Expr::ReduceOdd& n) const { return reduce("reduce_odd", n.inst); }
    json operator()(const Expr::FiniteSum& n) const {
        return {{"op", "finite_sum"}, {"args", {n.id, n.i, n.lhs ? "lhs" : "rhs"}}};
    }
    json operator()(const Expr::Chi4Theta& n) const {
        return {{"op", "chi4_theta"}, {"args", {n.case_id}}};
    }
    json operator()(const Expr::Chi5Theta& n) const {
        return {{"op", "chi5_theta"}, {"args", {n.case_id}}};
    }
    json operator()(const Expr::Chi3Theta& n) const {
        return {{"op", "chi3_theta"}, {"args", {n.a, jrat(n.c)}}};
    }
    json operator()(const Expr::NewRepn& n) const {
        return {{"op", "new_repn"}, {"args", {n.r}}};
    }
    json operator()(const Expr::SingleSumN& n) const {
        json num = json::array(), den = json::array();
        for (const auto& f : n.spec.num)
            num.push_back({f.sign, jrat(f.offset), jrat(f.step), f.shift});
        for (const auto& f : n.spec.den) den.push_back({jrat(f.step), f.mult, f.shift});
        return {{"op", "single_sum"},
                {"args", {jrat(n.spec.a2), jrat(n.spec.a1), jrat(n.spec.a0), n.spec.sgn, num,
                          den, n.spec.parity}}};
    }
    json operator()(const Expr::Neg& n) const { return {{"op", "neg"}, {"args", {jexpr(n.x)}}}; }
    json operator()(const Expr::Add& n) const {
        return {{"op", "add"}, {"args", {jexpr(n.x), jexpr(n.y)}}};
    }
    json operator()(const Expr::Mul& n) const {
        return {{"op", "mul"}, {"args", {jexpr(n.x), jexpr(n.y)}}};
    }
    json operator()(const Expr::Div& n) const {
        return {{"op", "div"}, {"args", {jexpr(n.x), jexpr(n.y)}}};
    }
    json operator()(const Expr::IntPow& n) const {
        return {{"op", "intpow"}, {"args", {jexpr(n.x), n.n}}};
    }
    json operator()(const Expr::SubstQk& n) const {
        return {{"op", "subst_qk"}, {"args", {jexpr(n.x), jrat(n.k)}}};
    }
};

json jexpr(const ExprPtr& e) {
    if (!e) throw std::invalid_argument("to_json: null expression");
    return std::visit(Serializer{}, e->node);
}

ExprPtr pexpr(const json& j);

ExprPtr pexpr_op(const std::string& op, const json& a) {
    auto argn = [&](size_t n) {
        if (a.size() != n)
            throw std::invalid_argument("op \"" + op + "\": expected " + std::to_string(n) +
                                        " args");
    };
    if (op == "const") { argn(1); return e_const(prat(a[0])); }
    if (op == "qpow") { argn(1); return e_qpow(prat(a[0])); }
    if (op == "poch") {
        argn(4);
        return e_poch({a[0].get<int>(), prat(a[1]), prat(a[2]), a[3].get<long>()});
    }
    if (op == "J") { argn(1); return e_J(prat(a[0])); }
    if (op == "J2") { argn(2); return e_J2(prat(a[0]), prat(a[1])); }
    if (op == "theta") { argn(3); return e_theta({a[0].get<int>(), prat(a[1]), prat(a[2])}); }
    if (op == "phi") { argn(0); return e_phi(); }
    if (op == "psi") { argn(0); return e_psi(); }
    if (op == "theta0") { argn(0); return e_theta0(); }
    if (op == "theta1") { argn(0); return e_theta1(); }
    if (op == "qbinom") { argn(2); return e_qbinom(a[0].get<long>(), a[1].get<long>()); }
    if (op == "nahm") {
        argn(5);
        NahmSpec s{pmat(a[0]), pvec(a[1]), prat(a[2]), prat(a[3]), {}};
        for (const auto& x : a[4]) s.signs.push_back(x.get<int>());
        return e_nahm(std::move(s));
    }
    if (op == "chi") {
        argn(3);
        return e_chi({a[0].get<long>(), pvec(a[1]), prat(a[2])});
    }
    if (op == "family") {
        argn(3);
        return e_family({family_from_name(a[0].get<std::string>()), a[1].get<int>(),
                         a[2].get<int>()});
    }
    if (op == "reduce_even" || op == "reduce_odd") {
        argn(4);
        RankReductionInstance inst{op == "reduce_even", a[0].get<long>(), pvec(a[1]),
                                   prat(a[2]), a[3].get<long>()};
        return inst.even ? e_reduce_even(std::move(inst)) : e_reduce_odd(std::move(inst));
    }
    if (op == "finite_sum") {
        argn(3);
        std::string side = a[2].get<std::string>();
        if (side != "lhs" && side != "rhs")
            throw std::invalid_argument("finite_sum: side must be lhs or rhs");
        return e_finite_sum(a[0].get<int>(), a[1].get<long>(), side == "lhs");
    }
    if (op == "chi4_theta") { argn(1); return e_chi4_theta(a[0].get<int>()); }
    if (op == "chi5_theta") { argn(1); return e_chi5_theta(a[0].get<int>()); }
    if (op == "chi3_theta") { argn(2); return e_chi3_theta(a[0].get<long>(), prat(a[1])); }
    if (op == "new_repn") { argn(1); return e_new_repn(a[0].get<long>()); }
    if (op == "single_sum") {
        argn(7);
        SingleSumSpec s;
        s.a2 = prat(a[0]);
        s.a1 = prat(a[1]);
        s.a0 = prat(a[2]);
        s.sgn = a[3].get<int>();
        for (const auto& f : a[4])
            s.num.push_back({f.at(0).get<int>(), prat(f.at(1)), prat(f.at(2)),
                             f.at(3).get<long>()});
        for (const auto& f : a[5])
            s.den.push_back({prat(f.at(0)), f.at(1).get<long>(), f.at(2).get<long>()});
        s.parity = a[6].get<int>();
        return e_single_sum(std::move(s));
    }
    if (op == "neg") { argn(1); return e_neg(pexpr(a[0])); }
    if (op == "add") { argn(2); return e_add(pexpr(a[0]), pexpr(a[1])); }
    if (op == "mul") { argn(2); return e_mul(pexpr(a[0]), pexpr(a[1])); }
    if (op == "div") { argn(2); return e_div(pexpr(a[0]), pexpr(a[1])); }
    if (op == "intpow") { argn(2); return e_intpow(pexpr(a[0]), a[1].get<long>()); }
    if (op == "subst_qk") { argn(2); return e_subst_qk(pexpr(a[0]), prat(a[1])); }
    throw std::invalid_argument("unknown op: " + op);
}

ExprPtr pexpr(const json& j) {
    if (!j.is_object() || !j.contains("op") || !j.contains("args"))
        throw std::invalid_argument("expression must be {\"op\": ..., \"args\": [...]}");
    return pexpr_op(j["op"].get<std::string>(), j["args"]);
}

}  // namespace

ExprPtr e_const(const Rational& c) { return mk(Expr::Const{c}); }
ExprPtr e_qpow(const Exponent& e) { return mk(Expr::QPow{e}); }
ExprPtr e_poch(const ProductSpec& spec) { return mk(Expr::Poch{spec}); }
ExprPtr e_J(const Exponent& m) { return mk(Expr::Jn{m}); }
ExprPtr e_J2(const Exponent& a, const Exponent& m) { return mk(Expr::J2n{a, m}); }
ExprPtr e_theta(const ThetaSpec& spec) { return mk(Expr::ThetaN{spec}); }
ExprPtr e_phi() { return mk(Expr::PhiN{}); }
ExprPtr e_psi() { return mk(Expr::PsiN{}); }
ExprPtr e_theta0() { return mk(Expr::Theta0N{}); }
ExprPtr e_theta1() { return mk(Expr::Theta1N{}); }
ExprPtr e_qbinom(long n, long m) { return mk(Expr::QBinom{n, m}); }
ExprPtr e_nahm(NahmSpec spec) { return mk(Expr::Nahm{std::move(spec)}); }
ExprPtr e_chi(TadpoleSpec spec) { return mk(Expr::Chi{std::move(spec)}); }
ExprPtr e_family(const FamilyIndex& idx) { return mk(Expr::FamilyN{idx}); }
ExprPtr e_reduce_even(RankReductionInstance inst) {
    inst.even = true;
    return mk(Expr::ReduceEven{std::move(inst)});
}
ExprPtr e_reduce_odd(RankReductionInstance inst) {
    inst.even = false;
    return mk(Expr::ReduceOdd{std::move(inst)});
}
ExprPtr e_finite_sum(int id, long i, bool lhs) { return mk(Expr::FiniteSum{id, i, lhs}); }
ExprPtr e_chi4_theta(int case_id) { return mk(Expr::Chi4Theta{case_id}); }
ExprPtr e_chi5_theta(int case_id) { return mk(Expr::Chi5Theta{case_id}); }
ExprPtr e_chi3_theta(long a, const Rational& c) { return mk(Expr::Chi3Theta{a, c}); }
ExprPtr e_new_repn(long r) { return mk(Expr::NewRepn{r}); }
ExprPtr e_single_sum(SingleSumSpec spec) { return mk(Expr::SingleSumN{std::move(spec)}); }
ExprPtr e_neg(ExprPtr x) { return mk(Expr::Neg{std::move(x)}); }
ExprPtr e_add(ExprPtr x, ExprPtr y) { return mk(Expr::Add{std::move(x), std::move(y)}); }
ExprPtr e_sub(ExprPtr x, ExprPtr y) { return e_add(std::move(x), e_neg(std::move(y))); }
ExprPtr e_mul(ExprPtr x, ExprPtr y) { return mk(Expr::Mul{std::move(x), std::move(y)}); }
ExprPtr e_div(ExprPtr x, ExprPtr y) { return mk(Expr::Div{std::move(x), std::move(y)}); }
ExprPtr e_intpow(ExprPtr x, long n) { return mk(Expr::IntPow{std::move(x), n}); }
ExprPtr e_subst_qk(ExprPtr x, const Rational& k) { return mk(Expr::SubstQk{std::move(x), k}); }

QSeries eval(const ExprPtr& e, const Exponent& accuracy) {
    if (!(accuracy > 0)) throw std::domain_error("eval: accuracy must be positive");
    Exponent work = accuracy;
    QSeries best = eval_once(e, work);
    for (int it = 0; it < 12 && best.accuracy() < accuracy; ++it) {
        work += accuracy - best.accuracy();
        best = eval_once(e, work);
    }
    return best.accuracy() < accuracy ? best : best.truncated(accuracy);
}

std::string to_json(const ExprPtr& e) { return jexpr(e).dump(); }

ExprPtr expr_from_json(const std::string& text) { return pexpr(json::parse(text)); }

}  // namespace nahmforge
