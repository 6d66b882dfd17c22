#include "nahmforge/qseries.hpp"

#include <algorithm>
#include <stdexcept>

namespace nahmforge {

QSeries QSeries::zero(const Exponent& accuracy) { return QSeries({}, accuracy); }

QSeries QSeries::monomial(const Rational& c, const Exponent& e, const Exponent& accuracy) {
    if (c == 0) return zero(accuracy);
    if (!(e < accuracy))
        throw std::domain_error("monomial: accuracy must exceed the exponent");
    TermMap t;
    t.emplace(e, c);
    return QSeries(std::move(t), accuracy);
}

std::optional<Exponent> QSeries::valuation() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

Rational QSeries::coeff(const Exponent& e) const {
    if (!(e < accuracy_))
        throw std::domain_error("coeff: exponent at or above the accuracy order");
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

QSeries QSeries::operator+(const QSeries& g) const {
    Exponent acc = std::min(accuracy_, g.accuracy_);
    TermMap out;
    auto a = terms_.begin(), b = g.terms_.begin();
    while (a != terms_.end() || b != g.terms_.end()) {
        if (b == g.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            if (a->first < acc) out.emplace(a->first, a->second);
            ++a;
        } else if (a == terms_.end() || b->first < a->first) {
            if (b->first < acc) out.emplace(b->first, b->second);
            ++b;
        } else {
            Rational c = a->second + b->second;
            if (c != 0 && a->first < acc) out.emplace(a->first, c);
            ++a;
            ++b;
        }
    }
    return QSeries(std::move(out), std::move(acc));
}

QSeries QSeries::operator-() const {
    TermMap out = terms_;
    for (auto& [e, c] : out) c = -c;
    return QSeries(std::move(out), accuracy_);
}

QSeries QSeries::operator-(const QSeries& g) const { return *this + (-g); }

QSeries QSeries::operator*(const QSeries& g) const {
    if (terms_.empty() || g.terms_.empty()) {
        // Zero annihilates; keep the larger accuracy claim of the inputs.
        return zero(std::max(accuracy_, g.accuracy_));
    }
    Exponent acc = std::min(accuracy_ + g.terms_.begin()->first,
                            g.accuracy_ + terms_.begin()->first);
    TermMap out;
    for (const auto& [ea, ca] : terms_) {
        if (!(ea + g.terms_.begin()->first < acc)) break;
        for (const auto& [eb, cb] : g.terms_) {
            Exponent e = ea + eb;
            if (!(e < acc)) break;
            auto [it, fresh] = out.emplace(e, ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) out.erase(it);
            }
        }
    }
    return QSeries(std::move(out), std::move(acc));
}

QSeries QSeries::inverse() const {
    if (terms_.empty()) throw std::domain_error("inverse of the zero series");
    const Exponent v = terms_.begin()->first;
    const Rational c = terms_.begin()->second;
    const Exponent acc = accuracy_ - 2 * v;   // result accuracy
    const Exponent rel = accuracy_ - v;       // accuracy of 1/(1+h)

    // g = c q^v (1 + h), 1/g = c^{-1} q^{-v} sum_j (-h)^j.
    TermMap hmap;
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        Exponent e = it->first - v;
        if (e < rel) hmap.emplace(std::move(e), it->second / c);
    }
    /* u = 1/(1+h) solves u = 1 - h u.  Sweep exponents upward: h has positive
     * valuation, so every contribution to a coefficient comes from strictly
     * smaller exponents and each value is final when reached. */
    TermMap work;
    work.emplace(0, 1);
    TermMap out;
    while (!work.empty()) {
        auto it = work.begin();
        Exponent e = it->first;
        Rational cu = std::move(it->second);
        work.erase(it);
        if (cu == 0) continue;
        for (const auto& [eh, ch] : hmap) {
            Exponent en = e + eh;
            if (!(en < rel)) break;
            auto [jt, fresh] = work.emplace(std::move(en), -(ch * cu));
            if (!fresh) jt->second -= ch * cu;
        }
        Exponent eo = e - v;
        if (eo < acc) out.emplace(std::move(eo), cu / c);
    }
    return QSeries(std::move(out), acc);
}

QSeries QSeries::substitute_qk(const Rational& k) const {
    if (!(k > 0)) throw std::domain_error("substitute_qk: k must be positive");
    TermMap out;
    for (const auto& [e, c] : terms_) out.emplace(e * k, c);
    return QSeries(std::move(out), accuracy_ * k);
}

QSeries QSeries::truncated(const Exponent& new_accuracy) const {
    TermMap out;
    for (const auto& [e, c] : terms_) {
        if (!(e < new_accuracy)) break;
        out.emplace(e, c);
    }
    return QSeries(std::move(out), new_accuracy);
}

QSeries QSeries::with_accuracy(const Exponent& claimed) const {
    if (claimed <= accuracy_) return truncated(claimed);
    return QSeries(terms_, claimed);
}

void QSeries::add_scaled_inplace(const QSeries& g, const Exponent& shift, const Rational& scale) {
    if (scale == 0) return;
    for (const auto& [eg, cg] : g.terms()) {
        Exponent e = eg + shift;
        if (!(e < accuracy_)) break;
        auto [it, fresh] = terms_.emplace(std::move(e), cg * scale);
        if (!fresh) {
            it->second += cg * scale;
            if (it->second == 0) terms_.erase(it);
        }
    }
}

void QSeries::add_term_inplace(const Exponent& e, const Rational& c) {
    if (c == 0 || !(e < accuracy_)) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

QSeries QSeries::negate_odd_exponents() const {
    TermMap out;
    for (const auto& [e, c] : terms_) {
        if (!is_integer(e))
            throw std::domain_error("q -> -q needs integer exponents");
        out.emplace(e, mpz_odd_p(e.get_num_mpz_t()) ? -c : c);
    }
    return QSeries(std::move(out), accuracy_);
}

QSeries QSeries::twist_even_mod4() const {
    TermMap out;
    for (const auto& [e, c] : terms_) {
        if (!is_integer(e) || mpz_odd_p(e.get_num_mpz_t()))
            throw std::domain_error("mod-4 twist needs even integer exponents");
        mpz_class half = e.get_num() / 2;
        out.emplace(e, mpz_odd_p(half.get_mpz_t()) ? -c : c);
    }
    return QSeries(std::move(out), accuracy_);
}

QSeries QSeries::twist_odd_mod4() const {
    TermMap out;
    for (const auto& [e, c] : terms_) {
        if (!is_integer(e) || mpz_even_p(e.get_num_mpz_t()))
            throw std::domain_error("mod-4 twist needs odd integer exponents");
        mpz_class m = e.get_num() % 4;
        if (m < 0) m += 4;
        out.emplace(e, m == 1 ? -c : c);
    }
    return QSeries(std::move(out), accuracy_);
}

std::optional<QSeries::Mismatch> QSeries::first_mismatch(const QSeries& f, const QSeries& g,
                                                         const Exponent& order) {
    if (order > f.accuracy_ || order > g.accuracy_)
        throw std::domain_error("first_mismatch: order exceeds a side's accuracy");
    auto a = f.terms_.begin(), b = g.terms_.begin();
    while (true) {
        bool ae = (a == f.terms_.end() || !(a->first < order));
        bool be = (b == g.terms_.end() || !(b->first < order));
        if (ae && be) return std::nullopt;
        if (be || (!ae && a->first < b->first)) {
            return Mismatch{a->first, a->second, 0};
        }
        if (ae || b->first < a->first) {
            return Mismatch{b->first, 0, b->second};
        }
        if (a->second != b->second) return Mismatch{a->first, a->second, b->second};
        ++a;
        ++b;
    }
}

QSeries make_monomial(const Rational& c, const Exponent& e, const Exponent& accuracy) {
    return QSeries::monomial(c, e, accuracy);
}
QSeries add(const QSeries& f, const QSeries& g) { return f + g; }
QSeries mul(const QSeries& f, const QSeries& g) { return f * g; }
QSeries invert(const QSeries& g) { return g.inverse(); }
QSeries substitute_qk(const QSeries& f, const Rational& k) { return f.substitute_qk(k); }
std::optional<QSeries::Mismatch> first_mismatch(const QSeries& f, const QSeries& g,
                                                const Exponent& order) {
    return QSeries::first_mismatch(f, g, order);
}

}  // namespace nahmforge
