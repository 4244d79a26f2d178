#include "reasoner/exact_number.hpp"

#include "reasoner/errors.hpp"

#include <algorithm>

namespace reasoner {

namespace mp = boost::multiprecision;

Integer integer_sqrt(const Integer& n)
{
    if (n < 0)
        throw NegativeRadicand();
    return mp::sqrt(n);
}

std::pair<Integer, Integer> squarefree_split(const Integer& n)
{
    Integer rest = n;
    Integer k = 1;
    // Strip small prime squares by trial division, then catch a single
    // large square cofactor. Radicands in this domain are discriminants of
    // small quadratics, far below the trial bound.
    for (Integer p = 2; p * p <= rest && p < 100000; p += (p == 2 ? 1 : 2)) {
        Integer pp = p * p;
        while (rest % pp == 0) {
            rest /= pp;
            k *= p;
        }
    }
    Integer r = integer_sqrt(rest);
    if (rest > 1 && r * r == rest) {
        k *= r;
        rest = 1;
    }
    return {k, rest};
}

ExactNumber::ExactNumber(const Rational& r)
{
    add_component(Integer(1), r);
}

void ExactNumber::add_component(const Integer& radicand, const Rational& coefficient)
{
    if (coefficient.is_zero())
        return;
    auto it = components_.find(radicand);
    if (it == components_.end()) {
        components_.emplace(radicand, coefficient.reduced());
        return;
    }
    it->second = it->second + coefficient;
    if (it->second.is_zero())
        components_.erase(it);
}

ExactNumber ExactNumber::surd(const Rational& q, const Integer& radicand)
{
    if (radicand <= 0)
        throw NegativeRadicand();
    auto [k, s] = squarefree_split(radicand);
    ExactNumber out;
    out.add_component(s, q * Rational(k));
    return out;
}

ExactNumber ExactNumber::sqrt_of(const Rational& r)
{
    if (r.sign() < 0)
        throw NegativeRadicand();
    if (r.is_zero())
        return {};
    Rational red = r.reduced();
    // sqrt(n/d) = sqrt(n*d)/d
    return surd(Rational(Integer(1), red.den()), red.num() * red.den());
}

bool ExactNumber::is_rational() const
{
    return components_.empty() || (components_.size() == 1 && components_.begin()->first == 1);
}

Rational ExactNumber::rational_part() const
{
    auto it = components_.find(Integer(1));
    return it == components_.end() ? Rational(0) : it->second;
}

int ExactNumber::canonical_sign() const
{
    return components_.empty() ? 0 : components_.begin()->second.sign();
}

int ExactNumber::sign() const
{
    if (components_.empty())
        return 0;
    if (is_rational())
        return rational_part().sign();
    if (components_.size() == 1)
        return components_.begin()->second.sign();
    if (components_.size() == 2 && components_.begin()->first == 1) {
        // p + q*sqrt(d): compare p^2 with q^2 d when the signs disagree.
        const Rational p = components_.begin()->second;
        const auto& [d, q] = *std::next(components_.begin());
        if (p.sign() == q.sign())
            return p.sign();
        Rational lhs = p * p;
        Rational rhs = q * q * Rational(d);
        if (lhs == rhs)
            return 0;
        return lhs > rhs ? p.sign() : q.sign();
    }
    throw NotPolynomial("sign of a value with several distinct surds is not supported");
}

ExactNumber ExactNumber::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero");
    if (is_rational())
        return ExactNumber(Rational(1) / rational_part());
    const bool single_surd = components_.size() == 1 ||
        (components_.size() == 2 && components_.begin()->first == 1);
    if (!single_surd)
        throw NotPolynomial("inverse of a value with several distinct surds is not supported");
    // 1/(p + q sqrt d) = (p - q sqrt d) / (p^2 - q^2 d)
    Rational p = rational_part();
    const auto& [d, q] = *components_.rbegin();
    Rational norm = p * p - q * q * Rational(d);
    ExactNumber out;
    out.add_component(Integer(1), p / norm);
    out.add_component(d, -q / norm);
    return out;
}

ExactNumber ExactNumber::operator-() const
{
    ExactNumber out;
    for (const auto& [d, q] : components_)
        out.components_.emplace(d, -q);
    return out;
}

ExactNumber operator+(const ExactNumber& a, const ExactNumber& b)
{
    ExactNumber out = a;
    for (const auto& [d, q] : b.components_)
        out.add_component(d, q);
    return out;
}

ExactNumber operator*(const ExactNumber& a, const ExactNumber& b)
{
    ExactNumber out;
    for (const auto& [da, qa] : a.components_) {
        for (const auto& [db, qb] : b.components_) {
            // sqrt(da)*sqrt(db) = g*sqrt((da/g)*(db/g)), both squarefree
            Integer g = mp::gcd(da, db);
            out.add_component((da / g) * (db / g), qa * qb * Rational(g));
        }
    }
    return out;
}

bool operator==(const ExactNumber& a, const ExactNumber& b)
{
    if (a.components_.size() != b.components_.size())
        return false;
    auto ia = a.components_.begin();
    auto ib = b.components_.begin();
    for (; ia != a.components_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !(ia->second == ib->second))
            return false;
    }
    return true;
}

bool canonical_less(const ExactNumber& a, const ExactNumber& b)
{
    auto ia = a.components_.begin();
    auto ib = b.components_.begin();
    for (; ia != a.components_.end() && ib != b.components_.end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            return ia->first < ib->first;
        if (!(ia->second == ib->second))
            return ia->second < ib->second;
    }
    return a.components_.size() < b.components_.size();
}

std::string ExactNumber::to_string() const
{
    if (components_.empty())
        return "0";
    std::string out;
    for (const auto& [d, q] : components_) {
        if (!out.empty())
            out += " + ";
        out += q.to_string();
        if (d != 1)
            out += "*sqrt(" + d.str() + ")";
    }
    return out;
}

} // namespace reasoner
