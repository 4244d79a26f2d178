#include "reasoner/rational.hpp"

#include <stdexcept>

namespace reasoner {

Rational::Rational(Integer n, Integer d) : num_(std::move(n)), den_(std::move(d))
{
    if (den_ == 0)
        throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

Rational Rational::reduced() const
{
    if (num_ == 0)
        return Rational(Integer(0), Integer(1));
    Integer g = boost::multiprecision::gcd(num_ < 0 ? Integer(-num_) : num_, den_);
    return Rational(num_ / g, den_ / g);
}

Rational operator+(const Rational& a, const Rational& b)
{
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_).reduced();
}

Rational operator-(const Rational& a, const Rational& b)
{
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_).reduced();
}

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational(a.num_ * b.num_, a.den_ * b.den_).reduced();
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.num_ == 0)
        throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_).reduced();
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    Integer lhs = a.num_ * b.den_;
    Integer rhs = b.num_ * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::pow(unsigned exponent) const
{
    Rational result(1);
    for (unsigned i = 0; i < exponent; ++i)
        result *= *this;
    return result;
}

std::string Rational::to_string() const
{
    if (den_ == 1)
        return num_.str();
    return num_.str() + "/" + den_.str();
}

} // namespace reasoner
