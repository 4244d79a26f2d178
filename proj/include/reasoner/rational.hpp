#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>

namespace reasoner {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational number. The stored fraction is not reduced on construction
/// (so that `6/4` survives parsing and rendering); arithmetic results are.
/// The denominator is always positive.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {} // NOLINT(google-explicit-constructor)
    explicit Rational(Integer n) : num_(std::move(n)), den_(1) {}
    Rational(Integer n, Integer d);

    const Integer& num() const noexcept { return num_; }
    const Integer& den() const noexcept { return den_; }

    Rational reduced() const;

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return num_ % den_ == 0; }
    int sign() const { return num_.sign(); }

    /// Field-wise equality: 6/4 and 3/2 are not identical.
    bool identical(const Rational& other) const { return num_ == other.num_ && den_ == other.den_; }

    Rational operator-() const { return Rational(-num_, den_); }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }

    /// Value equality and ordering.
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ * b.den_ == b.num_ * a.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    Rational abs() const { return Rational(num_ < 0 ? Integer(-num_) : num_, den_); }
    Rational pow(unsigned exponent) const;

    /// "n" or "n/d", exactly as stored.
    std::string to_string() const;

private:
    Integer num_;
    Integer den_;
};

} // namespace reasoner
