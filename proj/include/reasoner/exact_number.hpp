#pragma once

#include "reasoner/rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace reasoner {

/// Exact real number of the form p + q1*sqrt(d1) + q2*sqrt(d2) + ...
/// with rational coefficients and distinct squarefree radicands d > 1.
///
/// The usual case is a single surd, p + q*sqrt(d), which is what the
/// square-root and quadratic-formula rules produce. The representation is
/// canonical: two values are equal iff their component maps are equal.
class ExactNumber {
public:
    ExactNumber() = default;
    ExactNumber(const Rational& r); // NOLINT(google-explicit-constructor)
    ExactNumber(long long n) : ExactNumber(Rational(n)) {} // NOLINT(google-explicit-constructor)

    /// q * sqrt(radicand); radicand must be positive, need not be squarefree.
    static ExactNumber surd(const Rational& q, const Integer& radicand);

    /// Principal square root of a nonnegative rational.
    static ExactNumber sqrt_of(const Rational& r);

    bool is_zero() const { return components_.empty(); }
    bool is_rational() const;
    Rational rational_part() const;

    /// Radicand (1 for the rational part) -> reduced, nonzero coefficient.
    const std::map<Integer, Rational>& components() const { return components_; }

    /// Sign of the first component in canonical order. For rationals this is
    /// the real sign; otherwise it is a canonical orientation only.
    int canonical_sign() const;

    /// Real sign. Exact for rationals and single-surd values.
    int sign() const;

    /// Multiplicative inverse for values with at most one surd component.
    ExactNumber inverse() const;

    ExactNumber operator-() const;
    friend ExactNumber operator+(const ExactNumber& a, const ExactNumber& b);
    friend ExactNumber operator-(const ExactNumber& a, const ExactNumber& b) { return a + (-b); }
    friend ExactNumber operator*(const ExactNumber& a, const ExactNumber& b);
    ExactNumber& operator+=(const ExactNumber& b) { return *this = *this + b; }
    ExactNumber& operator*=(const ExactNumber& b) { return *this = *this * b; }

    friend bool operator==(const ExactNumber& a, const ExactNumber& b);

    /// Canonical total order (not the real order); used for sorting only.
    friend bool canonical_less(const ExactNumber& a, const ExactNumber& b);

    std::string to_string() const;

private:
    void add_component(const Integer& radicand, const Rational& coefficient);

    std::map<Integer, Rational> components_;
};

bool canonical_less(const ExactNumber& a, const ExactNumber& b);

/// Largest k with k*k <= n, for n >= 0.
Integer integer_sqrt(const Integer& n);

/// Splits n > 0 into k^2 * s with s squarefree; returns {k, s}.
std::pair<Integer, Integer> squarefree_split(const Integer& n);

} // namespace reasoner
