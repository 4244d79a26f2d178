#pragma once

#include "reasoner/exact_number.hpp"
#include "reasoner/expr.hpp"

#include <string>
#include <vector>

namespace reasoner {

/// n/d -> n'/d' with gcd(|n'|, d') = 1 and d' > 0.
Rational simplify_fraction(const Rational& r);

/// Dense univariate polynomial, coefficient i belongs to x^i. Trailing
/// zeros are trimmed; the zero polynomial is empty.
using Poly = std::vector<ExactNumber>;

/// Full expansion of e. Throws NotPolynomial for square roots of
/// non-constants, DegreeTooHigh past an internal bound of 64.
Poly expand(const Expr& e);

/// expand(lhs - rhs).
Poly expand(const Equation& e);

std::size_t degree(const Poly& p);

/// Polynomial rendered in descending degree as a surface expression.
Expr poly_expr(const Poly& p);

/// Fully expanded canonical form: every equation becomes P(x) = 0 with
/// coprime integer scaling and positive leading coefficient; equations are
/// deduplicated and ordered.
EqSet nf_full(const EqSet& s);

/// Structure-preserving canonical form: every equation becomes
/// (lhs - rhs) = 0 with like terms collected and summands ordered inside
/// every bracket, numeric factors folded, but no product or power that
/// contains x is expanded. Bases of even powers are oriented so their first
/// term is positive (odd powers move the sign out). Equations are
/// deduplicated and ordered.
EqSet nf_struct(const EqSet& s);
Equation nf_struct(const Equation& e);

/// Real solution set of a set of equations of degree <= 2.
struct RootSet {
    bool all_reals = false;
    /// Canonically ordered, no duplicates. Empty when all_reals.
    std::vector<ExactNumber> roots;

    friend bool operator==(const RootSet& a, const RootSet& b);
    std::string to_string() const;
};

/// Fingerprint of everything the step relations compare: the structural
/// normal form of each equation with its zero-derivation flag (as a
/// multiset), plus the term count. Equal keys satisfy all three relations.
std::string relation_key(const EqSet& s);

RootSet root_set(const EqSet& s);

/// Same real solution set.
bool equivalent(const EqSet& a, const EqSet& b);

} // namespace reasoner
