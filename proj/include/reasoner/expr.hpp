#pragma once

#include "reasoner/exact_number.hpp"
#include "reasoner/rational.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace reasoner {

enum class ExprKind { Const, Var, Sum, Prod, Pow, Neg, Sqrt };

/// Immutable expression tree over the single unknown `x`.
///
/// Nodes are shared; copying an Expr is cheap. Sum and Prod are flattened on
/// construction and always hold at least two children. Pow exponents are at
/// least 2. Equality is structural: the tree as written, including the
/// unreduced form of constants.
class Expr {
public:
    static Expr constant(const Rational& value);
    static Expr var();
    /// Zero children yields 0, one child yields that child.
    static Expr sum(std::vector<Expr> children);
    /// Zero children yields 1, one child yields that child.
    static Expr product(std::vector<Expr> children);
    /// Exponent 1 yields the base; exponent 0 is rejected.
    static Expr power(Expr base, unsigned exponent);
    static Expr neg(Expr operand);
    static Expr sqrt(Expr radicand);

    ExprKind kind() const;
    const Rational& value() const;
    std::span<const Expr> children() const;
    /// Operand of Neg/Sqrt, base of Pow.
    const Expr& operand() const;
    unsigned exponent() const;

    bool is_var_free() const;
    /// Upper bound on the degree in x, counting brackets structurally.
    unsigned degree_bound() const;

    bool is(ExprKind k) const { return kind() == k; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Equation {
    Expr lhs;
    Expr rhs;

    friend bool operator==(const Equation& a, const Equation& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

/// A disjunction of equations: one solution state. Never empty.
class EqSet {
public:
    explicit EqSet(std::vector<Equation> equations);
    EqSet(Equation single) : EqSet(std::vector<Equation>{std::move(single)}) {} // NOLINT

    const std::vector<Equation>& equations() const { return equations_; }
    std::size_t size() const { return equations_.size(); }
    const Equation& operator[](std::size_t i) const { return equations_[i]; }

    friend bool operator==(const EqSet& a, const EqSet& b) { return a.equations_ == b.equations_; }

private:
    std::vector<Equation> equations_;
};

/// Top-level summands of an expression (the expression itself if not a Sum).
std::vector<Expr> summands(const Expr& e);

/// Exact value of a variable-free expression. Throws NegativeRadicand, or
/// NotPolynomial for nested irrational radicands.
ExactNumber constant_value(const Expr& e);

/// True iff e is variable-free and folds to zero.
bool is_zero_constant(const Expr& e);

/// Number of nonzero top-level summands on both sides of every equation.
std::size_t term_count(const EqSet& s);
std::size_t term_count(const Equation& e);

/// True iff either side is (a constant expression equal to) zero.
bool is_zero_derived(const Equation& e);

/// Exact rational value of e at x = v. Throws NegativeRadicand, or
/// NotPolynomial when a square root is irrational.
Rational eval_at(const Expr& e, const Rational& v);

/// A summand split into its surface sign and magnitude.
struct SignedTerm {
    bool negative = false;
    Expr magnitude;
};

/// Neg(u) -> (-, u); Prod(Neg(f), rest...) -> (-, Prod(f, rest...)).
SignedTerm split_sign(const Expr& summand);

/// Rebuilds a sum in surface form: a negative first term is written with a
/// leading unary minus (`-2*x`), later negative terms as binary minus.
/// Empty input yields 0.
Expr build_sum(const std::vector<SignedTerm>& terms);

/// Expression with the canonical surface form of a number: negative values
/// as unary minus, surds as q*sqrt(d) summands.
Expr number_expr(const ExactNumber& v);
Expr number_expr(const Rational& v);

/// True iff every equation reads `x = <variable-free expression>`.
bool is_solved_form(const EqSet& s);

} // namespace reasoner
