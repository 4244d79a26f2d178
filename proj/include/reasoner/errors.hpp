#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reasoner {

/// Base of every error the reasoner raises on its own behalf.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text does not conform to the equation grammar.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected)
        : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
          offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// An identifier other than `x` appeared in the input.
class VariableError : public Error {
public:
    VariableError(std::size_t offset, const std::string& name)
        : Error("unknown variable '" + name + "' at offset " + std::to_string(offset) +
                " (only x is supported)"),
          offset_(offset), name_(name) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

class NegativeRadicand : public Error {
public:
    NegativeRadicand() : Error("square root of a negative number") {}
};

/// The expression leaves the polynomial fragment the algebra module decides
/// (square roots of non-constants, nested or mixed irrational coefficients).
class NotPolynomial : public Error {
public:
    using Error::Error;
};

class DegreeTooHigh : public Error {
public:
    explicit DegreeTooHigh(std::size_t degree)
        : Error("polynomial degree " + std::to_string(degree) + " exceeds 2"), degree_(degree) {}

    std::size_t degree() const noexcept { return degree_; }

private:
    std::size_t degree_;
};

class InvalidSite : public Error {
public:
    using Error::Error;
};

class InvalidStrategy : public Error {
public:
    using Error::Error;
};

class DepthCapExceeded : public Error {
public:
    explicit DepthCapExceeded(int requested)
        : Error("lookahead depth " + std::to_string(requested) + " exceeds the hard cap of 8") {}
};

class NoDerivation : public Error {
public:
    using Error::Error;
};

class StrategyExhausted : public Error {
public:
    StrategyExhausted() : Error("strategy has no further steps at this state") {}
};

} // namespace reasoner
