#pragma once

#include <stdexcept>
#include <string>

namespace nlcs {

/// Base class for every failure the toolkit can raise on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition or configuration value was rejected.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// |(n+1) L_n(x)| dropped below the configured guard while evaluating the
/// trapped-ion nonlinearity; carries the offending level.
class SingularDenominator : public Error {
public:
    SingularDenominator(int level, const std::string& msg) : Error(msg), level_(level) {}
    int level() const noexcept { return level_; }

private:
    int level_ = -1;
};

/// A tabulated nonlinearity contains f(k) == 0 where a division by f is required.
class ZeroNonlinearity : public Error {
public:
    ZeroNonlinearity(int level, const std::string& msg) : Error(msg), level_(level) {}
    int level() const noexcept { return level_; }

private:
    int level_ = -1;
};

/// The truncation policy hit its order cap without the tail test passing.
class Divergence : public Error {
public:
    Divergence(int order, const std::string& msg) : Error(msg), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_ = -1;
};

/// A fixed-dimension oracle computation pushed too much weight against the
/// truncation edge for its result to be trusted.
class TailOverflow : public Error {
public:
    explicit TailOverflow(const std::string& msg) : Error(msg) {}
};

} // namespace nlcs
