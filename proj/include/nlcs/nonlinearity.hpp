#pragma once

#include <string>
#include <vector>

namespace nlcs {

/// A real number carried as (sign, ln|value|) so that long products of
/// factors spanning hundreds of orders of magnitude neither overflow nor
/// lose their sign. sign == 0 encodes an exact zero; log_magnitude is
/// meaningless in that case.
struct SignedLogValue {
    int sign = 0;
    double log_magnitude = 0.0;

    static SignedLogValue from_real(double x);
    double to_real() const;

    friend SignedLogValue operator*(const SignedLogValue& a, const SignedLogValue& b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
    }
    SignedLogValue& operator*=(const SignedLogValue& rhs) { return *this = *this * rhs; }
};

enum class NonlinearityKind { identity, trapped_ion, table };

/// Immutable description of the level-dependent deformation f(n) that turns
/// the harmonic ladder into a nonlinear one. Three kinds:
///
///   identity     f(n) = 1 for every n (the harmonic limit)
///   trapped_ion  f(n) = L_n^1(eta^2) / [(n+1) L_n^0(eta^2)]
///   table        f(1..m) supplied explicitly, one value per level
///
/// The trapped-ion denominator (n+1) L_n^0 crosses zero at isolated eta; any
/// evaluation whose |denominator| falls below denom_epsilon raises
/// SingularDenominator instead of returning a huge unreliable quotient.
class NonlinearitySpec {
public:
    static NonlinearitySpec identity();
    static NonlinearitySpec trapped_ion(double eta, double denom_epsilon = 1e-12);
    static NonlinearitySpec table(std::vector<double> values, double denom_epsilon = 1e-12);
    /// Parse a table file: one f(k) per line starting at k = 1; blank lines
    /// and lines starting with '#' are skipped.
    static NonlinearitySpec table_from_file(const std::string& path, double denom_epsilon = 1e-12);

    NonlinearityKind kind() const noexcept { return kind_; }
    double eta() const noexcept { return eta_; }
    double denom_epsilon() const noexcept { return denom_epsilon_; }
    /// Largest level a table supplies; INT_MAX for the analytic kinds.
    int max_level() const noexcept;

    /// f(n) for n >= 0. f(0) is 1 by the empty-product convention for every
    /// kind (tables list levels from k = 1). Table lookups beyond the stored
    /// range raise InvalidArgument naming the level.
    double f(int n) const;

    /// f(n)! = f(1) f(2) ... f(n), with f(0)! = +1 (empty product).
    SignedLogValue f_factorial(int n) const;

    /// All of f(0)!, f(1)!, ..., f(n_max)! in one pass. For the trapped-ion
    /// kind this costs one Laguerre row per order instead of one per level,
    /// so prefer it in any loop over n.
    std::vector<SignedLogValue> f_factorial_prefix(int n_max) const;

private:
    NonlinearitySpec(NonlinearityKind kind, double eta, std::vector<double> values, double denom_epsilon);

    NonlinearityKind kind_;
    double eta_ = 0.0;
    std::vector<double> values_; // table kind: values_[k-1] = f(k)
    double denom_epsilon_ = 1e-12;
};

} // namespace nlcs
