#include "nlcs/nonlinearity.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nlcs/errors.hpp"
#include "nlcs/specfun.hpp"

namespace nlcs {

SignedLogValue SignedLogValue::from_real(double x) {
    if (x == 0.0) return {};
    return {x > 0.0 ? 1 : -1, std::log(std::abs(x))};
}

double SignedLogValue::to_real() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_magnitude);
}

NonlinearitySpec::NonlinearitySpec(NonlinearityKind kind, double eta, std::vector<double> values,
                                   double denom_epsilon)
    : kind_(kind), eta_(eta), values_(std::move(values)), denom_epsilon_(denom_epsilon) {}

NonlinearitySpec NonlinearitySpec::identity() {
    return {NonlinearityKind::identity, 0.0, {}, 1e-12};
}

NonlinearitySpec NonlinearitySpec::trapped_ion(double eta, double denom_epsilon) {
    if (!std::isfinite(eta) || eta < 0.0)
        throw InvalidArgument("trapped_ion: eta must be finite and >= 0");
    if (!(denom_epsilon > 0.0))
        throw InvalidArgument("trapped_ion: denom_epsilon must be > 0");
    return {NonlinearityKind::trapped_ion, eta, {}, denom_epsilon};
}

NonlinearitySpec NonlinearitySpec::table(std::vector<double> values, double denom_epsilon) {
    for (size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw InvalidArgument("table: f(" + std::to_string(i + 1) + ") is not finite");
    return {NonlinearityKind::table, 0.0, std::move(values), denom_epsilon};
}

NonlinearitySpec NonlinearitySpec::table_from_file(const std::string& path, double denom_epsilon) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("table: cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        double v = 0.0;
        if (!(fields >> v)) {
            throw InvalidArgument("table: '" + path + "' line " + std::to_string(lineno) +
                                  " is not a real number");
        }
        std::string trailing;
        if (fields >> trailing)
            throw InvalidArgument("table: '" + path + "' line " + std::to_string(lineno) +
                                  " has trailing content");
        values.push_back(v);
    }
    if (values.empty()) throw InvalidArgument("table: '" + path + "' supplies no values");
    return table(std::move(values), denom_epsilon);
}

int NonlinearitySpec::max_level() const noexcept {
    if (kind_ == NonlinearityKind::table) return static_cast<int>(values_.size());
    return std::numeric_limits<int>::max();
}

double NonlinearitySpec::f(int n) const {
    if (n < 0) throw InvalidArgument("f: level must be >= 0, got " + std::to_string(n));
    if (n == 0) return 1.0; // empty-product convention, every kind
    switch (kind_) {
    case NonlinearityKind::identity:
        return 1.0;
    case NonlinearityKind::table:
        if (n > static_cast<int>(values_.size()))
            throw InvalidArgument("f: table supplies levels up to " +
                                  std::to_string(values_.size()) + ", requested " + std::to_string(n));
        return values_[static_cast<size_t>(n) - 1];
    case NonlinearityKind::trapped_ion: {
        const double x = eta_ * eta_;
        const double denom = (n + 1.0) * laguerre(n, 0, x);
        if (std::abs(denom) < denom_epsilon_)
            throw SingularDenominator(n, "trapped-ion nonlinearity singular at n=" + std::to_string(n) +
                                             ": |(n+1) L_n(eta^2)| = " + std::to_string(std::abs(denom)) +
                                             " below guard");
        return laguerre(n, 1, x) / denom;
    }
    }
    throw InvalidArgument("f: unknown nonlinearity kind");
}

SignedLogValue NonlinearitySpec::f_factorial(int n) const {
    if (n < 0) throw InvalidArgument("f_factorial: level must be >= 0, got " + std::to_string(n));
    return f_factorial_prefix(n).back();
}

std::vector<SignedLogValue> NonlinearitySpec::f_factorial_prefix(int n_max) const {
    if (n_max < 0) throw InvalidArgument("f_factorial_prefix: n_max must be >= 0");
    std::vector<SignedLogValue> prefix(static_cast<size_t>(n_max) + 1);
    prefix[0] = {1, 0.0}; // f(0)! = 1
    if (n_max == 0) return prefix;

    if (kind_ == NonlinearityKind::trapped_ion) {
        // One pass over both Laguerre rows instead of n_max full recurrences.
        const double x = eta_ * eta_;
        const auto l0 = laguerre_row(n_max, 0, x);
        const auto l1 = laguerre_row(n_max, 1, x);
        SignedLogValue acc{1, 0.0};
        for (int n = 1; n <= n_max; ++n) {
            const double denom = (n + 1.0) * l0[n];
            if (std::abs(denom) < denom_epsilon_)
                throw SingularDenominator(n, "trapped-ion nonlinearity singular at n=" + std::to_string(n) +
                                                 ": |(n+1) L_n(eta^2)| below guard");
            acc *= SignedLogValue::from_real(l1[n] / denom);
            prefix[n] = acc;
        }
        return prefix;
    }

    SignedLogValue acc{1, 0.0};
    for (int n = 1; n <= n_max; ++n) {
        acc *= SignedLogValue::from_real(f(n));
        prefix[n] = acc;
    }
    return prefix;
}

} // namespace nlcs
