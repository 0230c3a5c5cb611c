#include "nlcs/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlcs/errors.hpp"
#include "nlcs/specfun.hpp"
#include "tail.hpp"
#include "text.hpp"

namespace nlcs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_policy(const TruncationPolicy& policy) {
    if (policy.initial_floor < 1) throw InvalidArgument("truncation: initial_floor must be >= 1");
    if (policy.max_order < policy.window) throw InvalidArgument("truncation: max_order too small");
    if (!(policy.tail_tol > 0.0)) throw InvalidArgument("truncation: tail_tol must be > 0");
    if (policy.window < 2) throw InvalidArgument("truncation: window must be >= 2");
    if (!(policy.ratio_cap > 0.0 && policy.ratio_cap < 1.0))
        throw InvalidArgument("truncation: ratio_cap must lie in (0, 1)");
}

StateExpansion build_family(StateFamily family, const NonlinearitySpec& spec,
                            std::complex<double> z, const TruncationPolicy& policy) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidArgument("state amplitude must be finite");
    check_policy(policy);

    const double mod = std::abs(z);
    const double log_mod = mod == 0.0 ? kNegInf : std::log(mod);
    const int floor_n = std::max(policy.initial_floor, static_cast<int>(std::ceil(8.0 * mod * mod)));
    int order = std::min(floor_n, policy.max_order);

    for (;;) {
        const auto fact = spec.f_factorial_prefix(order);

        // ln|c~_n| with the family-specific factorial power; sign tracked
        // separately, exact zeros kept as -inf weights.
        std::vector<double> log_c(static_cast<size_t>(order) + 1, kNegInf);
        std::vector<int> sign(static_cast<size_t>(order) + 1, 0);
        std::vector<double> log_w(static_cast<size_t>(order) + 1, kNegInf);
        log_c[0] = 0.0;
        sign[0] = 1;
        log_w[0] = 0.0;
        for (int n = 1; n <= order; ++n) {
            if (family == StateFamily::eigenstate && fact[n].sign == 0) {
                int level = n;
                while (level > 1 && fact[level - 1].sign == 0) --level;
                throw ZeroNonlinearity(level, "eigenstate expansion divides by f(n)! but f(" +
                                                  std::to_string(level) + ") = 0");
            }
            if (fact[n].sign == 0 || log_mod == kNegInf) continue;
            sign[n] = fact[n].sign;
            const double fac = family == StateFamily::displacement ? fact[n].log_magnitude
                                                                   : -fact[n].log_magnitude;
            log_c[n] = n * log_mod + fac - 0.5 * log_factorial(n);
            log_w[n] = 2.0 * log_c[n];
        }

        const TailCheck tail = test_tail(log_w, policy);
        if (!tail.ok) {
            if (order >= policy.max_order)
                throw Divergence(order, "tail criterion unmet at the order cap " +
                                            std::to_string(policy.max_order) +
                                            "; the expansion grows too fast for this budget");
            order = std::min(2 * order, policy.max_order);
            continue;
        }

        // Materialize against the pre-normalization total, then renormalize
        // exactly so the probability sum is 1 to machine precision.
        const double theta = (mod == 0.0) ? 0.0 : std::arg(z);
        std::vector<std::complex<double>> coeffs(static_cast<size_t>(order) + 1);
        for (int n = 0; n <= order; ++n) {
            if (sign[n] == 0) continue;
            const double mag = std::exp(log_c[n] - 0.5 * tail.log_total);
            coeffs[n] = static_cast<double>(sign[n]) * mag * std::polar(1.0, theta * n);
        }
        double sum2 = 0.0, comp = 0.0;
        for (const auto& c : coeffs) {
            const double term = std::norm(c) - comp;
            const double next = sum2 + term;
            comp = (next - sum2) - term;
            sum2 = next;
        }
        const double scale = 1.0 / std::sqrt(sum2);
        for (auto& c : coeffs) c *= scale;

        // Exact-zero trailing coefficients carry no information (amplitude 0,
        // or a table nonlinearity that truncates the family); drop them so
        // the vacuum serializes as the single row it is.
        size_t last = coeffs.size();
        while (last > 1 && coeffs[last - 1] == std::complex<double>(0.0, 0.0)) --last;
        coeffs.resize(last);

        return {family, z, spec, std::move(coeffs), tail.tail_estimate, tail.log_total};
    }
}

} // namespace

StateExpansion::StateExpansion(StateFamily family, std::complex<double> amplitude, NonlinearitySpec spec,
                               std::vector<std::complex<double>> coeffs, double tail_estimate,
                               double norm_log)
    : family_(family), amplitude_(amplitude), spec_(std::move(spec)), coeffs_(std::move(coeffs)),
      tail_estimate_(tail_estimate), norm_log_(norm_log) {}

std::complex<double> StateExpansion::coefficient(int n) const {
    if (n < 0) throw InvalidArgument("coefficient: level must be >= 0");
    if (n >= static_cast<int>(coeffs_.size())) return {};
    return coeffs_[static_cast<size_t>(n)];
}

double StateExpansion::probability(int n) const { return std::norm(coefficient(n)); }

StateExpansion build_eigenstate(const NonlinearitySpec& spec, std::complex<double> alpha,
                                const TruncationPolicy& policy) {
    return build_family(StateFamily::eigenstate, spec, alpha, policy);
}

StateExpansion build_displacement_state(const NonlinearitySpec& spec, std::complex<double> beta,
                                        const TruncationPolicy& policy) {
    return build_family(StateFamily::displacement, spec, beta, policy);
}

std::string render_state_csv(const StateExpansion& state) {
    std::string out = "# {\"family\":\"";
    out += state.family() == StateFamily::eigenstate ? "eigenstate" : "displacement";
    out += "\",\"amplitude\":[" + fmt_g(state.amplitude().real()) + "," +
           fmt_g(state.amplitude().imag()) + "],\"kind\":\"";
    switch (state.spec().kind()) {
    case NonlinearityKind::identity: out += "identity"; break;
    case NonlinearityKind::trapped_ion: out += "trapped-ion"; break;
    case NonlinearityKind::table: out += "table"; break;
    }
    out += "\",\"eta\":" + fmt_g(state.spec().eta());
    out += ",\"truncation_n\":" + std::to_string(state.truncation_n());
    out += ",\"tail_estimate\":" + fmt_g(state.tail_estimate()) + "}\n";
    out += "n,re_c,im_c,prob\n";
    for (int n = 0; n <= state.truncation_n(); ++n) {
        const auto c = state.coefficient(n);
        out += std::to_string(n) + "," + fmt_g(c.real()) + "," + fmt_g(c.imag()) + "," +
               fmt_g(std::norm(c)) + "\n";
    }
    return out;
}

} // namespace nlcs
