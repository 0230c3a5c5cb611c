#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "nlcs/nonlinearity.hpp"

namespace nlcs {

enum class StateFamily { eigenstate, displacement };

/// Adaptive truncation: start at N0 = max(initial_floor, ceil(8 |z|^2)) and
/// accept N once the last `window` pre-normalization weights |c_n|^2 are each
/// below tail_tol relative to the running sum, successive ratios stay below
/// ratio_cap, and the geometric extrapolation of the remainder is below
/// tail_tol as well. Otherwise double N, up to max_order (then Divergence).
struct TruncationPolicy {
    int initial_floor = 32;
    int max_order = 4096;
    double tail_tol = 1e-16;
    int window = 8;
    double ratio_cap = 0.9;
};

/// A normalized Fock-basis expansion of one nonlinear coherent state.
class StateExpansion {
public:
    StateFamily family() const noexcept { return family_; }
    std::complex<double> amplitude() const noexcept { return amplitude_; }
    const NonlinearitySpec& spec() const noexcept { return spec_; }

    /// Normalized coefficients c_0 .. c_N.
    std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
    /// Truncation order N actually used.
    int truncation_n() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    /// Geometric bound on the discarded relative weight.
    double tail_estimate() const noexcept { return tail_estimate_; }
    /// ln of the pre-normalization squared norm (the normalization constant
    /// that was divided out, in log form).
    double norm_log() const noexcept { return norm_log_; }

    /// c_n, defined as exactly zero beyond the truncation order.
    std::complex<double> coefficient(int n) const;
    double probability(int n) const;

    StateExpansion(StateFamily family, std::complex<double> amplitude, NonlinearitySpec spec,
                   std::vector<std::complex<double>> coeffs, double tail_estimate, double norm_log);

private:
    StateFamily family_;
    std::complex<double> amplitude_;
    NonlinearitySpec spec_;
    std::vector<std::complex<double>> coeffs_;
    double tail_estimate_;
    double norm_log_;
};

/// |alpha; f> with c_n proportional to alpha^n / (sqrt(n!) f(n)!), the state
/// the deformed lowering operator a f(N) maps to alpha times itself.
/// Requires f(k) != 0 for every level the expansion touches.
StateExpansion build_eigenstate(const NonlinearitySpec& spec, std::complex<double> alpha,
                                const TruncationPolicy& policy = {});

/// |beta; f> with c_n proportional to beta^n f(n)! / sqrt(n!), produced by the
/// dual displacement operator acting on the vacuum.
StateExpansion build_displacement_state(const NonlinearitySpec& spec, std::complex<double> beta,
                                        const TruncationPolicy& policy = {});

/// CSV rendering: a '#' metadata line (family, amplitude, truncation, tail),
/// then header n,re_c,im_c,prob and one row per level. All floats %.12g.
std::string render_state_csv(const StateExpansion& state);

} // namespace nlcs
