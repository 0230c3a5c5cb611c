#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlcs/errors.hpp"
#include "nlcs/states.hpp"

using namespace nlcs;
using cplx = std::complex<double>;

namespace {

double total_probability(const StateExpansion& state) {
    double acc = 0.0;
    for (const auto& c : state.coeffs()) acc += std::norm(c);
    return acc;
}

double mean_occupation(const StateExpansion& state) {
    double acc = 0.0;
    for (int n = 0; n <= state.truncation_n(); ++n) acc += n * state.probability(n);
    return acc;
}

// reference coherent-state coefficient for real amplitude
double coherent_coefficient(double z, int n) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return std::exp(-0.5 * z * z) * std::pow(z, n) / std::sqrt(fact);
}

} // namespace

TEST_CASE("vacuum amplitude gives the single-row vacuum in both families") {
    for (auto family : {StateFamily::eigenstate, StateFamily::displacement}) {
        const auto spec = NonlinearitySpec::identity();
        const auto state = family == StateFamily::eigenstate
                               ? build_eigenstate(spec, 0.0)
                               : build_displacement_state(spec, 0.0);
        CHECK(state.truncation_n() == 0);
        CHECK(state.coefficient(0) == cplx{1.0, 0.0});
        CHECK(state.coefficient(3) == cplx{0.0, 0.0});
        CHECK(state.probability(0) == 1.0);
        CHECK(state.tail_estimate() == 0.0);
    }
}

TEST_CASE("identity nonlinearity reproduces the standard coherent state") {
    const auto spec = NonlinearitySpec::identity();
    const auto state = build_eigenstate(spec, 0.5);
    for (int n = 0; n <= 20; ++n) {
        const double expect = coherent_coefficient(0.5, n);
        CHECK(state.coefficient(n).real() == doctest::Approx(expect).epsilon(1e-12));
        CHECK(state.coefficient(n).imag() == 0.0);
    }
}

TEST_CASE("the two families coincide elementwise for the identity nonlinearity") {
    const auto spec = NonlinearitySpec::identity();
    const auto eig = build_eigenstate(spec, 0.5);
    const auto dis = build_displacement_state(spec, 0.5);
    REQUIRE(eig.truncation_n() == dis.truncation_n());
    for (int n = 0; n <= eig.truncation_n(); ++n)
        CHECK(std::abs(eig.coefficient(n) - dis.coefficient(n)) < 1e-12);
}

TEST_CASE("normalization holds across the working grid") {
    for (double eta : {0.0, 0.1, 0.2, 0.3}) {
        const auto spec = NonlinearitySpec::trapped_ion(eta);
        for (double beta : {0.2, 0.5, 0.8, 1.0}) {
            const auto dis = build_displacement_state(spec, beta);
            CHECK(std::abs(total_probability(dis) - 1.0) < 1e-12);
            const auto eig = build_eigenstate(spec, beta);
            CHECK(std::abs(total_probability(eig) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("phase covariance: rotating the amplitude rotates coefficients") {
    const auto spec = NonlinearitySpec::trapped_ion(0.2);
    const auto base = build_displacement_state(spec, 0.6);
    for (double theta : {0.3, 1.2, 2.9, -0.7}) {
        const auto rotated = build_displacement_state(spec, std::polar(0.6, theta));
        REQUIRE(rotated.truncation_n() == base.truncation_n());
        for (int n = 0; n <= base.truncation_n(); ++n) {
            CHECK(std::abs(rotated.coefficient(n)) ==
                  doctest::Approx(std::abs(base.coefficient(n))).epsilon(1e-12));
            const cplx expect = base.coefficient(n) * std::polar(1.0, n * theta);
            CHECK(std::abs(rotated.coefficient(n) - expect) < 1e-12);
        }
    }
}

TEST_CASE("identity-family occupation is Poisson with mean |z|^2") {
    const auto spec = NonlinearitySpec::identity();
    for (double z : {0.4, 0.9, 1.5}) {
        const auto state = build_displacement_state(spec, z);
        CHECK(std::abs(mean_occupation(state) - z * z) < 1e-10);
        double pmf = std::exp(-z * z); // Poisson(z^2) at n = 0
        for (int n = 0; n <= 12; ++n) {
            CHECK(state.probability(n) == doctest::Approx(pmf).epsilon(1e-10));
            pmf *= z * z / (n + 1);
        }
    }
}

TEST_CASE("coefficient ratios follow the construction rule") {
    const auto spec = NonlinearitySpec::trapped_ion(0.2);
    const double beta = 0.5;
    const auto dis = build_displacement_state(spec, beta);
    const auto eig = build_eigenstate(spec, beta);
    for (int n = 0; n < 20; ++n) {
        const double f_next = spec.f(n + 1);
        const cplx r_dis = dis.coefficient(n + 1) / dis.coefficient(n);
        CHECK(r_dis.real() ==
              doctest::Approx(beta * f_next / std::sqrt(n + 1.0)).epsilon(1e-12));
        const cplx r_eig = eig.coefficient(n + 1) / eig.coefficient(n);
        CHECK(r_eig.real() ==
              doctest::Approx(beta / (f_next * std::sqrt(n + 1.0))).epsilon(1e-12));
    }
}

TEST_CASE("truncation metadata is coherent") {
    const auto spec = NonlinearitySpec::trapped_ion(0.2);
    const TruncationPolicy policy;
    const auto state = build_displacement_state(spec, 0.8, policy);
    CHECK(state.truncation_n() >= 16);
    CHECK(state.truncation_n() <= policy.max_order);
    CHECK(state.tail_estimate() <= policy.tail_tol);
    CHECK(std::isfinite(state.norm_log()));
    // the pre-normalization sum is at least the n = 0 weight for |beta| < 1
    CHECK(state.norm_log() > 0.0);
}

TEST_CASE("divergence is reported when the order cap is too small") {
    const auto spec = NonlinearitySpec::identity();
    TruncationPolicy policy;
    policy.initial_floor = 16;
    policy.max_order = 16;
    CHECK_THROWS_AS(build_displacement_state(spec, 3.0, policy), Divergence);
    try {
        build_displacement_state(spec, 3.0, policy);
        FAIL("expected Divergence");
    } catch (const Divergence& e) {
        CHECK(e.order() == 16);
    }
}

TEST_CASE("eigenstate family refuses a vanishing nonlinearity level") {
    const auto spec = NonlinearitySpec::table({1.0, 0.0, 2.0});
    try {
        build_eigenstate(spec, 0.3, {.initial_floor = 2, .max_order = 3, .window = 2});
        FAIL("expected ZeroNonlinearity");
    } catch (const ZeroNonlinearity& e) {
        CHECK(e.level() == 2);
    }
}

TEST_CASE("displacement family truncates naturally at a nonlinearity zero") {
    const auto spec = NonlinearitySpec::table({1.0, 0.0, 2.0});
    const auto state =
        build_displacement_state(spec, 0.7, {.initial_floor = 2, .max_order = 3, .window = 2});
    CHECK(state.truncation_n() == 1);
    CHECK(std::abs(total_probability(state) - 1.0) < 1e-14);
    CHECK(state.probability(1) > 0.0);
}

TEST_CASE("amplitude validation") {
    const auto spec = NonlinearitySpec::identity();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(build_displacement_state(spec, cplx{inf, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(build_eigenstate(spec, cplx{0.0, std::nan("")}), InvalidArgument);
    const auto state = build_displacement_state(spec, 0.5);
    CHECK_THROWS_AS(state.coefficient(-1), InvalidArgument);
}

TEST_CASE("state CSV rendering") {
    const auto spec = NonlinearitySpec::identity();
    const auto vacuum = build_displacement_state(spec, 0.0);
    CHECK(render_state_csv(vacuum) ==
          "# {\"family\":\"displacement\",\"amplitude\":[0,0],\"kind\":\"identity\",\"eta\":0,"
          "\"truncation_n\":0,\"tail_estimate\":0}\n"
          "n,re_c,im_c,prob\n"
          "0,1,0,1\n");

    const auto ion = build_displacement_state(NonlinearitySpec::trapped_ion(0.2), 0.5);
    const auto text = render_state_csv(ion);
    CHECK(text.find("\"kind\":\"trapped-ion\"") != std::string::npos);
    CHECK(text.find("\"eta\":0.2") != std::string::npos);
    CHECK(text.find("n,re_c,im_c,prob\n") != std::string::npos);
    // one data row per level plus the two header lines
    const auto rows = std::count(text.begin(), text.end(), '\n');
    CHECK(rows == ion.truncation_n() + 1 + 2);
}
