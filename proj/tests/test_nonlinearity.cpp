#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "doctest.h"
#include "nlcs/errors.hpp"
#include "nlcs/nonlinearity.hpp"
#include "nlcs/specfun.hpp"

using namespace nlcs;

namespace {

// distance in representable doubles (same sign assumed)
int64_t ulp_distance(double a, double b) {
    int64_t ia, ib;
    std::memcpy(&ia, &a, 8);
    std::memcpy(&ib, &b, 8);
    return std::abs(ia - ib);
}

} // namespace

TEST_CASE("signed log value represents zero and signs") {
    const auto zero = SignedLogValue::from_real(0.0);
    CHECK(zero.sign == 0);
    CHECK(zero.to_real() == 0.0);
    CHECK(SignedLogValue::from_real(2.5).sign == 1);
    CHECK(SignedLogValue::from_real(-2.5).sign == -1);
    CHECK(SignedLogValue::from_real(-2.5).to_real() == doctest::Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("signed log value round trip") {
    std::mt19937 rng(42);

    // Where |ln x| <= 2 the round trip is within 1 ulp.
    std::uniform_real_distribution<double> narrow(0.14, 7.0);
    for (int i = 0; i < 20000; ++i) {
        const double x = narrow(rng);
        CHECK(ulp_distance(SignedLogValue::from_real(x).to_real(), x) <= 1);
    }

    // Across the full range the intrinsic precision of the representation is
    // |ln x| * eps: exp amplifies the rounding of the stored logarithm.
    std::uniform_real_distribution<double> decade(-300.0, 300.0);
    for (int i = 0; i < 20000; ++i) {
        const double x = std::pow(10.0, decade(rng));
        const double back = SignedLogValue::from_real(x).to_real();
        const double bound = (std::abs(std::log(x)) + 2.0) * 0x1p-52;
        CHECK(std::abs(back - x) <= bound * x);
    }
}

TEST_CASE("signed log value multiplication") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(-8.0, 8.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = (i % 2 ? -1.0 : 1.0) * std::exp(mag(rng));
        const double b = (i % 3 ? 1.0 : -1.0) * std::exp(mag(rng));
        const auto p = SignedLogValue::from_real(a) * SignedLogValue::from_real(b);
        CHECK(p.to_real() == doctest::Approx(a * b).epsilon(1e-13));
    }
    const auto z = SignedLogValue::from_real(3.0) * SignedLogValue::from_real(0.0);
    CHECK(z.sign == 0);
    CHECK(z.to_real() == 0.0);
}

TEST_CASE("identity nonlinearity is one at every level") {
    const auto spec = NonlinearitySpec::identity();
    for (int n = 0; n <= 100; ++n) CHECK(spec.f(n) == 1.0);
    const auto prefix = spec.f_factorial_prefix(50);
    for (const auto& v : prefix) {
        CHECK(v.sign == 1);
        CHECK(v.log_magnitude == 0.0);
    }
}

TEST_CASE("trapped-ion eta = 0 reduces to the identity exactly") {
    const auto spec = NonlinearitySpec::trapped_ion(0.0);
    for (int n = 0; n <= 30; ++n) CHECK(spec.f(n) == 1.0);
}

TEST_CASE("trapped-ion low-order closed forms at eta = 0.2") {
    const auto spec = NonlinearitySpec::trapped_ion(0.2);
    const double x = 0.04;
    CHECK(spec.f(0) == 1.0);
    // f(1) = (2 - x) / (2 (1 - x))
    CHECK(spec.f(1) == doctest::Approx((2.0 - x) / (2.0 * (1.0 - x))).epsilon(1e-15));
    CHECK(spec.f(1) == doctest::Approx(1.96 / 1.92).epsilon(1e-15));
    // f(2) = (x^2/2 - 3x + 3) / (3 (x^2/2 - 2x + 1))
    const double num = 0.5 * x * x - 3.0 * x + 3.0;
    const double den = 3.0 * (0.5 * x * x - 2.0 * x + 1.0);
    CHECK(spec.f(2) == doctest::Approx(num / den).epsilon(1e-15));
}

TEST_CASE("factorial prefix equals pointwise factorials") {
    for (double eta : {0.0, 0.1, 0.2, 0.3}) {
        const auto spec = NonlinearitySpec::trapped_ion(eta);
        const auto prefix = spec.f_factorial_prefix(64);
        for (int k = 0; k <= 64; k += 7) {
            const auto single = spec.f_factorial(k);
            CHECK(single.sign == prefix[k].sign);
            CHECK(single.log_magnitude == prefix[k].log_magnitude);
        }
    }
}

TEST_CASE("factorial ratio recovers the nonlinearity value") {
    for (double eta : {0.1, 0.2, 0.3}) {
        const auto spec = NonlinearitySpec::trapped_ion(eta);
        const auto prefix = spec.f_factorial_prefix(40);
        for (int n = 1; n <= 40; ++n) {
            const double ratio = prefix[n].to_real() / prefix[n - 1].to_real();
            CHECK(ratio == doctest::Approx(spec.f(n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("eta continuity near zero") {
    const auto spec = NonlinearitySpec::trapped_ion(1e-8);
    for (int n = 0; n <= 20; ++n) CHECK(std::abs(spec.f(n) - 1.0) < 1e-6);
}

TEST_CASE("trapped-ion nonlinearity goes negative past a Laguerre zero") {
    const auto spec = NonlinearitySpec::trapped_ion(0.3);
    bool found_negative = false;
    int first_negative = -1;
    for (int n = 1; n <= 64 && !found_negative; ++n) {
        if (spec.f(n) < 0.0) {
            found_negative = true;
            first_negative = n;
        }
    }
    REQUIRE(found_negative);

    // sign tracking in the running product must flip at exactly that level
    const auto prefix = spec.f_factorial_prefix(first_negative);
    CHECK(prefix[first_negative - 1].sign == 1);
    CHECK(prefix[first_negative].sign == -1);
}

TEST_CASE("singular denominator guard aborts loudly") {
    // eta^2 placed on the smallest root of L_5, found numerically beforehand
    const double eta_singular = std::sqrt(0.2635603197181409);
    const auto spec = NonlinearitySpec::trapped_ion(eta_singular);
    CHECK_THROWS_AS(spec.f(5), SingularDenominator);
    try {
        spec.f_factorial(8);
        FAIL("expected SingularDenominator");
    } catch (const SingularDenominator& e) {
        CHECK(e.level() == 5);
        CHECK(std::string(e.what()).find("n=5") != std::string::npos);
    }
    // a permissive guard turns the spike back into a (huge) finite value
    const auto loose = NonlinearitySpec::trapped_ion(eta_singular, 1e-20);
    CHECK(std::isfinite(loose.f(5)));
    CHECK(std::abs(loose.f(5)) > 1e6);
}

TEST_CASE("table nonlinearity") {
    const auto spec = NonlinearitySpec::table({1.5, 0.5, -2.0});
    CHECK(spec.f(0) == 1.0);
    CHECK(spec.f(1) == 1.5);
    CHECK(spec.f(3) == -2.0);
    CHECK(spec.max_level() == 3);
    CHECK_THROWS_AS(spec.f(4), InvalidArgument);

    const auto prefix = spec.f_factorial_prefix(3);
    CHECK(prefix[2].to_real() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(prefix[3].sign == -1);
    CHECK(prefix[3].to_real() == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("table zero entry zeroes the factorial from there on") {
    const auto spec = NonlinearitySpec::table({1.0, 0.0, 2.0});
    const auto prefix = spec.f_factorial_prefix(3);
    CHECK(prefix[1].sign == 1);
    CHECK(prefix[2].sign == 0);
    CHECK(prefix[3].sign == 0);
    CHECK(prefix[3].to_real() == 0.0);
}

TEST_CASE("table file parsing") {
    const std::string path = "nlcs_table_test.txt";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("# comment line\n1.25\n\n  0.75\n# trailing comment\n-0.5\n", f);
        std::fclose(f);
    }
    const auto spec = NonlinearitySpec::table_from_file(path);
    CHECK(spec.max_level() == 3);
    CHECK(spec.f(1) == 1.25);
    CHECK(spec.f(2) == 0.75);
    CHECK(spec.f(3) == -0.5);
    std::remove(path.c_str());

    CHECK_THROWS_AS(NonlinearitySpec::table_from_file("does_not_exist.txt"), InvalidArgument);
}

TEST_CASE("table file rejects junk") {
    const std::string path = "nlcs_table_bad.txt";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("1.0\nnot-a-number\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(NonlinearitySpec::table_from_file(path), InvalidArgument);
    std::remove(path.c_str());
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(NonlinearitySpec::trapped_ion(-0.1), InvalidArgument);
    CHECK_THROWS_AS(NonlinearitySpec::trapped_ion(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(NonlinearitySpec::trapped_ion(0.2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(NonlinearitySpec::table({1.0, std::nan("")}), InvalidArgument);
    const auto spec = NonlinearitySpec::identity();
    CHECK_THROWS_AS(spec.f(-1), InvalidArgument);
    CHECK_THROWS_AS(spec.f_factorial(-2), InvalidArgument);
}
