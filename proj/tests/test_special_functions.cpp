#include "spa/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace spa;

namespace {

double rel_err(long double got, long double want) { return static_cast<double>(std::fabs(got / want - 1.0L)); }

}  // namespace

TEST_CASE("normal_pdf") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(rel_err(normal_pdf(1.0), 0.2419707245191433498L) <= 1e-14);
    for (double x : {0.3, 1.7, 5.0, 12.5}) CHECK(normal_pdf(x) == normal_pdf(-x));
}

TEST_CASE("normal_sf values and tail") {
    CHECK(normal_sf(0.0).value() == 0.5L);
    CHECK(rel_err(normal_sf(1.0).value(), 0.15865525393145705141L) <= 1e-12);

    const long double far = normal_sf(40.0).value();
    CHECK(far > 0.0L);
    CHECK(far < 1e-300L);
    CHECK(rel_err(far, 3.6558935409150297037e-350L) <= 1e-12);
}

TEST_CASE("normal_sf reflection") {
    for (double x = -8.0; x <= 8.0; x += 0.05) {
        CHECK(std::fabs(normal_sf(x).value() + normal_sf(-x).value() - 1.0L) <= 1e-14L);
    }
}

TEST_CASE("mills_scaled values") {
    CHECK(mills_scaled(0.0).value == 0.5);
    CHECK(rel_err(mills_scaled(1.0).value, 0.26157829186512337168L) <= 1e-12);
    CHECK(rel_err(mills_scaled(2.0).value, 0.16810200122317060643L) <= 1e-12);
    CHECK(rel_err(mills_scaled(5.0).value, 0.076919304975006295965L) <= 1e-12);
    CHECK(rel_err(mills_scaled(20.0).value, 0.019897615648327031592L) <= 1e-12);
    CHECK(rel_err(mills_scaled(50.0).value, 0.0079756578919930124327L) <= 1e-12);
}

TEST_CASE("mills_scaled at 50 is bracketed by the Gaussian tail estimate") {
    // phi(50)/50 (1 - 1/2500) e^1250 <= h(50) <= phi(50)/50 e^1250, written without overflow.
    const double upper = kInvSqrt2Pi / 50.0;
    const double lower = upper * (1.0 - 1.0 / 2500.0);
    const double h = mills_scaled(50.0).value;
    CHECK(h >= lower);
    CHECK(h <= upper);
}

TEST_CASE("mills_scaled large argument and monotonicity") {
    const double x = 1e6;
    const double h = mills_scaled(x).value;
    CHECK(std::isfinite(h));
    CHECK(rel_err(h, kInvSqrt2PiL / x * (1.0L - 1.0L / (1e12L))) <= 1e-12);

    double prev = mills_scaled(-5.0).value;
    for (double t = -4.9; t <= 60.0; t += 0.1) {
        const double cur = mills_scaled(t).value;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("mills_scaled continuity across the continued-fraction switch") {
    const long double below = mills_scaled_l(8.0L - 1e-12L);
    const long double above = mills_scaled_l(8.0L + 1e-12L);
    CHECK(std::fabs(below / above - 1.0L) <= 1e-12L);
}

TEST_CASE("Gaussian tail estimate |x h(x) - 1/sqrt(2 pi)| <= 2/(sqrt(2 pi) x^2)") {
    for (double x : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double lhs = std::fabs(x * mills_scaled(x).value - kInvSqrt2Pi);
        CHECK(lhs <= 2.0 * kInvSqrt2Pi / (x * x));
    }
}

TEST_CASE("Gaussian tail lower bound 1 - Phi(x) > phi(x) x / (x^2 + 1)") {
    for (double x = 0.0; x <= 37.0; x += 0.01) {
        const long double bound = kInvSqrt2PiL * x / (x * x + 1.0) * std::exp(-0.5L * x * x);
        CHECK(normal_sf(x).value() > bound);
    }
}

TEST_CASE("gauss_tail_integral matches mills_scaled") {
    CHECK(gauss_tail_integral(0.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-12));
    for (double lam : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        CAPTURE(lam);
        CHECK(std::fabs(gauss_tail_integral(lam, 1e-12) - mills_scaled(lam).value) <= 1e-10);
    }
}

TEST_CASE("gauss_tail_integral rejects bad arguments") {
    CHECK_THROWS_AS(gauss_tail_integral(-1.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(gauss_tail_integral(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Probability rejects out-of-range values") {
    CHECK_THROWS_AS(Probability(1.5L), std::domain_error);
    CHECK_THROWS_AS(Probability(-0.1L), std::domain_error);
    CHECK_THROWS_AS(Probability(std::nanl("")), std::domain_error);
    CHECK(Probability(0.25L).to_double() == 0.25);
}
