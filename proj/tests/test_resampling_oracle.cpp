#include "spa/resampling_oracle.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spa;

namespace {

bool naive_favorable(const std::vector<double>& x, std::uint64_t mask) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask >> i & 1u) s += x[i];
    }
    return s <= 0.0L;
}

}  // namespace

TEST_CASE("exact enumeration examples") {
    const ExactResult a = exact_enumeration(Sample({1.0, 2.0, 3.0}));
    CHECK(a.total == 8);
    CHECK(a.favorable == 1);
    CHECK(a.ties == 1);
    CHECK(a.p == 0.125L);

    CHECK(exact_enumeration(Sample({1.0, 1.0})).p == 0.25L);
    for (double a2 : {0.3, 1.0, 17.25}) {
        const ExactResult r = exact_enumeration(Sample({a2, -a2}));
        CHECK(r.p == 0.75L);
        CHECK(r.ties == 2);
    }
    const ExactResult z = exact_enumeration(Sample({0.0, 0.0, 0.0}));
    CHECK(z.p == 1.0L);
    CHECK(z.ties == 8);
}

TEST_CASE("exact enumeration size cap") {
    CHECK_NOTHROW(exact_enumeration(Sample(std::vector<double>(20, 1.0))));
    CHECK_THROWS_AS(exact_enumeration(Sample(std::vector<double>(31, 1.0))), TooLargeError);
    CHECK_THROWS_AS(exact_enumeration(Sample(std::vector<double>(40, 1.0))), TooLargeError);
}

TEST_CASE("exact enumeration matches naive enumeration") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; ++t) {
        auto x = testing::random_data(rng, 1 + t % 12, 2.0);
        std::uint64_t fav = 0;
        for (std::uint64_t m = 0; m < (1ull << x.size()); ++m) fav += naive_favorable(x, m);
        CHECK(exact_enumeration(Sample(x)).favorable == fav);
    }
}

TEST_CASE("Gray-code subset sums equal naive re-summation") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        const auto x = testing::random_data(rng, 1 + t % 12, 10.0);
        const detail::ExactSummands xs(x);
        REQUIRE(xs.fits_int128());
        const auto sums = detail::gray_code_subset_sums(xs);
        REQUIRE(sums.size() == (1ull << x.size()));
        for (std::uint64_t k = 0; k < sums.size(); ++k) {
            const std::uint64_t mask = detail::gray_code(k);
            __int128 direct = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (mask >> i & 1u) direct += xs.fixed()[i];
            }
            CHECK(sums[k] == direct);
        }
    }
}

TEST_CASE("Gray code visits every subset once, one bit at a time") {
    std::vector<bool> seen(1u << 10, false);
    for (std::uint64_t k = 0; k < seen.size(); ++k) {
        const std::uint64_t g = detail::gray_code(k);
        CHECK_FALSE(seen[g]);
        seen[g] = true;
        if (k > 0) CHECK(__builtin_popcountll(g ^ detail::gray_code(k - 1)) == 1);
    }
}

TEST_CASE("exact summands detect ties") {
    const detail::ExactSummands xs(std::vector<double>{0.5, 0.25, -0.75});
    REQUIRE(xs.fits_int128());
    CHECK(xs.fixed()[0] + xs.fixed()[1] + xs.fixed()[2] == 0);
    // Empty set and the full set both sum to zero.
    const ExactResult r = exact_enumeration(Sample({0.5, 0.25, -0.75}));
    CHECK(r.ties == 2);
    CHECK(r.favorable == 5);
}

TEST_CASE("wide exponent spans stay exact") {
    const detail::ExactSummands wide(std::vector<double>{1e300, 1e-300});
    CHECK_FALSE(wide.fits_int128());
    // Only the empty flip set has a nonpositive sum.
    CHECK(exact_enumeration(Sample({1e300, 1e-300})).p == 0.25L);
    CHECK(exact_enumeration(Sample({1e300, -1e300, 1e-300})).ties == 2);
    CHECK(exact_enumeration(Sample({1e300, -1e300, 1e-300})).favorable == 4);
    CHECK(exact_enumeration(Sample({1e300, 1e-300, -1e300}), 4).favorable == 4);
    CHECK(exact_enumeration(Sample({1e30, 1e-30, -1e30, 3.0})).favorable ==
          exact_enumeration(Sample({1e30, 1e-30, -1e30, 3.0}), 8).favorable);
    // Deep subnormal to near-max span.
    const double tiny = 4.9406564584124654e-324;
    const ExactResult r = exact_enumeration(Sample({1.7e308, tiny, -1.7e308, -tiny}));
    CHECK(r.ties == 4);
    const McResult m = mc_pvalue(Sample({1e300, 1e-300}), 40000, 5);
    CHECK(m.ci_low <= 0.25L);
    CHECK(m.ci_high >= 0.25L);
}

TEST_CASE("exact complement p(X) + p(-X) - p_tie = 1") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x = testing::random_data(rng, 1 + t % 16, 3.0);
        // Half the cases use small integers so ties occur.
        if (t % 2 == 0) {
            for (double& v : x) v = std::round(v);
        }
        std::vector<double> neg = x;
        for (double& v : neg) v = -v;
        const ExactResult a = exact_enumeration(Sample(x));
        const ExactResult b = exact_enumeration(Sample(neg));
        CHECK(a.ties == b.ties);
        CHECK(a.favorable + b.favorable - a.ties == a.total);
        CHECK(a.p + b.p - a.p_tie == 1.0L);
    }
}

TEST_CASE("exact and MC oracles are thread-count invariant") {
    std::mt19937_64 rng(13);
    const Sample s(testing::random_data(rng, 22, 1.0));
    const ExactResult e1 = exact_enumeration(s, 1);
    const McResult m1 = mc_pvalue(s, 20001, 99, 1);
    for (unsigned th : {2u, 4u, 8u}) {
        const ExactResult e = exact_enumeration(s, th);
        CHECK(e.favorable == e1.favorable);
        CHECK(e.ties == e1.ties);
        const McResult m = mc_pvalue(s, 20001, 99, th);
        CHECK(m.favorable == m1.favorable);
    }
}

TEST_CASE("MC basics") {
    const Sample s({1.0, 2.0, 3.0});
    const McResult m = mc_pvalue(s, 200000, 1);
    CHECK(m.b == 200000);
    CHECK(m.seed == 1);
    CHECK(m.ci_low <= 0.125L);
    CHECK(m.ci_high >= 0.125L);
    CHECK(m.p_hat == static_cast<long double>(m.favorable) / 200000.0L);

    const McResult one = mc_pvalue(s, 1, 3);
    CHECK((one.p_hat == 0.0L || one.p_hat == 1.0L));
    CHECK(mc_pvalue(s, 5000, 42).favorable == mc_pvalue(s, 5000, 42).favorable);
    CHECK(mc_pvalue(s, 5000, 42).favorable != mc_pvalue(s, 5000, 43).favorable);
    CHECK_THROWS_AS(mc_pvalue(s, 0, 1), std::invalid_argument);
}

TEST_CASE("MC estimate lies within the 99.9% Wilson half-width of the exact value") {
    std::mt19937_64 rng(19);
    const Sample s(testing::random_data(rng, 14, 1.0));
    const long double p = exact_enumeration(s).p;
    const std::uint64_t b = 4000;
    const Interval ref = wilson_interval(static_cast<std::uint64_t>(std::llround(p * b)), b, kZ999);
    const long double half = 0.5L * (ref.high - ref.low);
    int inside = 0;
    const int runs = 1000;
    for (int seed = 0; seed < runs; ++seed) {
        inside += std::fabs(mc_pvalue(s, b, static_cast<std::uint64_t>(seed)).p_hat - p) <= half;
    }
    CHECK(inside >= 990);
}

TEST_CASE("Wilson interval") {
    const Interval a = wilson_interval(0, 100, kZ99);
    CHECK(a.low == 0.0L);
    CHECK(a.high > 0.0L);
    const Interval b = wilson_interval(100, 100, kZ99);
    CHECK(b.high == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.low < 1.0L);
    const Interval c = wilson_interval(50, 100, kZ99);
    CHECK(c.low == doctest::Approx(1.0 - static_cast<double>(c.high)).epsilon(1e-15));
    CHECK_THROWS_AS(wilson_interval(1, 0, kZ99), std::invalid_argument);
}

TEST_CASE("compare rows") {
    const Sample s({1.0, 2.0, 3.0});
    const SignFlipReport rep = spa_pvalue(s);
    const ComparisonRow row = compare(rep, exact_enumeration(s));
    CHECK(row.n == 3);
    CHECK(row.p_oracle == 0.125L);
    REQUIRE(row.rel_err_lr.has_value());
    CHECK(*row.rel_err_lr == rep.p_lr.value() / 0.125L - 1.0L);
    CHECK_FALSE(row.flagged);

    const ComparisonRow small_b = compare(rep, mc_pvalue(s, 100, 1));
    CHECK(small_b.oracle_noisy);
    CHECK(small_b.flagged);

    // An oracle of exactly zero leaves the relative error undefined.
    McResult zero;
    zero.b = 10;
    const ComparisonRow z = compare(rep, zero);
    CHECK_FALSE(z.rel_err_lr.has_value());
    CHECK(z.flagged);
    CHECK(to_json(z, zero).find("\"rel_err_lr\": null") != std::string::npos);

    const std::string j = to_json(row, exact_enumeration(s));
    CHECK(j.find("\"oracle\": \"exact\"") != std::string::npos);
    CHECK(j.find("\"ties\": 1") != std::string::npos);
}
