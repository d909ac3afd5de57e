#include "spa/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace spa;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.n_grid = {8, 12};
    cfg.replicates = 5;
    cfg.seed = 2024;
    return cfg;
}

struct Moments {
    double mean;
    double var;
    double m4;
    double odd3;
};

std::vector<double> vec(const Sample& s) { return {s.values().begin(), s.values().end()}; }

Moments moments(const Sample& s) {
    long double a = 0, b = 0, c = 0, d = 0;
    for (double v : s.values()) {
        a += v;
        b += static_cast<long double>(v) * v;
        c += static_cast<long double>(v) * v * v * v;
        d += static_cast<long double>(v) * v * v;
    }
    const long double n = static_cast<long double>(s.size());
    return {static_cast<double>(a / n), static_cast<double>(b / n), static_cast<double>(c / n),
            static_cast<double>(d / n)};
}

}  // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_experiment_config(
        "# comment line\n"
        "n_grid = (8, 12, 16)\n"
        "replicates = 10   # trailing comment\n"
        "error_family = student_t(7)\n"
        "regime = moderate\n"
        "c = 0.5\n"
        "alpha = 0.3\n"
        "seed = 99\n"
        "oracle = mc(5000)\n");
    CHECK(cfg.n_grid == std::vector<std::size_t>{8, 12, 16});
    CHECK(cfg.replicates == 10);
    CHECK(cfg.error_family == ErrorFamily::student_t);
    CHECK(cfg.df == 7);
    CHECK(cfg.regime == Regime::moderate);
    CHECK(cfg.c == 0.5);
    CHECK(cfg.alpha == 0.3);
    CHECK(cfg.seed == 99);
    CHECK(cfg.oracle == OracleKind::mc);
    CHECK(cfg.b == 5000);

    const ExperimentConfig d = parse_experiment_config("n_grid = 4\nreplicates = 1\nerror_family = student_t\n");
    CHECK(d.df == 5);
    CHECK(d.oracle == OracleKind::exact);
}

TEST_CASE("config errors") {
    const char* bad[] = {
        "n_grid = 8\nreplicates = 0\n",
        "n_grid = 8\n",
        "replicates = 3\n",
        "n_grid = 8\nreplicates = 3\nfoo = 1\n",
        "n_grid = 8\nreplicates = 3\nreplicates = 4\n",
        "n_grid = 8\nreplicates = 3\nerror_family = cauchy\n",
        "n_grid = 8\nreplicates = 3\nerror_family = student_t(3)\n",
        "n_grid = 8\nreplicates = 3\nregime = moderate\nalpha = 0.5\n",
        "n_grid = 40\nreplicates = 3\n",
        "n_grid = 8\nreplicates = 3\noracle = mc(0)\n",
        "n_grid = 8\nreplicates = abc\n",
        "n_grid = 8, 0\nreplicates = 3\n",
        "n_grid = 8\nreplicates = 3\nscale = -1\nerror_family = scaled_rademacher\n",
        "just some text\n",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_experiment_config(text), ConfigError);
    }
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/dir/cfg.txt"), ConfigError);
    CHECK_NOTHROW(parse_experiment_config("n_grid = 40\nreplicates = 3\noracle = mc(100)\n"));
}

TEST_CASE("location model is deterministic in (seed, n, replicate)") {
    const ExperimentConfig cfg = base_config();
    const std::vector<double> a = vec(generate_location_model(cfg, 50, 3));
    CHECK(a == vec(generate_location_model(cfg, 50, 3)));
    CHECK(a != vec(generate_location_model(cfg, 50, 4)));
    CHECK(a != vec(generate_location_model(cfg, 51, 3)));
    ExperimentConfig other = cfg;
    other.seed = 2025;
    CHECK(a != vec(generate_location_model(other, 50, 3)));
}

TEST_CASE("location means per regime") {
    ExperimentConfig cfg = base_config();
    CHECK(location_mean(cfg, 100) == 0.0);
    cfg.regime = Regime::clt;
    cfg.h = 1.0;
    CHECK(location_mean(cfg, 100) == doctest::Approx(0.1).epsilon(1e-15));
    cfg.regime = Regime::moderate;
    cfg.c = 2.0;
    cfg.alpha = 0.25;
    CHECK(location_mean(cfg, 16) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gaussian sample means within 4/sqrt(n)") {
    ExperimentConfig cfg = base_config();
    const std::size_t n = 10000;
    int inside = 0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        inside += std::fabs(generate_location_model(cfg, n, 0).mean()) <= 4.0 / std::sqrt(double(n));
    }
    CHECK(inside >= 999);
}

TEST_CASE("error-family moments") {
    ExperimentConfig cfg = base_config();
    const std::size_t n = 1000000;
    struct Case {
        ErrorFamily f;
        int df;
        double scale;
        double var;
        double m4;
    };
    // Fourth moments: gaussian 3, laplace(1) 24, t_7 3*49/(5*3), rademacher s^4.
    const Case cases[] = {{ErrorFamily::gaussian, 5, 1.0, 1.0, 3.0},
                          {ErrorFamily::laplace, 5, 1.0, 2.0, 24.0},
                          {ErrorFamily::student_t, 7, 1.0, 7.0 / 5.0, 3.0 * 49.0 / 15.0},
                          {ErrorFamily::student_t, 5, 1.0, 5.0 / 3.0, std::nan("")},
                          {ErrorFamily::scaled_rademacher, 5, 2.5, 6.25, 39.0625}};
    for (const Case& c : cases) {
        cfg.error_family = c.f;
        cfg.df = c.df;
        cfg.scale = c.scale;
        CAPTURE(to_string(c.f));
        CHECK(family_variance(cfg) == doctest::Approx(c.var).epsilon(1e-15));
        const Moments m = moments(generate_location_model(cfg, n, 0));
        CHECK(std::fabs(m.mean) <= 5.0 * std::sqrt(c.var / n));
        CHECK(std::fabs(m.var / c.var - 1.0) <= 0.05);
        if (std::isfinite(c.m4) && c.f != ErrorFamily::student_t) CHECK(std::fabs(m.m4 / c.m4 - 1.0) <= 0.05);
    }
}

TEST_CASE("generated errors are symmetric") {
    ExperimentConfig cfg = base_config();
    const std::size_t n = 400000;
    for (ErrorFamily f : {ErrorFamily::gaussian, ErrorFamily::laplace, ErrorFamily::scaled_rademacher}) {
        cfg.error_family = f;
        const Sample s = generate_location_model(cfg, n, 1);
        std::size_t pos = 0;
        for (double v : s.values()) pos += v > 0.0;
        CHECK(std::fabs(double(pos) / n - 0.5) <= 4.0 * 0.5 / std::sqrt(double(n)));
        const Moments m = moments(s);
        CHECK(std::fabs(m.odd3) <= 6.0 * std::sqrt(15.0 * family_variance(cfg) * family_variance(cfg) *
                                                   family_variance(cfg) / n) *
                                       (f == ErrorFamily::laplace ? 4.0 : 1.0));
    }
}

TEST_CASE("rademacher magnitudes") {
    ExperimentConfig cfg = base_config();
    cfg.error_family = ErrorFamily::scaled_rademacher;
    cfg.scale = 1.5;
    for (double v : generate_location_model(cfg, 200, 0).values()) CHECK(std::fabs(v) == 1.5);
}

TEST_CASE("run_convergence rows, summaries and CSV") {
    ExperimentConfig cfg = base_config();
    const RunReport rep = run_convergence(cfg);
    REQUIRE(rep.rows.size() == 10);
    CHECK(rep.rows[0].n == 8);
    CHECK(rep.rows[9].n == 12);
    CHECK(rep.rows[9].replicate == 4);
    REQUIRE(rep.summaries.size() == 2);
    CHECK(rep.summaries[0].rows == 5);

    const std::string csv = to_csv(rep);
    CHECK(csv.rfind("n,replicate,w,s_hat,saddle_status,p_lr,p_rob,p_clt,p_oracle,rel_err_lr,rel_err_rob,flagged\n", 0) ==
          0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
    CHECK(csv == to_csv(run_convergence(cfg)));
    CHECK(csv == to_csv(run_convergence(cfg, 4)));
    CHECK(summary_json(rep) == summary_json(run_convergence(cfg, 8)));
    CHECK(summary_json(rep).find("\"median_abs_rel_err_lr\"") != std::string::npos);

    cfg.oracle = OracleKind::mc;
    cfg.b = 2000;
    const std::string mc = to_csv(run_convergence(cfg, 1));
    CHECK(mc == to_csv(run_convergence(cfg, 3)));
}

TEST_CASE("quantile") {
    CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0}, 0.9) == doctest::Approx(10.0));
    CHECK(std::isnan(quantile({}, 0.5)));
}
