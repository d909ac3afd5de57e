#include "spa/spa.h"

#include "spa/experiments.hpp"
#include "spa/resampling_oracle.hpp"
#include "spa/sample_io.hpp"
#include "spa/selftest.hpp"
#include "spa/signflip_test.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <string>

struct spa_sample {
    spa::Sample sample;
};

struct spa_report {
    spa::SignFlipReport report;
    std::string json;
};

struct spa_comparison {
    spa::ComparisonRow row;
    std::string json;
};

struct spa_experiment {
    spa::ExperimentConfig cfg;
};

struct spa_run {
    spa::RunReport report;
    std::string csv;
    std::string summary;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_selftest_text;

spa_status fail(spa_status code, const char* msg) {
    g_last_error = msg;
    return code;
}

// Maps the core's exception types onto status codes.
template <class F>
spa_status guarded(F&& fn) {
    try {
        fn();
        return SPA_OK;
    } catch (const spa::DegenerateSampleError& e) {
        return fail(SPA_ERR_DEGENERATE, e.what());
    } catch (const spa::TooLargeError& e) {
        return fail(SPA_ERR_TOO_LARGE, e.what());
    } catch (const spa::ConfigError& e) {
        return fail(SPA_ERR_PARSE, e.what());
    } catch (const spa::InputError& e) {
        const std::string what = e.what();
        return fail(what.rfind("cannot open", 0) == 0 || what.rfind("read error", 0) == 0 ? SPA_ERR_IO
                                                                                            : SPA_ERR_PARSE,
                    e.what());
    } catch (const std::domain_error& e) {
        return fail(SPA_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SPA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SPA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SPA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SPA_ERR_INTERNAL, "unknown error");
    }
}

spa::SaddleConfig to_core(const spa_saddle_config* cfg) {
    spa::SaddleConfig out;
    if (cfg) {
        out.tol_residual = cfg->tol_residual;
        out.tol_s = cfg->tol_s;
        out.eta_flat = cfg->eta_flat;
        out.max_iter = cfg->max_iter;
    }
    return out;
}

spa_saddle_status to_c(spa::SaddleStatus s) {
    switch (s) {
        case spa::SaddleStatus::zero: return SPA_SADDLE_ZERO;
        case spa::SaddleStatus::interior_unique: return SPA_SADDLE_INTERIOR_UNIQUE;
        case spa::SaddleStatus::boundary_fallback: return SPA_SADDLE_BOUNDARY_FALLBACK;
        case spa::SaddleStatus::flat_fallback: return SPA_SADDLE_FLAT_FALLBACK;
    }
    return SPA_SADDLE_ZERO;
}

double opt_to_double(const std::optional<long double>& v) {
    return v ? static_cast<double>(*v) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

extern "C" {

const char* spa_version(void) { return "1.0.0"; }

const char* spa_status_string(spa_status status) {
    switch (status) {
        case SPA_OK: return "ok";
        case SPA_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SPA_ERR_IO: return "i/o error";
        case SPA_ERR_PARSE: return "parse error";
        case SPA_ERR_DEGENERATE: return "degenerate sample";
        case SPA_ERR_TOO_LARGE: return "problem too large";
        case SPA_ERR_DOMAIN: return "domain error";
        case SPA_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* spa_last_error(void) { return g_last_error.c_str(); }

void spa_saddle_config_default(spa_saddle_config* cfg) {
    if (!cfg) return;
    const spa::SaddleConfig d;
    cfg->tol_residual = d.tol_residual;
    cfg->tol_s = d.tol_s;
    cfg->eta_flat = d.eta_flat;
    cfg->max_iter = d.max_iter;
}

spa_status spa_sample_create(const double* x, size_t n, spa_sample** out) {
    if (!out || (!x && n > 0)) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new spa_sample{spa::Sample(std::vector<double>(x, x + n))}; });
}

spa_status spa_sample_load_csv(const char* path, spa_sample** out) {
    if (!out || !path) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new spa_sample{spa::load_sample_csv(path)}; });
}

size_t spa_sample_size(const spa_sample* sample) { return sample ? sample->sample.size() : 0; }

void spa_sample_free(spa_sample* sample) { delete sample; }

spa_status spa_pvalue(const spa_sample* sample, const spa_saddle_config* cfg, spa_report** out) {
    if (!sample || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        spa::SignFlipReport rep = spa::spa_pvalue(sample->sample, to_core(cfg));
        std::string json = spa::to_json(rep);
        *out = new spa_report{rep, std::move(json)};
    });
}

spa_status spa_report_get(const spa_report* report, spa_report_view* out) {
    if (!report || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    const spa::SignFlipReport& r = report->report;
    *out = spa_report_view{r.n,
                           r.w,
                           r.s_hat,
                           r.lambda,
                           r.r,
                           r.p_lr.to_double(),
                           r.p_rob.to_double(),
                           r.p_clt.to_double(),
                           to_c(r.saddle_status),
                           r.clamped ? 1 : 0,
                           r.converged ? 1 : 0,
                           r.diag.m2,
                           r.diag.m4,
                           r.diag.nu_max};
    return SPA_OK;
}

const char* spa_report_json(const spa_report* report) { return report ? report->json.c_str() : ""; }

void spa_report_free(spa_report* report) { delete report; }

spa_status spa_exact_pvalue(const spa_sample* sample, unsigned threads, spa_exact_view* out) {
    if (!sample || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const spa::ExactResult e = spa::exact_enumeration(sample->sample, threads);
        *out = spa_exact_view{e.favorable, e.total, e.ties, static_cast<double>(e.p)};
    });
}

spa_status spa_mc_pvalue(const spa_sample* sample, uint64_t b, uint64_t seed, unsigned threads, spa_mc_view* out) {
    if (!sample || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const spa::McResult m = spa::mc_pvalue(sample->sample, b, seed, threads);
        *out = spa_mc_view{m.favorable,
                           m.b,
                           m.seed,
                           static_cast<double>(m.p_hat),
                           static_cast<double>(m.ci_low),
                           static_cast<double>(m.ci_high)};
    });
}

spa_status spa_compare(const spa_sample* sample, const spa_saddle_config* cfg, spa_oracle_kind oracle, uint64_t b,
                       uint64_t seed, unsigned threads, spa_comparison** out) {
    if (!sample || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    if (oracle != SPA_ORACLE_EXACT && oracle != SPA_ORACLE_MC) {
        return fail(SPA_ERR_INVALID_ARGUMENT, "unknown oracle kind");
    }
    *out = nullptr;
    return guarded([&] {
        const spa::SignFlipReport rep = spa::spa_pvalue(sample->sample, to_core(cfg));
        spa::OracleResult res;
        if (oracle == SPA_ORACLE_EXACT) {
            res = spa::exact_enumeration(sample->sample, threads);
        } else {
            res = spa::mc_pvalue(sample->sample, b, seed, threads);
        }
        spa::ComparisonRow row = spa::compare(rep, res);
        std::string json = spa::to_json(row, res);
        *out = new spa_comparison{row, std::move(json)};
    });
}

spa_status spa_comparison_get(const spa_comparison* cmp, spa_comparison_view* out) {
    if (!cmp || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    const spa::ComparisonRow& r = cmp->row;
    *out = spa_comparison_view{r.n,
                               r.w,
                               static_cast<double>(r.p_lr),
                               static_cast<double>(r.p_rob),
                               static_cast<double>(r.p_oracle),
                               opt_to_double(r.rel_err_lr),
                               opt_to_double(r.rel_err_rob),
                               r.oracle_noisy ? 1 : 0,
                               r.flagged ? 1 : 0};
    return SPA_OK;
}

const char* spa_comparison_json(const spa_comparison* cmp) { return cmp ? cmp->json.c_str() : ""; }

void spa_comparison_free(spa_comparison* cmp) { delete cmp; }

spa_status spa_experiment_load(const char* path, spa_experiment** out) {
    if (!path || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new spa_experiment{spa::load_experiment_config(path)}; });
}

spa_status spa_experiment_parse(const char* text, spa_experiment** out) {
    if (!text || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new spa_experiment{spa::parse_experiment_config(text)}; });
}

void spa_experiment_free(spa_experiment* exp) { delete exp; }

spa_status spa_experiment_run(const spa_experiment* exp, unsigned threads, spa_run** out) {
    if (!exp || !out) return fail(SPA_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        spa::RunReport rep = spa::run_convergence(exp->cfg, threads);
        std::string csv = spa::to_csv(rep);
        std::string summary = spa::summary_json(rep);
        *out = new spa_run{std::move(rep), std::move(csv), std::move(summary)};
    });
}

size_t spa_run_row_count(const spa_run* run) { return run ? run->report.rows.size() : 0; }

const char* spa_run_csv(const spa_run* run) { return run ? run->csv.c_str() : ""; }

const char* spa_run_summary_json(const spa_run* run) { return run ? run->summary.c_str() : ""; }

void spa_run_free(spa_run* run) { delete run; }

spa_status spa_selftest(int* failures, const char** summary) {
    return guarded([&] {
        const auto checks = spa::run_selftest();
        int failed = 0;
        g_selftest_text.clear();
        for (const auto& c : checks) {
            g_selftest_text += c.passed ? "PASS " : "FAIL ";
            g_selftest_text += c.name;
            g_selftest_text += '\n';
            failed += c.passed ? 0 : 1;
        }
        if (failures) *failures = failed;
        if (summary) *summary = g_selftest_text.c_str();
    });
}

}  // extern "C"
