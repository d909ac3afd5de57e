#pragma once

// Desk-scale convergence experiments: data from the location model
// X_i = mu_n + eps_i with symmetric errors, SPA p-values compared against an
// oracle over a grid of sample sizes.

#include "spa/cgf.hpp"
#include "spa/resampling_oracle.hpp"
#include "spa/saddle_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spa {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ErrorFamily { gaussian, laplace, student_t, scaled_rademacher };
enum class Regime { null, clt, moderate };
enum class OracleKind { exact, mc };

std::string_view to_string(ErrorFamily f);
std::string_view to_string(Regime r);

struct ExperimentConfig {
    std::vector<std::size_t> n_grid;
    std::size_t replicates = 0;
    ErrorFamily error_family = ErrorFamily::gaussian;
    int df = 5;          // student_t degrees of freedom, integer >= 5
    double scale = 1.0;  // scaled_rademacher magnitude
    Regime regime = Regime::null;
    double h = 0.0;      // clt: mu_n = h / sqrt(n)
    double c = 0.0;      // moderate: mu_n = c * n^-alpha
    double alpha = 0.25;
    std::uint64_t seed = 0;
    OracleKind oracle = OracleKind::exact;
    std::uint64_t b = 0;  // MC replicates

    /// Throws ConfigError on invalid combinations.
    void validate() const;
};

/// Parses flat `key = value` text; `#` starts a comment. Validates the result.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

double location_mean(const ExperimentConfig& cfg, std::size_t n);
double family_variance(const ExperimentConfig& cfg);

/// Deterministic in (cfg.seed, n, replicate_index).
Sample generate_location_model(const ExperimentConfig& cfg, std::size_t n, std::size_t replicate_index);

struct RunRow {
    std::size_t n = 0;
    std::size_t replicate = 0;
    SaddleStatus saddle_status = SaddleStatus::zero;
    double s_hat = 0.0;
    long double p_clt = 0.0L;
    ComparisonRow cmp;
};

struct RunSummary {
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t defined = 0;  // rows with a finite relative error
    double median_abs_rel_err_lr = 0.0;
    double p90_abs_rel_err_lr = 0.0;
    double median_abs_rel_err_rob = 0.0;
    double p90_abs_rel_err_rob = 0.0;
    double power_lr = 0.0;      // fraction with p_lr <= 0.05
    double power_oracle = 0.0;  // fraction with p_oracle <= 0.05
};

struct RunReport {
    std::vector<RunRow> rows;  // ordered by (n_grid position, replicate)
    std::vector<RunSummary> summaries;
};

/// Replicates run on `threads` workers (0 = hardware); output does not depend on it.
RunReport run_convergence(const ExperimentConfig& cfg, unsigned threads = 1,
                          const SaddleConfig& saddle = {});

std::string to_csv(const RunReport& report);
std::string summary_json(const RunReport& report);

/// Type-7 (linear interpolation) sample quantile; `v` is copied and sorted.
double quantile(std::vector<double> v, double q);

}  // namespace spa
