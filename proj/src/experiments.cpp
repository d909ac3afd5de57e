#include "spa/experiments.hpp"

#include "format_util.hpp"
#include "parallel.hpp"
#include "spa/rng.hpp"
#include "spa/signflip_test.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace spa {

namespace {

constexpr std::uint64_t kOracleTag = 0x6f7261636c65ULL;
constexpr double kPowerLevel = 0.05;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config: bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
    return out;
}

// "name(arg)" -> {"name", "arg"}; plain "name" -> {"name", ""}.
std::pair<std::string_view, std::string_view> split_call(std::string_view v) {
    const auto open = v.find('(');
    if (open == std::string_view::npos) return {v, {}};
    if (v.back() != ')') throw ConfigError("config: unbalanced parenthesis in '" + std::string(v) + "'");
    return {trim(v.substr(0, open)), trim(v.substr(open + 1, v.size() - open - 2))};
}

double normal_draw(SplitMix64& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double error_magnitude(const ExperimentConfig& cfg, SplitMix64& rng) {
    switch (cfg.error_family) {
        case ErrorFamily::gaussian: return std::fabs(normal_draw(rng));
        case ErrorFamily::laplace: return -std::log(rng.uniform());
        case ErrorFamily::student_t: {
            const double z = std::fabs(normal_draw(rng));
            double chi2 = 0.0;
            for (int k = 0; k < cfg.df; ++k) {
                const double g = normal_draw(rng);
                chi2 += g * g;
            }
            return z / std::sqrt(chi2 / cfg.df);
        }
        case ErrorFamily::scaled_rademacher: return cfg.scale;
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(ErrorFamily f) {
    switch (f) {
        case ErrorFamily::gaussian: return "gaussian";
        case ErrorFamily::laplace: return "laplace";
        case ErrorFamily::student_t: return "student_t";
        case ErrorFamily::scaled_rademacher: return "scaled_rademacher";
    }
    return "unknown";
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::null: return "null";
        case Regime::clt: return "clt";
        case Regime::moderate: return "moderate";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (n_grid.empty()) throw ConfigError("config: n_grid is empty");
    for (std::size_t n : n_grid) {
        if (n == 0) throw ConfigError("config: n_grid entries must be >= 1");
    }
    if (replicates == 0) throw ConfigError("config: replicates must be >= 1");
    if (error_family == ErrorFamily::student_t && df < 5) {
        throw ConfigError("config: student_t needs df >= 5");
    }
    if (error_family == ErrorFamily::scaled_rademacher && !(scale > 0.0 && std::isfinite(scale))) {
        throw ConfigError("config: scale must be positive");
    }
    if (regime == Regime::moderate && !(alpha > 0.0 && alpha < 0.5)) {
        throw ConfigError("config: alpha must lie in (0, 0.5)");
    }
    if (!std::isfinite(h) || !std::isfinite(c)) throw ConfigError("config: h and c must be finite");
    if (oracle == OracleKind::exact) {
        for (std::size_t n : n_grid) {
            if (n > kMaxEnumerationN) {
                throw ConfigError("config: exact oracle needs every n <= " + std::to_string(kMaxEnumerationN));
            }
        }
    }
    if (oracle == OracleKind::mc && b == 0) throw ConfigError("config: mc oracle needs b >= 1");
}

ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig cfg;
    std::map<std::string, bool, std::less<>> seen;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view val = trim(line.substr(eq + 1));
        if (seen.contains(key)) throw ConfigError("config: duplicate key '" + std::string(key) + "'");
        seen.emplace(std::string(key), true);

        if (key == "n_grid") {
            std::string_view rest = val;
            if (!rest.empty() && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const std::string_view item = trim(rest.substr(0, comma));
                cfg.n_grid.push_back(parse_number<std::size_t>(key, item));
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (key == "replicates") {
            cfg.replicates = parse_number<std::size_t>(key, val);
        } else if (key == "error_family") {
            const auto [name, arg] = split_call(val);
            if (name == "gaussian") {
                cfg.error_family = ErrorFamily::gaussian;
            } else if (name == "laplace") {
                cfg.error_family = ErrorFamily::laplace;
            } else if (name == "student_t") {
                cfg.error_family = ErrorFamily::student_t;
                if (!arg.empty()) cfg.df = parse_number<int>(key, arg);
            } else if (name == "scaled_rademacher") {
                cfg.error_family = ErrorFamily::scaled_rademacher;
                if (!arg.empty()) cfg.scale = parse_number<double>(key, arg);
            } else {
                throw ConfigError("config: unknown error_family '" + std::string(val) + "'");
            }
        } else if (key == "df") {
            cfg.df = parse_number<int>(key, val);
        } else if (key == "scale") {
            cfg.scale = parse_number<double>(key, val);
        } else if (key == "regime") {
            if (val == "null") {
                cfg.regime = Regime::null;
            } else if (val == "clt") {
                cfg.regime = Regime::clt;
            } else if (val == "moderate") {
                cfg.regime = Regime::moderate;
            } else {
                throw ConfigError("config: unknown regime '" + std::string(val) + "'");
            }
        } else if (key == "h") {
            cfg.h = parse_number<double>(key, val);
        } else if (key == "c") {
            cfg.c = parse_number<double>(key, val);
        } else if (key == "alpha") {
            cfg.alpha = parse_number<double>(key, val);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(key, val);
        } else if (key == "oracle") {
            const auto [name, arg] = split_call(val);
            if (name == "exact") {
                cfg.oracle = OracleKind::exact;
            } else if (name == "mc") {
                cfg.oracle = OracleKind::mc;
                if (!arg.empty()) cfg.b = parse_number<std::uint64_t>(key, arg);
            } else {
                throw ConfigError("config: unknown oracle '" + std::string(val) + "'");
            }
        } else if (key == "b") {
            cfg.b = parse_number<std::uint64_t>(key, val);
        } else {
            throw ConfigError("config: unknown key '" + std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

double location_mean(const ExperimentConfig& cfg, std::size_t n) {
    const double nd = static_cast<double>(n);
    switch (cfg.regime) {
        case Regime::null: return 0.0;
        case Regime::clt: return cfg.h / std::sqrt(nd);
        case Regime::moderate: return cfg.c * std::pow(nd, -cfg.alpha);
    }
    return 0.0;
}

double family_variance(const ExperimentConfig& cfg) {
    switch (cfg.error_family) {
        case ErrorFamily::gaussian: return 1.0;
        case ErrorFamily::laplace: return 2.0;
        case ErrorFamily::student_t: return static_cast<double>(cfg.df) / (cfg.df - 2);
        case ErrorFamily::scaled_rademacher: return cfg.scale * cfg.scale;
    }
    return 0.0;
}

Sample generate_location_model(const ExperimentConfig& cfg, std::size_t n, std::size_t replicate_index) {
    if (n == 0) throw std::invalid_argument("generate_location_model: n must be >= 1");
    if (cfg.error_family == ErrorFamily::student_t && cfg.df < 5) {
        throw std::invalid_argument("generate_location_model: student_t needs df >= 5");
    }
    if (cfg.error_family == ErrorFamily::scaled_rademacher && !(cfg.scale > 0.0)) {
        throw std::invalid_argument("generate_location_model: scale must be positive");
    }
    SplitMix64 rng(derive_key(derive_key(cfg.seed, n), replicate_index));
    const double mu = location_mean(cfg, n);
    std::vector<double> x(n);
    for (double& xi : x) {
        const double mag = error_magnitude(cfg, rng);
        const double sign = (rng.next() >> 63) ? -1.0 : 1.0;
        xi = mu + sign * mag;
    }
    return Sample(std::move(x));
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

RunReport run_convergence(const ExperimentConfig& cfg, unsigned threads, const SaddleConfig& saddle) {
    cfg.validate();
    threads = detail::resolve_threads(threads);
    const std::size_t reps = cfg.replicates;
    const std::size_t jobs = cfg.n_grid.size() * reps;

    RunReport report;
    report.rows.resize(jobs);
    detail::parallel_slices(jobs, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t j = begin; j < end; ++j) {
            const std::size_t n = cfg.n_grid[j / reps];
            const std::size_t rep = j % reps;
            const Sample sample = generate_location_model(cfg, n, rep);
            const SignFlipReport spa = spa_pvalue(sample, saddle);
            OracleResult oracle;
            if (cfg.oracle == OracleKind::exact) {
                oracle = exact_enumeration(sample, 1);
            } else {
                const std::uint64_t key = derive_key(derive_key(derive_key(cfg.seed, n), rep), kOracleTag);
                oracle = mc_pvalue(sample, cfg.b, key, 1);
            }
            RunRow& row = report.rows[j];
            row.n = n;
            row.replicate = rep;
            row.saddle_status = spa.saddle_status;
            row.s_hat = spa.s_hat;
            row.p_clt = spa.p_clt.value();
            row.cmp = compare(spa, oracle);
        }
    });

    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        RunSummary s;
        s.n = cfg.n_grid[g];
        s.rows = reps;
        std::vector<double> lr;
        std::vector<double> rob;
        std::size_t hits_lr = 0;
        std::size_t hits_oracle = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const ComparisonRow& c = report.rows[g * reps + rep].cmp;
            if (c.rel_err_lr) {
                lr.push_back(static_cast<double>(std::fabs(*c.rel_err_lr)));
                rob.push_back(static_cast<double>(std::fabs(*c.rel_err_rob)));
            }
            hits_lr += c.p_lr <= kPowerLevel ? 1 : 0;
            hits_oracle += c.p_oracle <= kPowerLevel ? 1 : 0;
        }
        s.defined = lr.size();
        s.median_abs_rel_err_lr = quantile(lr, 0.5);
        s.p90_abs_rel_err_lr = quantile(lr, 0.9);
        s.median_abs_rel_err_rob = quantile(rob, 0.5);
        s.p90_abs_rel_err_rob = quantile(rob, 0.9);
        s.power_lr = static_cast<double>(hits_lr) / static_cast<double>(reps);
        s.power_oracle = static_cast<double>(hits_oracle) / static_cast<double>(reps);
        report.summaries.push_back(s);
    }
    return report;
}

std::string to_csv(const RunReport& report) {
    using detail::fmt_num;
    auto opt = [](const std::optional<long double>& v) { return v ? fmt_num(*v) : std::string("NA"); };
    std::string out = "n,replicate,w,s_hat,saddle_status,p_lr,p_rob,p_clt,p_oracle,rel_err_lr,rel_err_rob,flagged\n";
    for (const RunRow& r : report.rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.replicate) + ',' + fmt_num(r.cmp.w) + ',' +
               fmt_num(r.s_hat) + ',' + std::string(to_string(r.saddle_status)) + ',' + fmt_num(r.cmp.p_lr) + ',' +
               fmt_num(r.cmp.p_rob) + ',' + fmt_num(r.p_clt) + ',' + fmt_num(r.cmp.p_oracle) + ',' +
               opt(r.cmp.rel_err_lr) + ',' + opt(r.cmp.rel_err_rob) + ',' + (r.cmp.flagged ? "1" : "0") + '\n';
    }
    return out;
}

std::string summary_json(const RunReport& report) {
    using detail::fmt_num;
    std::string out = "{\"summaries\": [";
    for (std::size_t i = 0; i < report.summaries.size(); ++i) {
        const RunSummary& s = report.summaries[i];
        if (i) out += ", ";
        out += "{\"n\": " + std::to_string(s.n) + ", \"rows\": " + std::to_string(s.rows) +
               ", \"defined\": " + std::to_string(s.defined) +
               ", \"median_abs_rel_err_lr\": " + fmt_num(s.median_abs_rel_err_lr) +
               ", \"p90_abs_rel_err_lr\": " + fmt_num(s.p90_abs_rel_err_lr) +
               ", \"median_abs_rel_err_rob\": " + fmt_num(s.median_abs_rel_err_rob) +
               ", \"p90_abs_rel_err_rob\": " + fmt_num(s.p90_abs_rel_err_rob) +
               ", \"power_lr\": " + fmt_num(s.power_lr) + ", \"power_oracle\": " + fmt_num(s.power_oracle) + "}";
    }
    out += "]}";
    return out;
}

}  // namespace spa
