// spa: saddlepoint p-values for the sign-flipping test.
//
//   spa pvalue FILE.csv [--out PATH]
//   spa compare FILE.csv --oracle exact|mc [--b N] [--seed S] [--out PATH]
//   spa convergence --config PATH [--out CSV] [--summary JSON]
//   spa selftest
//
// Exit codes: 0 success, 2 usage / input / configuration errors, 3 degenerate
// sample. SPA_THREADS caps the worker count (default: all cores).

#include "spa/spa.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

unsigned threads_from_env() {
    const char* env = std::getenv("SPA_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0) return 0;
    return static_cast<unsigned>(v);
}

int report_failure(spa_status st) {
    std::cerr << "spa: " << spa_status_string(st) << ": " << spa_last_error() << '\n';
    return st == SPA_ERR_DEGENERATE ? kExitDegenerate : kExitUsage;
}

bool emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

struct SampleHandle {
    spa_sample* p = nullptr;
    ~SampleHandle() { spa_sample_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Saddlepoint approximations for sign-flipping tests"};
    app.require_subcommand(1);

    std::string input;
    std::string out_path;
    std::string oracle = "exact";
    std::uint64_t b = 100000;
    std::uint64_t seed = 0;
    std::string config_path;
    std::string summary_path;

    auto* pvalue = app.add_subcommand("pvalue", "Saddlepoint p-value for a single-column CSV sample");
    pvalue->add_option("input", input, "CSV file, one value per line, optional header 'x'")->required();
    pvalue->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    auto* compare = app.add_subcommand("compare", "Compare the saddlepoint p-value with an oracle");
    compare->add_option("input", input, "CSV file")->required();
    compare->add_option("--oracle", oracle, "exact | mc")->check(CLI::IsMember({"exact", "mc"}));
    compare->add_option("--b", b, "Monte Carlo replicates");
    compare->add_option("--seed", seed, "Monte Carlo seed");
    compare->add_option("--out", out_path, "Write the JSON row here instead of stdout");

    auto* convergence = app.add_subcommand("convergence", "Run a convergence experiment from a config file");
    convergence->add_option("--config", config_path, "key=value experiment config")->required();
    convergence->add_option("--out", out_path, "CSV destination (default stdout)");
    convergence->add_option("--summary", summary_path, "Summary JSON destination (default stdout after the CSV "
                                                       "when --out is given, else stderr)");

    auto* selftest = app.add_subcommand("selftest", "Run the built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const unsigned threads = threads_from_env();

    if (*pvalue || *compare) {
        SampleHandle sample;
        if (spa_status st = spa_sample_load_csv(input.c_str(), &sample.p); st != SPA_OK) return report_failure(st);

        std::string text;
        if (*pvalue) {
            spa_report* rep = nullptr;
            if (spa_status st = spa_pvalue(sample.p, nullptr, &rep); st != SPA_OK) return report_failure(st);
            text = std::string(spa_report_json(rep)) + '\n';
            spa_report_free(rep);
        } else {
            const spa_oracle_kind kind = oracle == "mc" ? SPA_ORACLE_MC : SPA_ORACLE_EXACT;
            spa_comparison* cmp = nullptr;
            if (spa_status st = spa_compare(sample.p, nullptr, kind, b, seed, threads, &cmp); st != SPA_OK) {
                return report_failure(st);
            }
            text = std::string(spa_comparison_json(cmp)) + '\n';
            spa_comparison_free(cmp);
        }
        if (!emit(text, out_path)) {
            std::cerr << "spa: cannot write '" << out_path << "'\n";
            return kExitUsage;
        }
        return 0;
    }

    if (*convergence) {
        spa_experiment* exp = nullptr;
        if (spa_status st = spa_experiment_load(config_path.c_str(), &exp); st != SPA_OK) return report_failure(st);
        spa_run* run = nullptr;
        const spa_status st = spa_experiment_run(exp, threads, &run);
        spa_experiment_free(exp);
        if (st != SPA_OK) return report_failure(st);

        const std::string csv = spa_run_csv(run);
        const std::string summary = std::string(spa_run_summary_json(run)) + '\n';
        spa_run_free(run);

        bool ok = emit(csv, out_path);
        if (!summary_path.empty()) {
            ok = ok && emit(summary, summary_path);
        } else if (!out_path.empty()) {
            ok = ok && emit(summary, "");
        } else {
            std::cerr << summary;
        }
        if (!ok) {
            std::cerr << "spa: cannot write output\n";
            return kExitUsage;
        }
        return 0;
    }

    if (*selftest) {
        int failures = 0;
        const char* summary = nullptr;
        if (spa_status st = spa_selftest(&failures, &summary); st != SPA_OK) return report_failure(st);
        std::cout << summary;
        return failures == 0 ? 0 : 1;
    }
    return kExitUsage;
}
