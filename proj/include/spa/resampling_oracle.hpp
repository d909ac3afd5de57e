#pragma once

// Ground-truth p-values for the sign-flipping test: exact enumeration of all
// 2^n sign patterns, and a seeded Monte Carlo estimate.
//
// A pattern is favorable when sum pi_i x_i >= sum x_i, ties included. This is
// equivalent to the flipped subset S = {i : pi_i = -1} having sum_S x_i <= 0,
// which is what both oracles evaluate.

#include "spa/cgf.hpp"
#include "spa/signflip_test.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace spa {

inline constexpr std::size_t kMaxEnumerationN = 30;

class TooLargeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExactResult {
    std::uint64_t favorable = 0;
    std::uint64_t total = 0;
    std::uint64_t ties = 0;  // patterns with sum pi x == sum x exactly
    long double p = 0.0L;
    long double p_tie = 0.0L;
};

struct McResult {
    long double p_hat = 0.0L;
    std::uint64_t favorable = 0;
    std::uint64_t b = 0;
    std::uint64_t seed = 0;
    long double ci_low = 0.0L;
    long double ci_high = 0.0L;
};

/// Two-sided normal quantiles for Wilson intervals.
inline constexpr double kZ99 = 2.5758293035489004;
inline constexpr double kZ999 = 3.2905267314919255;

struct Interval {
    long double low;
    long double high;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// `threads` = 0 uses the hardware concurrency. Results do not depend on it.
ExactResult exact_enumeration(const Sample& sample, unsigned threads = 1);
McResult mc_pvalue(const Sample& sample, std::uint64_t b, std::uint64_t seed, unsigned threads = 1);

using OracleResult = std::variant<ExactResult, McResult>;

struct ComparisonRow {
    std::size_t n = 0;
    double w = 0.0;
    long double p_lr = 0.0L;
    long double p_rob = 0.0L;
    long double p_oracle = 0.0L;
    std::optional<long double> rel_err_lr;  // p_lr / p_oracle - 1; empty when p_oracle = 0
    std::optional<long double> rel_err_rob;
    bool oracle_noisy = false;  // MC interval wider than 10% of p_hat
    bool flagged = false;       // noisy oracle or undefined relative error
};

inline constexpr double kNoisyCiFraction = 0.1;

ComparisonRow compare(const SignFlipReport& report, const OracleResult& oracle);

std::string to_json(const ComparisonRow& row, const OracleResult& oracle);

namespace detail {

/// x_i = mant * 2^(shift + e_min) with shift >= 0.
struct ScaledPart {
    std::int64_t mant;
    int shift;
};

/// Data rescaled to integers by the smallest binary exponent, so sums of any
/// subset are computed without rounding. __int128 is used when the span
/// allows, a wider fixed-width integer otherwise.
class ExactSummands {
public:
    explicit ExactSummands(std::span<const double> x);

    bool fits_int128() const noexcept { return fits_int128_; }
    /// Bits needed for any subset sum, sign included.
    int bits_needed() const noexcept { return bits_; }
    std::size_t size() const noexcept { return parts_.size(); }
    std::span<const ScaledPart> parts() const noexcept { return parts_; }
    /// Empty unless fits_int128().
    std::span<const __int128> fixed() const noexcept { return fixed_; }

private:
    bool fits_int128_ = true;
    int bits_ = 1;
    std::vector<ScaledPart> parts_;
    std::vector<__int128> fixed_;
};

/// All 2^n subset sums in Gray-code visiting order (test helper, n <= 20, fits_int128()).
std::vector<__int128> gray_code_subset_sums(const ExactSummands& xs);
/// Gray-code visiting order: the k-th visited subset as a bitmask.
inline std::uint64_t gray_code(std::uint64_t k) { return k ^ (k >> 1); }

}  // namespace detail

}  // namespace spa
