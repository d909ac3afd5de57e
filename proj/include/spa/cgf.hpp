#pragma once

// Conditional cumulant generating functions of resampled summands.
//
// Two families are provided: the sign-flip summand W = pi * x with pi a fair
// random sign (K(s) = log cosh(s x)), and a generic mean-zero law on finitely
// many atoms. A PooledCgf averages a set of summands sharing the same domain
// half-width epsilon.

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace spa {

/// Observed data X_1..X_n. All entries finite, n >= 1.
class Sample {
public:
    explicit Sample(std::vector<double> x);

    std::span<const double> values() const noexcept { return x_; }
    std::size_t size() const noexcept { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }

    /// Neumaier-compensated mean.
    double mean() const;

private:
    std::vector<double> x_;
};

/// K, K', K'' at a point.
struct CgfEval {
    double k = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
};

inline constexpr double kSignFlipEpsilon = 2.0;

struct SignFlipCgf {
    double x = 0.0;
    double epsilon = kSignFlipEpsilon;
};

struct Atom {
    double value;
    double prob;
};

/// Mean-zero law on finitely many atoms. Validated at construction.
class FiniteSupportCgf {
public:
    static constexpr double kProbSumTol = 1e-12;
    static constexpr double kMeanZeroTol = 1e-10;

    explicit FiniteSupportCgf(std::vector<Atom> atoms, double epsilon = 2.0);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double epsilon() const noexcept { return epsilon_; }
    /// max |value|, the compact-support radius.
    double support_radius() const noexcept { return radius_; }

private:
    std::vector<Atom> atoms_;
    double epsilon_;
    double radius_ = 0.0;
};

using SummandCgf = std::variant<SignFlipCgf, FiniteSupportCgf>;

/// log cosh(y) = |y| - log 2 + log1p(exp(-2|y|)).
double logcosh(double y);

CgfEval signflip_eval(const SignFlipCgf& c, double s);

struct HigherCumulants {
    double k3;
    double k4;
};
/// Third and fourth cumulants of the two-atom law +-x at s = 0.
HigherCumulants signflip_higher_at_zero(const SignFlipCgf& c);

CgfEval finite_support_eval(const FiniteSupportCgf& c, double s);

CgfEval summand_eval(const SummandCgf& c, double s);
double summand_epsilon(const SummandCgf& c);

struct TiltedMoments {
    double mean;
    double var;
};
/// Mean and variance of the summand law exponentially tilted by s.
TiltedMoments tilted_moments(const SummandCgf& c, double s);

/// K_n(s) = (1/n) sum K_in(s).
class PooledCgf {
public:
    explicit PooledCgf(std::vector<SummandCgf> summands);

    /// Pool of sign-flip summands for the observations of `sample`.
    static PooledCgf sign_flip(const Sample& sample);

    std::size_t size() const noexcept { return summands_.size(); }
    double epsilon() const noexcept { return epsilon_; }
    std::span<const SummandCgf> summands() const noexcept { return summands_; }
    /// True iff every summand is a sign-flip summand (K even).
    bool is_even() const noexcept { return all_sign_flip_; }

    CgfEval eval(double s) const;

private:
    std::vector<SummandCgf> summands_;
    double epsilon_ = kSignFlipEpsilon;
    bool all_sign_flip_ = true;
};

CgfEval pooled_eval(const PooledCgf& p, double s);

}  // namespace spa
