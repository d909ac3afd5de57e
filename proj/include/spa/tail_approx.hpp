#pragma once

// Lugannani-Rice and Robinson tail approximations built from the standardized
// saddlepoint lambda and the signed likelihood root r.

#include "spa/special_functions.hpp"

#include <cstddef>

namespace spa {

struct SpaInputs {
    double s_hat = 0.0;
    double w = 0.0;
    double k_at_s = 0.0;   // K_n(s_hat)
    double k2_at_s = 0.0;  // K_n''(s_hat)
    std::size_t n = 1;
};

enum class RBranch {
    normal,          // r = sgn(s) sqrt(2n (s w - K(s)))
    degenerate_sign  // s w - K(s) < 0, r = sgn(s)
};

struct LambdaR {
    double lambda;
    double r;
    RBranch branch;
};

LambdaR compute_lambda_r(const SpaInputs& in);

/// A probability plus whether it had to be clamped into [0, 1].
struct TailValue {
    Probability p;
    bool clamped = false;
};

/// Below this |r| the LR value is interpolated linearly toward 1/2.
inline constexpr double kSmallR = 1e-4;

/// 1 - Phi(r) + phi(r) (1/lambda - 1/r). With `zero` set, or lambda = r = 0,
/// returns exactly 1/2. Throws std::domain_error when lambda * r < 0 or
/// when lambda = 0 while r != 0.
TailValue lugannani_rice(double lambda, double r, bool zero);

/// exp((lambda^2 - r^2) / 2) (1 - Phi(lambda)), as exp(-r^2/2) h(lambda).
TailValue robinson(double lambda, double r, bool zero);

struct SpaResult {
    double lambda = 0.0;
    double r = 0.0;
    Probability p_lr;
    Probability p_rob;
    RBranch r_branch = RBranch::normal;
    bool zero_branch = false;
    bool clamped = false;
};

/// compute_lambda_r followed by both tail formulas.
SpaResult saddlepoint_tail(const SpaInputs& in, bool zero);

}  // namespace spa
