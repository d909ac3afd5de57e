#pragma once

// Root of K_n'(s) = w on [-epsilon/2, epsilon/2].
//
// When the root set is empty or not a single point, s_hat falls back to
// sgn(w) * epsilon / 2, so that s_hat is always defined and always carries the
// sign of w.

#include "spa/cgf.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace spa {

struct SaddleConfig {
    double tol_residual = 1e-12;  // scaled by max(1, |w|)
    double tol_s = 1e-13;         // bracket width / step size
    std::size_t max_iter = 200;
    double eta_flat = 1e-12;      // relative to K_n''(0)
    bool record_trace = false;

    void validate() const;
};

enum class SaddleStatus { zero, interior_unique, boundary_fallback, flat_fallback };

std::string_view to_string(SaddleStatus s);

struct BracketStep {
    double lo;
    double hi;
    double s;
};

struct SaddleSolution {
    double s_hat = 0.0;
    SaddleStatus status = SaddleStatus::zero;
    double residual = 0.0;  // |K_n'(s_hat) - w|
    std::size_t iterations = 0;
    bool converged = true;
    bool degenerate = false;  // K_n'' vanishes on the whole interval
    std::vector<BracketStep> trace;
};

SaddleSolution solve_saddlepoint(const PooledCgf& p, double w, const SaddleConfig& cfg = {});

}  // namespace spa
