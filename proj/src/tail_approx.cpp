#include "spa/tail_approx.hpp"

#include <cmath>
#include <stdexcept>

namespace spa {

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

void check_signs(double lambda, double r) {
    if (std::isnan(lambda) || std::isnan(r)) throw std::domain_error("tail formula: NaN input");
    if ((lambda > 0.0 && r < 0.0) || (lambda < 0.0 && r > 0.0)) {
        throw std::domain_error("tail formula: lambda and r have opposite signs");
    }
    if (lambda == 0.0 && r != 0.0) {
        throw std::domain_error("tail formula: lambda = 0 with r != 0");
    }
}

TailValue clamp_unit(long double v) {
    if (v < 0.0L) return {Probability(0.0L), true};
    if (v > 1.0L) return {Probability(1.0L), true};
    return {Probability(v), false};
}

// 1 - Phi(r) + phi(r) (r - lambda) / (lambda r), no conventions applied.
long double lr_formula(long double lambda, long double r) {
    const long double pdf = kInvSqrt2PiL * std::exp(-0.5L * r * r);
    return normal_sf_l(r) + pdf * ((r - lambda) / (lambda * r));
}

}  // namespace

LambdaR compute_lambda_r(const SpaInputs& in) {
    if (in.n == 0) throw std::invalid_argument("compute_lambda_r: n must be >= 1");
    if (in.s_hat == 0.0) return {0.0, 0.0, RBranch::normal};
    const long double n = static_cast<long double>(in.n);
    const double lambda = static_cast<double>(in.s_hat * std::sqrt(n * static_cast<long double>(in.k2_at_s)));
    const long double gap = static_cast<long double>(in.s_hat) * in.w - static_cast<long double>(in.k_at_s);
    if (gap >= 0.0L) {
        return {lambda, static_cast<double>(sgn(in.s_hat) * std::sqrt(2.0L * n * gap)), RBranch::normal};
    }
    return {lambda, sgn(in.s_hat), RBranch::degenerate_sign};
}

TailValue lugannani_rice(double lambda, double r, bool zero) {
    if (zero || (lambda == 0.0 && r == 0.0)) return {Probability(0.5L), false};
    check_signs(lambda, r);
    if (lambda == r) return clamp_unit(normal_sf_l(r));

    const double ar = std::fabs(r);
    if (ar < kSmallR) {
        // Linear blend between 1/2 at r = 0 and the formula at |r| = kSmallR,
        // holding lambda / r fixed.
        if (ar == 0.0) return {Probability(0.5L), false};
        const long double scale = static_cast<long double>(kSmallR) / ar;
        const long double edge = lr_formula(lambda * scale, std::copysign(kSmallR, r));
        return clamp_unit(0.5L + (ar / static_cast<long double>(kSmallR)) * (edge - 0.5L));
    }
    return clamp_unit(lr_formula(lambda, r));
}

TailValue robinson(double lambda, double r, bool zero) {
    if (zero || (lambda == 0.0 && r == 0.0)) return {Probability(0.5L), false};
    check_signs(lambda, r);
    if (lambda == r) return clamp_unit(normal_sf_l(lambda));
    const long double l = lambda;
    const long double rr = r;
    if (lambda >= 0.0) return clamp_unit(std::exp(-0.5L * rr * rr) * mills_scaled_l(l));
    return clamp_unit(std::exp(0.5L * (l * l - rr * rr)) * normal_sf_l(l));
}

SpaResult saddlepoint_tail(const SpaInputs& in, bool zero) {
    SpaResult out;
    if (zero) {
        out.p_lr = Probability(0.5L);
        out.p_rob = Probability(0.5L);
        out.zero_branch = true;
        return out;
    }
    const LambdaR lr = compute_lambda_r(in);
    out.lambda = lr.lambda;
    out.r = lr.r;
    out.r_branch = lr.branch;
    if (lr.lambda == 0.0 && lr.r != 0.0) {
        // K_n''(s_hat) underflowed (saturated summands at the fallback point).
        // Take the lambda -> 0 limit of the LR correction, which diverges to
        // +-infinity and clamps, instead of rejecting.
        const long double rr = lr.r;
        out.p_lr = Probability(lr.r > 0.0 ? 1.0L : 0.0L);
        out.p_rob = Probability(0.5L * std::exp(-0.5L * rr * rr));
        out.clamped = true;
        return out;
    }
    const TailValue plr = lugannani_rice(lr.lambda, lr.r, false);
    const TailValue prob = robinson(lr.lambda, lr.r, false);
    out.p_lr = plr.p;
    out.p_rob = prob.p;
    out.clamped = plr.clamped || prob.clamped;
    return out;
}

}  // namespace spa
