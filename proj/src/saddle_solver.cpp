#include "spa/saddle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spa {

void SaddleConfig::validate() const {
    if (!(tol_residual > 0.0) || !(tol_s > 0.0) || !(eta_flat > 0.0) || max_iter == 0) {
        throw std::invalid_argument("SaddleConfig: tolerances and max_iter must be positive");
    }
}

std::string_view to_string(SaddleStatus s) {
    switch (s) {
        case SaddleStatus::zero: return "zero";
        case SaddleStatus::interior_unique: return "interior_unique";
        case SaddleStatus::boundary_fallback: return "boundary_fallback";
        case SaddleStatus::flat_fallback: return "flat_fallback";
    }
    return "unknown";
}

namespace {

// The solver always works on an increasing function with a positive target:
// for w < 0 it solves -K'(-t) = -w and reports s = -t. For an even K the
// reflected function is bitwise identical to K', which makes
// solve(-w) == -solve(w) exact.
class Reflected {
public:
    Reflected(const PooledCgf& p, double sign) : p_(p), sign_(sign) {}

    struct Value {
        double f;   // g(t)
        double df;  // g'(t)
    };

    Value operator()(double t) const {
        const CgfEval e = p_.eval(sign_ * t);
        return {sign_ * e.k1, e.k2};
    }

    double to_s(double t) const { return sign_ * t; }

private:
    const PooledCgf& p_;
    double sign_;
};

}  // namespace

SaddleSolution solve_saddlepoint(const PooledCgf& p, double w, const SaddleConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(w)) throw std::invalid_argument("solve_saddlepoint: w must be finite");

    SaddleSolution sol;
    if (w == 0.0) {
        sol.s_hat = 0.0;
        sol.status = SaddleStatus::zero;
        sol.residual = std::fabs(p.eval(0.0).k1);
        return sol;
    }

    const double sign = w > 0.0 ? 1.0 : -1.0;
    const double target = std::fabs(w);
    const double half = 0.5 * p.epsilon();
    const double fallback = sign * half;
    const double tol_f = cfg.tol_residual * std::max(1.0, target);
    const Reflected g(p, sign);

    const auto lo_end = g(-half);
    const auto hi_end = g(half);
    const auto at_zero = g(0.0);
    const double curvature_ref = std::max(at_zero.df, std::numeric_limits<double>::min());

    if (target > hi_end.f || target < lo_end.f) {
        sol.s_hat = fallback;
        sol.status = SaddleStatus::boundary_fallback;
        sol.residual = std::fabs(hi_end.f - target);
        sol.degenerate = at_zero.df == 0.0 && lo_end.df == 0.0 && hi_end.df == 0.0;
        return sol;
    }

    // Bracket [a, b] with g(a) <= target <= g(b).
    double a = 0.0;
    double b = half;
    Reflected::Value at_a = at_zero;
    if (at_zero.f > target) {
        a = -half;
        b = 0.0;
        at_a = lo_end;
    }

    auto record = [&](double t) {
        if (!cfg.record_trace) return;
        const double lo = g.to_s(a);
        const double hi = g.to_s(b);
        sol.trace.push_back({std::min(lo, hi), std::max(lo, hi), g.to_s(t)});
    };

    double t;
    Reflected::Value cur;
    bool done = false;
    if (hi_end.f == target) {
        t = half;
        cur = hi_end;
        done = true;
    } else if (at_a.f == target) {
        t = a;
        cur = at_a;
        done = true;
    } else {
        // Newton step from the lower end of the bracket, else midpoint.
        t = (at_a.df > 0.0) ? a + (target - at_a.f) / at_a.df : 0.5 * (a + b);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        cur = g(t);
    }

    double dx_old = b - a;
    double dx = dx_old;
    std::size_t iter = 0;
    while (!done) {
        const double f = cur.f - target;
        if (f < 0.0) {
            a = t;
        } else if (f > 0.0) {
            b = t;
        }
        record(t);
        ++iter;
        if (f == 0.0 || (b - a) <= cfg.tol_s || (std::fabs(dx) <= cfg.tol_s && std::fabs(f) <= tol_f)) {
            break;
        }
        if (iter >= cfg.max_iter) {
            sol.converged = false;
            t = 0.5 * (a + b);
            cur = g(t);
            break;
        }

        const bool newton_leaves = ((t - b) * cur.df - f) * ((t - a) * cur.df - f) >= 0.0;
        const bool too_slow = std::fabs(2.0 * f) > std::fabs(dx_old * cur.df);
        if (cur.df <= 0.0 || newton_leaves || too_slow) {
            dx_old = dx;
            dx = 0.5 * (b - a);
            t = a + dx;
        } else {
            dx_old = dx;
            dx = f / cur.df;
            t -= dx;
        }
        cur = g(t);
    }

    sol.iterations = iter;
    sol.residual = std::fabs(cur.f - target);
    if (sol.converged && sol.residual > tol_f && (b - a) > cfg.tol_s) sol.converged = false;

    if (cur.df < cfg.eta_flat * curvature_ref) {
        sol.s_hat = fallback;
        sol.status = SaddleStatus::flat_fallback;
        return sol;
    }
    sol.s_hat = g.to_s(t);
    sol.status = SaddleStatus::interior_unique;
    return sol;
}

}  // namespace spa
