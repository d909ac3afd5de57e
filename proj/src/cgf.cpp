#include "spa/cgf.hpp"

#include "numeric_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace spa {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458176568;

void check_domain(double s, double epsilon) {
    if (!(std::fabs(s) < epsilon)) {
        throw std::domain_error("CGF evaluated outside (-epsilon, epsilon): s = " + std::to_string(s));
    }
}

// tanh(y) and sech^2(y) from exp(-2|y|); never overflows.
struct TanhSech2 {
    double tanh;
    double sech2;
};

TanhSech2 tanh_sech2(double y) {
    const double ay = std::fabs(y);
    const double e = std::exp(-2.0 * ay);
    const double t = -std::expm1(-2.0 * ay) / (1.0 + e);
    const double onep = 1.0 + e;
    return {std::copysign(t, y), std::min(1.0, 4.0 * e / (onep * onep))};
}

}  // namespace

Sample::Sample(std::vector<double> x) : x_(std::move(x)) {
    if (x_.empty()) throw std::invalid_argument("Sample: need at least one observation");
    for (double v : x_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Sample: non-finite observation");
    }
}

double Sample::mean() const { return detail::compensated_sum(x_) / static_cast<double>(x_.size()); }

FiniteSupportCgf::FiniteSupportCgf(std::vector<Atom> atoms, double epsilon)
    : atoms_(std::move(atoms)), epsilon_(epsilon) {
    if (atoms_.empty()) throw std::invalid_argument("FiniteSupportCgf: no atoms");
    if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
        throw std::invalid_argument("FiniteSupportCgf: epsilon must be positive and finite");
    }
    long double psum = 0.0L;
    long double mean = 0.0L;
    for (const Atom& a : atoms_) {
        if (!std::isfinite(a.value)) throw std::invalid_argument("FiniteSupportCgf: non-finite atom");
        if (!(a.prob > 0.0)) throw std::invalid_argument("FiniteSupportCgf: atom probabilities must be > 0");
        psum += a.prob;
        mean += static_cast<long double>(a.prob) * a.value;
        radius_ = std::max(radius_, std::fabs(a.value));
    }
    if (std::fabs(psum - 1.0L) > kProbSumTol) {
        throw std::invalid_argument("FiniteSupportCgf: probabilities do not sum to 1");
    }
    if (std::fabs(mean) > kMeanZeroTol) {
        throw std::invalid_argument("FiniteSupportCgf: law is not mean-zero");
    }
}

double logcosh(double y) {
    const double ay = std::fabs(y);
    // cosh^2 = 1 + sinh^2 avoids the cancellation near zero.
    if (ay < 1.0) {
        const double sh = std::sinh(ay);
        return 0.5 * std::log1p(sh * sh);
    }
    return ay - kLn2 + std::log1p(std::exp(-2.0 * ay));
}

CgfEval signflip_eval(const SignFlipCgf& c, double s) {
    check_domain(s, c.epsilon);
    const double y = s * c.x;
    const TanhSech2 ts = tanh_sech2(y);
    return {logcosh(y), c.x * ts.tanh, c.x * c.x * ts.sech2};
}

HigherCumulants signflip_higher_at_zero(const SignFlipCgf& c) {
    const double x2 = c.x * c.x;
    return {0.0, -2.0 * x2 * x2};
}

CgfEval finite_support_eval(const FiniteSupportCgf& c, double s) {
    check_domain(s, c.epsilon());
    const auto atoms = c.atoms();
    double m = -std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms) m = std::max(m, s * a.value + std::log(a.prob));

    double total = 0.0;
    double first = 0.0;
    for (const Atom& a : atoms) {
        const double q = std::exp(s * a.value + std::log(a.prob) - m);
        total += q;
        first += q * a.value;
    }
    const double mean = first / total;
    double second = 0.0;
    for (const Atom& a : atoms) {
        const double q = std::exp(s * a.value + std::log(a.prob) - m);
        const double d = a.value - mean;
        second += q * d * d;
    }
    return {m + std::log(total), mean, second / total};
}

CgfEval summand_eval(const SummandCgf& c, double s) {
    return std::visit(
        [s](const auto& cg) -> CgfEval {
            if constexpr (std::is_same_v<std::decay_t<decltype(cg)>, SignFlipCgf>) {
                return signflip_eval(cg, s);
            } else {
                return finite_support_eval(cg, s);
            }
        },
        c);
}

double summand_epsilon(const SummandCgf& c) {
    return std::visit(
        [](const auto& cg) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(cg)>, SignFlipCgf>) {
                return cg.epsilon;
            } else {
                return cg.epsilon();
            }
        },
        c);
}

TiltedMoments tilted_moments(const SummandCgf& c, double s) {
    const CgfEval e = summand_eval(c, s);
    return {e.k1, e.k2};
}

PooledCgf::PooledCgf(std::vector<SummandCgf> summands) : summands_(std::move(summands)) {
    if (summands_.empty()) throw std::invalid_argument("PooledCgf: no summands");
    epsilon_ = summand_epsilon(summands_.front());
    for (const SummandCgf& c : summands_) {
        if (summand_epsilon(c) != epsilon_) {
            throw std::invalid_argument("PooledCgf: summands must share one epsilon");
        }
        if (!std::holds_alternative<SignFlipCgf>(c)) all_sign_flip_ = false;
    }
}

PooledCgf PooledCgf::sign_flip(const Sample& sample) {
    std::vector<SummandCgf> summands;
    summands.reserve(sample.size());
    for (double x : sample.values()) summands.emplace_back(SignFlipCgf{x, kSignFlipEpsilon});
    return PooledCgf(std::move(summands));
}

CgfEval PooledCgf::eval(double s) const {
    check_domain(s, epsilon_);
    double k = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    for (const SummandCgf& c : summands_) {
        const CgfEval e = summand_eval(c, s);
        k += e.k;
        k1 += e.k1;
        k2 += e.k2;
    }
    const double n = static_cast<double>(summands_.size());
    return {k / n, k1 / n, k2 / n};
}

CgfEval pooled_eval(const PooledCgf& p, double s) { return p.eval(s); }

}  // namespace spa
