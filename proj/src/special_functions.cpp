#include "spa/special_functions.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace spa {

namespace {

constexpr long double kSqrt2L = 1.414213562373095048801688724209698079L;

// Above this point the continued fraction is used for the Mills ratio.
constexpr long double kCfThreshold = 8.0L;

// Unscaled Mills ratio R(x) = (1 - Phi(x)) / phi(x) for x >= kCfThreshold,
// via the Laplace continued fraction R = 1/(x + 1/(x + 2/(x + 3/(x + ...))))
// evaluated with modified Lentz.
long double mills_ratio_cf(long double x) {
    if (x > 1e150L) return 1.0L / x;
    constexpr long double tiny = 1e-300L;
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    long double f = tiny;
    long double c = f;
    long double d = 0.0L;
    for (int j = 1; j < 10000; ++j) {
        const long double a = (j == 1) ? 1.0L : static_cast<long double>(j - 1);
        d = x + a * d;
        if (d == 0.0L) d = tiny;
        d = 1.0L / d;
        c = x + a / c;
        if (c == 0.0L) c = tiny;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < eps) break;
    }
    return f;
}

}  // namespace

double normal_pdf(double x) {
    const long double xl = x;
    return static_cast<double>(kInvSqrt2PiL * std::exp(-0.5L * xl * xl));
}

long double normal_sf_l(long double x) {
    if (x <= kCfThreshold) return 0.5L * std::erfc(x / kSqrt2L);
    return kInvSqrt2PiL * std::exp(-0.5L * x * x) * mills_ratio_cf(x);
}

Probability normal_sf(double x) { return Probability(normal_sf_l(x)); }

long double mills_scaled_l(long double x) {
    if (x <= kCfThreshold) return std::exp(0.5L * x * x) * normal_sf_l(x);
    return kInvSqrt2PiL * mills_ratio_cf(x);
}

MillsValue mills_scaled(double x) { return {static_cast<double>(mills_scaled_l(x))}; }

double gauss_tail_integral(double lambda, double tol) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("gauss_tail_integral: lambda must be finite and >= 0");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("gauss_tail_integral: tol must be > 0");

    constexpr std::size_t limit = 2000;
    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
        gsl_integration_workspace_alloc(limit), &gsl_integration_workspace_free);
    if (!ws) throw std::runtime_error("gauss_tail_integral: workspace allocation failed");

    gsl_function fn;
    fn.function = [](double z, void* p) {
        const double lam = *static_cast<double*>(p);
        return kInvSqrt2Pi * std::exp(-lam * z - 0.5 * z * z);
    };
    fn.params = &lambda;

    gsl_error_handler_t* old = gsl_set_error_handler_off();
    double result = 0.0;
    double abserr = 0.0;
    const int status = gsl_integration_qagiu(&fn, 0.0, tol, 0.0, limit, ws.get(), &result, &abserr);
    gsl_set_error_handler(old);

    if (status != GSL_SUCCESS || abserr > tol) {
        throw std::runtime_error(std::string("gauss_tail_integral: quadrature did not converge: ") +
                                 gsl_strerror(status));
    }
    return result;
}

}  // namespace spa
