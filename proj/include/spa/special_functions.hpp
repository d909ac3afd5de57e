#pragma once

// Standard-normal primitives used by the tail formulas.
//
// Probabilities are carried in long double so that Gaussian tails far below
// DBL_MIN (1 - Phi(40) ~ 3.7e-350) remain representable.

#include <cmath>
#include <stdexcept>

namespace spa {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;
inline constexpr long double kInvSqrt2PiL = 0.398942280401432677939946059934381868L;

/// A probability in [0, 1]. Construction rejects NaN and out-of-range values.
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(long double v) : value_(v) {
        if (!(v >= 0.0L && v <= 1.0L)) {
            throw std::domain_error("Probability outside [0, 1]");
        }
    }

    long double value() const noexcept { return value_; }
    double to_double() const noexcept { return static_cast<double>(value_); }

    friend bool operator==(Probability, Probability) = default;

private:
    long double value_ = 0.0L;
};

/// h(x) = exp(x^2/2) (1 - Phi(x)); lies in (0, 1] for x >= 0, decreasing.
struct MillsValue {
    double value;
};

double normal_pdf(double x);

/// 1 - Phi(x), evaluated in the complementary form (never as 1 - Phi).
Probability normal_sf(double x);

/// Long-double overload used internally by the tail formulas.
long double normal_sf_l(long double x);

/// Scaled Mills ratio h(x). Overflow-free for all finite x >= 0 up to ~1e150;
/// for x < 0 computed directly since 1 - Phi(x) -> 1.
MillsValue mills_scaled(double x);
long double mills_scaled_l(long double x);

/// Adaptive quadrature of int_0^inf exp(-lambda z) phi(z) dz. Only used as an
/// independent oracle for mills_scaled; throws std::runtime_error if the
/// integrator does not reach `tol`.
double gauss_tail_integral(double lambda, double tol);

}  // namespace spa
