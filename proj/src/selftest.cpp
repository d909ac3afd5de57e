#include "spa/selftest.hpp"

#include "spa/resampling_oracle.hpp"
#include "spa/signflip_test.hpp"
#include "spa/special_functions.hpp"

#include <cmath>

namespace spa {

namespace {

bool near_rel(long double a, long double b, long double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

}  // namespace

std::vector<SelfCheck> run_selftest() {
    std::vector<SelfCheck> out;
    auto check = [&](std::string name, auto&& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (...) {
            ok = false;
        }
        out.push_back({std::move(name), ok});
    };

    check("normal_sf(1)", [] { return near_rel(normal_sf(1.0).value(), 0.15865525393145705L, 1e-12L); });
    check("mills_scaled(1)", [] { return near_rel(mills_scaled(1.0).value, 0.26157829186512337L, 1e-12L); });
    check("mills_scaled vs quadrature at 5", [] {
        return std::fabs(mills_scaled(5.0).value - gauss_tail_integral(5.0, 1e-12)) <= 1e-10;
    });
    check("w = 0 gives 1/2", [] {
        const SignFlipReport r = spa_pvalue(Sample({1.0, -1.0}));
        return r.p_lr.value() == 0.5L && r.p_rob.value() == 0.5L;
    });
    check("exact enumeration (1,2,3)", [] {
        const ExactResult e = exact_enumeration(Sample({1.0, 2.0, 3.0}));
        return e.favorable == 1 && e.total == 8;
    });
    check("sign-flip complement", [] {
        const Sample x({0.3, -1.2, 2.5, 0.7, -0.1, 1.9});
        const Sample nx({-0.3, 1.2, -2.5, -0.7, 0.1, -1.9});
        return std::fabs(spa_pvalue(x).p_lr.value() + spa_pvalue(nx).p_lr.value() - 1.0L) <= 1e-10L;
    });
    check("lugannani_rice = robinson at lambda = r", [] {
        return lugannani_rice(1.3, 1.3, false).p == robinson(1.3, 1.3, false).p;
    });
    return out;
}

}  // namespace spa
