#include "spa/signflip_test.hpp"

#include "format_util.hpp"

#include <algorithm>
#include <cmath>

namespace spa {

Diagnostics diagnostics(const Sample& sample) {
    Diagnostics d;
    long double s2 = 0.0L;
    long double s4 = 0.0L;
    for (double x : sample.values()) {
        const long double x2 = static_cast<long double>(x) * x;
        s2 += x2;
        s4 += x2 * x2;
        d.nu_max = std::max(d.nu_max, std::fabs(x));
    }
    const long double n = static_cast<long double>(sample.size());
    d.m2 = static_cast<double>(s2 / n);
    d.m4 = static_cast<double>(s4 / n);
    d.degenerate = d.nu_max == 0.0;
    return d;
}

Probability clt_pvalue(const Sample& sample) {
    const Diagnostics d = diagnostics(sample);
    if (d.degenerate) throw DegenerateSampleError();
    const long double n = static_cast<long double>(sample.size());
    const long double z = std::sqrt(n / d.m2) * static_cast<long double>(sample.mean());
    return Probability(normal_sf_l(z));
}

SignFlipReport spa_pvalue(const Sample& sample, const SaddleConfig& cfg) {
    SignFlipReport rep;
    rep.n = sample.size();
    rep.diag = diagnostics(sample);
    if (rep.diag.degenerate) throw DegenerateSampleError();

    rep.w = sample.mean();
    const PooledCgf pool = PooledCgf::sign_flip(sample);
    const SaddleSolution sol = solve_saddlepoint(pool, rep.w, cfg);
    rep.s_hat = sol.s_hat;
    rep.saddle_status = sol.status;
    rep.converged = sol.converged;

    const CgfEval at = pool.eval(sol.s_hat);
    const SpaInputs in{sol.s_hat, rep.w, at.k, at.k2, rep.n};
    const SpaResult res = saddlepoint_tail(in, sol.status == SaddleStatus::zero);
    rep.lambda = res.lambda;
    rep.r = res.r;
    rep.p_lr = res.p_lr;
    rep.p_rob = res.p_rob;
    rep.r_branch = res.r_branch;
    rep.clamped = res.clamped;
    rep.p_clt = clt_pvalue(sample);
    return rep;
}

std::string to_json(const SignFlipReport& r) {
    using detail::fmt_num;
    std::string out = "{";
    out += "\"n\": " + std::to_string(r.n);
    out += ", \"w\": " + fmt_num(r.w);
    out += ", \"s_hat\": " + fmt_num(r.s_hat);
    out += ", \"saddle_status\": \"" + std::string(to_string(r.saddle_status)) + "\"";
    out += ", \"lambda\": " + fmt_num(r.lambda);
    out += ", \"r\": " + fmt_num(r.r);
    out += ", \"p_lr\": " + fmt_num(r.p_lr.value());
    out += ", \"p_rob\": " + fmt_num(r.p_rob.value());
    out += ", \"p_clt\": " + fmt_num(r.p_clt.value());
    out += ", \"diagnostics\": {\"m2\": " + fmt_num(r.diag.m2) + ", \"m4\": " + fmt_num(r.diag.m4) +
           ", \"nu_max\": " + fmt_num(r.diag.nu_max) +
           ", \"degenerate\": " + (r.diag.degenerate ? "true" : "false") + "}";
    out += ", \"clamped\": ";
    out += r.clamped ? "true" : "false";
    out += "}";
    return out;
}

}  // namespace spa
