#include "spa/resampling_oracle.hpp"

#include "format_util.hpp"
#include "parallel.hpp"
#include "spa/rng.hpp"
#include "wide_int.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace spa {

namespace detail {

ExactSummands::ExactSummands(std::span<const double> x) {
    parts_.reserve(x.size());
    int e_min = 0;
    bool any = false;
    for (double v : x) {
        if (v == 0.0) {
            parts_.push_back({0, 0});
            continue;
        }
        int k = 0;
        const double f = std::frexp(v, &k);
        std::int64_t m = static_cast<std::int64_t>(std::ldexp(f, 53));
        int e = k - 53;
        const int tz = std::countr_zero(static_cast<std::uint64_t>(m < 0 ? -m : m));
        m >>= tz;
        e += tz;
        parts_.push_back({m, e});
        e_min = any ? std::min(e_min, e) : e;
        any = true;
    }

    int top = 0;
    for (ScaledPart& p : parts_) {
        if (p.mant == 0) continue;
        p.shift -= e_min;
        const int width = std::bit_width(static_cast<std::uint64_t>(p.mant < 0 ? -p.mant : p.mant));
        top = std::max(top, width + p.shift);
    }
    bits_ = top + static_cast<int>(std::bit_width(x.size())) + 1;
    fits_int128_ = bits_ <= 127;
    if (!fits_int128_) return;
    fixed_.reserve(parts_.size());
    for (const ScaledPart& p : parts_) {
        fixed_.push_back(p.mant == 0 ? __int128{0} : static_cast<__int128>(p.mant) << p.shift);
    }
}

std::vector<__int128> gray_code_subset_sums(const ExactSummands& xs) {
    const auto v = xs.fixed();
    const std::size_t n = v.size();
    std::vector<__int128> out(std::size_t{1} << n);
    __int128 s = 0;
    out[0] = s;
    for (std::uint64_t i = 1; i < out.size(); ++i) {
        const int j = std::countr_zero(i);
        if ((gray_code(i) >> j) & 1U) {
            s += v[j];
        } else {
            s -= v[j];
        }
        out[i] = s;
    }
    return out;
}

}  // namespace detail

namespace {

struct Counts {
    std::uint64_t favorable = 0;
    std::uint64_t ties = 0;
};

bool is_negative(__int128 v) { return v < 0; }
bool is_zero(__int128 v) { return v == 0; }
template <std::size_t K>
bool is_negative(const detail::WideInt<K>& v) { return v.negative(); }
template <std::size_t K>
bool is_zero(const detail::WideInt<K>& v) { return v.zero(); }

template <class T>
void tally(const T& s, Counts& c) {
    if (is_negative(s)) {
        ++c.favorable;
    } else if (is_zero(s)) {
        ++c.favorable;
        ++c.ties;
    }
}

// Gray-code walk over the low `m` positions, starting from subset sum `base`.
template <class T>
Counts enumerate_block(std::span<const T> v, std::size_t m, T base) {
    Counts c;
    T s = base;
    tally(s, c);
    const std::uint64_t count = std::uint64_t{1} << m;
    for (std::uint64_t i = 1; i < count; ++i) {
        const int j = std::countr_zero(i);
        if ((detail::gray_code(i) >> j) & 1U) {
            s += v[j];
        } else {
            s -= v[j];
        }
        tally(s, c);
    }
    return c;
}

template <class T>
Counts enumerate_all(std::span<const T> v, unsigned threads) {
    const std::size_t n = v.size();
    const std::size_t prefix_bits = threads <= 1 ? 0 : std::min<std::size_t>(n, 6);
    const std::size_t m = n - prefix_bits;
    const std::size_t blocks = std::size_t{1} << prefix_bits;

    std::vector<Counts> per_block(blocks);
    detail::parallel_slices(blocks, std::min<unsigned>(threads, static_cast<unsigned>(blocks)),
                            [&](std::size_t begin, std::size_t end, unsigned) {
                                for (std::size_t b = begin; b < end; ++b) {
                                    T base{};
                                    for (std::size_t j = 0; j < prefix_bits; ++j) {
                                        if ((b >> j) & 1U) base += v[m + j];
                                    }
                                    per_block[b] = enumerate_block(v, m, base);
                                }
                            });
    Counts total;
    for (const Counts& c : per_block) {
        total.favorable += c.favorable;
        total.ties += c.ties;
    }
    return total;
}

template <class T>
bool flipped_sum_favorable(std::span<const T> v, SplitMix64& rng) {
    T s{};
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i % 64 == 0) bits = rng.next();
        if (bits & 1U) s += v[i];
        bits >>= 1;
    }
    return is_negative(s) || is_zero(s);
}

template <std::size_t K>
std::vector<detail::WideInt<K>> widen(const detail::ExactSummands& xs) {
    std::vector<detail::WideInt<K>> out;
    out.reserve(xs.size());
    for (const detail::ScaledPart& p : xs.parts()) out.push_back(detail::WideInt<K>::scaled(p.mant, p.shift));
    return out;
}

// Calls fn(span<const T>) with the narrowest exact representation.
template <class F>
auto with_exact_values(const detail::ExactSummands& xs, F&& fn) {
    if (xs.fits_int128()) return fn(xs.fixed());
    const int bits = xs.bits_needed();
    auto run = [&]<std::size_t K>() {
        const auto v = widen<K>(xs);
        return fn(std::span<const detail::WideInt<K>>(v));
    };
    if (bits <= 256) return run.template operator()<4>();
    if (bits <= 512) return run.template operator()<8>();
    if (bits <= 1024) return run.template operator()<16>();
    return run.template operator()<36>();
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
    const long double nb = static_cast<long double>(trials);
    const long double p = static_cast<long double>(successes) / nb;
    const long double z2 = static_cast<long double>(z) * z;
    const long double denom = 1.0L + z2 / nb;
    const long double center = (p + z2 / (2.0L * nb)) / denom;
    const long double half = (z / denom) * std::sqrt(p * (1.0L - p) / nb + z2 / (4.0L * nb * nb));
    return {std::clamp(std::min(center - half, p), 0.0L, 1.0L),
            std::clamp(std::max(center + half, p), 0.0L, 1.0L)};
}

ExactResult exact_enumeration(const Sample& sample, unsigned threads) {
    const std::size_t n = sample.size();
    if (n > kMaxEnumerationN) {
        throw TooLargeError("exact_enumeration: n = " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(kMaxEnumerationN) + "; use the Monte Carlo oracle");
    }
    threads = detail::resolve_threads(threads);
    const detail::ExactSummands xs(sample.values());
    const Counts c = with_exact_values(xs, [&](auto v) { return enumerate_all(v, threads); });

    ExactResult r;
    r.total = std::uint64_t{1} << n;
    r.favorable = c.favorable;
    r.ties = c.ties;
    r.p = static_cast<long double>(r.favorable) / static_cast<long double>(r.total);
    r.p_tie = static_cast<long double>(r.ties) / static_cast<long double>(r.total);
    return r;
}

McResult mc_pvalue(const Sample& sample, std::uint64_t b, std::uint64_t seed, unsigned threads) {
    if (b == 0) throw std::invalid_argument("mc_pvalue: replicate count b must be >= 1");
    threads = detail::resolve_threads(threads);
    const detail::ExactSummands xs(sample.values());

    std::vector<std::uint64_t> per_part(threads, 0);
    with_exact_values(xs, [&](auto v) {
        detail::parallel_slices(b, threads, [&](std::size_t begin, std::size_t end, unsigned part) {
            std::uint64_t fav = 0;
            for (std::size_t k = begin; k < end; ++k) {
                SplitMix64 rng(derive_key(seed, k));
                fav += flipped_sum_favorable(v, rng) ? 1 : 0;
            }
            per_part[part] = fav;
        });
        return 0;
    });

    McResult r;
    r.b = b;
    r.seed = seed;
    r.favorable = std::accumulate(per_part.begin(), per_part.end(), std::uint64_t{0});
    r.p_hat = static_cast<long double>(r.favorable) / static_cast<long double>(b);
    const Interval ci = wilson_interval(r.favorable, b, kZ99);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    return r;
}

ComparisonRow compare(const SignFlipReport& report, const OracleResult& oracle) {
    ComparisonRow row;
    row.n = report.n;
    row.w = report.w;
    row.p_lr = report.p_lr.value();
    row.p_rob = report.p_rob.value();
    if (const auto* ex = std::get_if<ExactResult>(&oracle)) {
        row.p_oracle = ex->p;
    } else {
        const auto& mc = std::get<McResult>(oracle);
        row.p_oracle = mc.p_hat;
        row.oracle_noisy = (mc.ci_high - mc.ci_low) > kNoisyCiFraction * mc.p_hat;
    }
    if (row.p_oracle > 0.0L) {
        row.rel_err_lr = row.p_lr / row.p_oracle - 1.0L;
        row.rel_err_rob = row.p_rob / row.p_oracle - 1.0L;
    }
    row.flagged = row.oracle_noisy || !row.rel_err_lr.has_value();
    return row;
}

std::string to_json(const ComparisonRow& row, const OracleResult& oracle) {
    using detail::fmt_num;
    auto opt = [](const std::optional<long double>& v) { return v ? fmt_num(*v) : std::string("null"); };
    std::string out = "{";
    out += "\"n\": " + std::to_string(row.n);
    out += ", \"w\": " + fmt_num(row.w);
    out += ", \"p_lr\": " + fmt_num(row.p_lr);
    out += ", \"p_rob\": " + fmt_num(row.p_rob);
    out += ", \"p_oracle\": " + fmt_num(row.p_oracle);
    out += ", \"rel_err_lr\": " + opt(row.rel_err_lr);
    out += ", \"rel_err_rob\": " + opt(row.rel_err_rob);
    if (const auto* ex = std::get_if<ExactResult>(&oracle)) {
        out += ", \"oracle\": \"exact\", \"favorable\": " + std::to_string(ex->favorable) +
               ", \"total\": " + std::to_string(ex->total) + ", \"ties\": " + std::to_string(ex->ties);
    } else {
        const auto& mc = std::get<McResult>(oracle);
        out += ", \"oracle\": \"mc\", \"b\": " + std::to_string(mc.b) + ", \"seed\": " + std::to_string(mc.seed) +
               ", \"ci_low\": " + fmt_num(mc.ci_low) + ", \"ci_high\": " + fmt_num(mc.ci_high);
    }
    out += ", \"oracle_noisy\": ";
    out += row.oracle_noisy ? "true" : "false";
    out += ", \"flagged\": ";
    out += row.flagged ? "true" : "false";
    out += "}";
    return out;
}

}  // namespace spa
