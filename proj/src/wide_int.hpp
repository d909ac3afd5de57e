#pragma once

// Fixed-width two's-complement integer for exact subset sums whose exponent
// span overflows __int128.

#include <array>
#include <cstddef>
#include <cstdint>

namespace spa::detail {

template <std::size_t K>
class WideInt {
public:
    WideInt() = default;

    /// mant * 2^shift; shift + 64 must fit in 64*K - 1 bits.
    static WideInt scaled(std::int64_t mant, int shift) {
        WideInt out;
        const std::uint64_t mag = mant < 0 ? 0 - static_cast<std::uint64_t>(mant) : static_cast<std::uint64_t>(mant);
        const std::size_t limb = static_cast<std::size_t>(shift) / 64;
        const unsigned off = static_cast<unsigned>(shift) % 64;
        out.w_[limb] = mag << off;
        if (off != 0 && limb + 1 < K) out.w_[limb + 1] = mag >> (64 - off);
        if (mant < 0) out.negate();
        return out;
    }

    WideInt& operator+=(const WideInt& o) {
        unsigned char carry = 0;
        for (std::size_t i = 0; i < K; ++i) {
            const unsigned __int128 t = static_cast<unsigned __int128>(w_[i]) + o.w_[i] + carry;
            w_[i] = static_cast<std::uint64_t>(t);
            carry = static_cast<unsigned char>(t >> 64);
        }
        return *this;
    }

    WideInt& operator-=(const WideInt& o) {
        unsigned char borrow = 0;
        for (std::size_t i = 0; i < K; ++i) {
            const std::uint64_t a = w_[i];
            const std::uint64_t d = a - o.w_[i] - borrow;
            borrow = (a < o.w_[i] || (a == o.w_[i] && borrow)) ? 1 : 0;
            w_[i] = d;
        }
        return *this;
    }

    bool negative() const { return (w_[K - 1] >> 63) != 0; }

    bool zero() const {
        for (std::uint64_t v : w_) {
            if (v != 0) return false;
        }
        return true;
    }

    friend bool operator==(const WideInt&, const WideInt&) = default;

private:
    void negate() {
        unsigned char carry = 1;
        for (std::size_t i = 0; i < K; ++i) {
            const unsigned __int128 t = static_cast<unsigned __int128>(~w_[i]) + carry;
            w_[i] = static_cast<std::uint64_t>(t);
            carry = static_cast<unsigned char>(t >> 64);
        }
    }

    std::array<std::uint64_t, K> w_{};
};

}  // namespace spa::detail
