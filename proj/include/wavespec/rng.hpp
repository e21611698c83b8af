#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace wavespec {

/// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic seed for a (base, a, b) cell, independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(base ^ 0xA5A5A5A5A5A5A5A5ull) ^ mix64(a ^ 0x0123456789ABCDEFull) ^
                 mix64(b ^ 0xFEDCBA9876543210ull));
}

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
/// A (seed, stream) pair names a reproducible stream; values do not depend
/// on how many other streams exist or on thread scheduling.
class Philox {
public:
    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
        idx_ = 4;
    }

    std::uint32_t next32() {
        if (idx_ == 4) {
            block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next64() {
        const std::uint64_t lo = next32();
        const std::uint64_t hi = next32();
        return lo | (hi << 32);
    }

    /// Uniform draw in (0, 1).
    double uniform() {
        return (static_cast<double>(next64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
    }

    void block() {
        std::array<std::uint32_t, 4> c = ctr_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint32_t hi0 = mulhi(0xD2511F53u, c[0]);
            const std::uint32_t lo0 = 0xD2511F53u * c[0];
            const std::uint32_t hi1 = mulhi(0xCD9E8D57u, c[2]);
            const std::uint32_t lo1 = 0xCD9E8D57u * c[2];
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_ = c;
        if (++ctr_[0] == 0 && ++ctr_[1] == 0) ++ctr_[2]; // 96-bit carry is plenty
    }

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> ctr_{};
    std::array<std::uint32_t, 4> out_{};
    int idx_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace wavespec
