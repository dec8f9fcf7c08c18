#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace ssid {

// Deterministic random source.  mt19937_64 has a standard-mandated output
// sequence, so a seed reproduces the same stream on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    Rng(const Rng&) = delete;
    Rng& operator=(const Rng&) = delete;
    Rng(Rng&&) = default;

    uint64_t next64() { return gen_(); }

    bool bit() { return (next64() & 1u) != 0; }

    // Uniform integer in [0, n), n > 0, by rejection sampling.
    mpz_class below(const mpz_class& n) {
        size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
        size_t words = (bits + 63) / 64;
        while (true) {
            mpz_class x = 0;
            for (size_t i = 0; i < words; ++i) {
                x <<= 64;
                x += mpz_class(static_cast<unsigned long>(next64()));
            }
            size_t excess = words * 64 - bits;
            x >>= excess;
            if (x < n) return x;
        }
    }

    uint64_t below_u64(uint64_t n) {
        // n is tiny everywhere this is used; modulo bias is irrelevant for
        // n << 2^64 but rejection keeps the stream exactly uniform anyway.
        uint64_t limit = n * (UINT64_MAX / n);
        while (true) {
            uint64_t x = next64();
            if (x < limit) return x % n;
        }
    }

    // Independent child stream (splitmix64 of seed and index).
    static uint64_t derive(uint64_t seed, uint64_t index) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ssid
