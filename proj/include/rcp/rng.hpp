#pragma once

#include <cstdint>
#include <cstring>
#include <cmath>
#include <random>

namespace rcp {

// splitmix64; used only to mix seeds, never as the working generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, stream). Replicas, edges
// and sites each get their own stream id, so parallel and serial runs draw
// identical numbers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0xd1342543de82ef95ULL * (stream + 0x632be59bd9b4e019ULL));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b >> 1);
}

inline std::uint64_t hash_double(std::uint64_t seed, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    std::uint64_t s = seed ^ (bits * 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

// mt19937_64 is fully specified by the standard, so streams are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // uniform in [0,1)
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform in (0,1); 52 bits so the top value stays below 1 after rounding
    // (with 53 bits, (2^53 - 0.5) / 2^53 rounds to exactly 1 and log returns 0)
    double u01_open() { return (static_cast<double>(gen_() >> 12) + 0.5) * 0x1.0p-52; }

    double exponential(double rate) { return -std::log(u01_open()) / rate; }

private:
    std::mt19937_64 gen_;
};

inline double u01_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace rcp
