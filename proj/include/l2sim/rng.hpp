// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_RNG_HPP
#define L2SIM_RNG_HPP

#include <l2sim/hash.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace l2sim {

//! Deterministic RNG. One master seed flows into every simulation;
//! sub-streams are derived by label so that adding a consumer never
//! shifts another consumer's sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_gen(seed), m_seed0(seed) {}

    std::uint64_t next_u64() { return m_gen(); }

    //! Uniform in [lo, hi], both inclusive.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64()); // full range
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    //! Uniform in [0,1).
    double unit()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool chance(double p) { return unit() < p; }

    //! Exponential with the given mean.
    double exponential(double mean)
    {
        double u = unit();
        return -mean * std::log1p(-u);
    }

    Hash256 bytes32()
    {
        Hash256 h;
        for (int i = 0; i < 4; ++i) {
            std::uint64_t v = next_u64();
            for (int b = 0; b < 8; ++b) {
                h.bytes[static_cast<std::size_t>(8 * i + b)] = static_cast<std::uint8_t>(v >> (8 * b));
            }
        }
        return h;
    }

    //! Derived sub-stream, stable under unrelated changes.
    Rng child(const std::string& label, std::uint64_t index = 0) const
    {
        Hash256 h = Hasher("l2sim/rng").u64(m_seed0).str(label).u64(index).finalize();
        std::uint64_t s = 0;
        for (int i = 0; i < 8; ++i) s = (s << 8) | h.bytes[static_cast<std::size_t>(i)];
        return Rng(s);
    }

private:
    std::mt19937_64 m_gen;
    std::uint64_t m_seed0;
};

} // namespace l2sim

#endif // L2SIM_RNG_HPP
