// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_RATIONAL_HPP
#define L2SIM_RATIONAL_HPP

#include <cstdint>
#include <string>

namespace l2sim {

//! Exact rational number on 128-bit integers. Simulated clocks, block
//! intervals and the throughput calculators all run on Rat so that two
//! runs of the same scenario produce bit-identical results; doubles are
//! only ever derived at the rendering edge.
class Rat {
public:
    using Int = __int128;

    Rat() : m_num(0), m_den(1) {}
    Rat(std::int64_t n) : m_num(n), m_den(1) {} // NOLINT: implicit by design
    Rat(std::int64_t num, std::int64_t den);

    static Rat from_int128(Int num, Int den);

    //! Parse "7", "-2.5", "21/10". Throws invalid-params on malformed input.
    static Rat parse(const std::string& text);

    Int num() const { return m_num; }
    Int den() const { return m_den; }

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return from_int128(-m_num, m_den); }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return m_num == o.m_num && m_den == o.m_den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const;
    bool operator<=(const Rat& o) const { return *this < o || *this == o; }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return o <= *this; }

    //! Largest integer not above the value.
    Int floor() const;

    //! Nearest integer, half away from zero.
    Int round() const;

    double to_double() const;

    //! "p/q" (or just "p" for integers); exact, used in JSON output.
    std::string to_fraction_string() const;

    //! Decimal rendering with the given number of significant digits.
    std::string to_decimal_string(int significant_digits = 6) const;

private:
    void normalize();

    Int m_num;
    Int m_den; // > 0 after normalization
};

std::string int128_to_string(__int128 v);

} // namespace l2sim

#endif // L2SIM_RATIONAL_HPP
