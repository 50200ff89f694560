// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/rational.hpp>

#include <l2sim/common.hpp>

#include <algorithm>
#include <cstdlib>

namespace l2sim {

namespace {

__int128 gcd128(__int128 a, __int128 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

std::string int128_to_string(__int128 v)
{
    if (v == 0) return "0";
    bool neg = v < 0;
    // Avoid overflow on INT128_MIN by peeling digits from the negative range.
    std::string out;
    __int128 x = v;
    while (x != 0) {
        int digit = static_cast<int>(x % 10);
        x /= 10;
        if (digit < 0) digit = -digit;
        out.push_back(static_cast<char>('0' + digit));
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Rat::Rat(std::int64_t num, std::int64_t den) : m_num(num), m_den(den)
{
    if (den == 0) throw SimError(Err::invalid_params, "rational with zero denominator");
    normalize();
}

Rat Rat::from_int128(Int num, Int den)
{
    if (den == 0) throw SimError(Err::invalid_params, "rational with zero denominator");
    Rat r;
    r.m_num = num;
    r.m_den = den;
    r.normalize();
    return r;
}

void Rat::normalize()
{
    if (m_den < 0) {
        m_num = -m_num;
        m_den = -m_den;
    }
    if (m_num == 0) {
        m_den = 1;
        return;
    }
    Int g = gcd128(m_num, m_den);
    m_num /= g;
    m_den /= g;
}

Rat Rat::parse(const std::string& text)
{
    if (text.empty()) throw SimError(Err::invalid_params, "empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rat a = parse(text.substr(0, slash));
        Rat b = parse(text.substr(slash + 1));
        return a / b;
    }
    std::string s = text;
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    Int num = 0;
    Int den = 1;
    bool saw_digit = false;
    bool in_frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (in_frac) throw SimError(Err::invalid_params, "malformed rational: " + text);
            in_frac = true;
            continue;
        }
        if (c == '_' || c == ',') continue; // digit grouping
        if (c < '0' || c > '9') throw SimError(Err::invalid_params, "malformed rational: " + text);
        num = num * 10 + (c - '0');
        if (in_frac) den *= 10;
        saw_digit = true;
    }
    if (!saw_digit) throw SimError(Err::invalid_params, "malformed rational: " + text);
    return from_int128(neg ? -num : num, den);
}

Rat Rat::operator+(const Rat& o) const
{
    return from_int128(m_num * o.m_den + o.m_num * m_den, m_den * o.m_den);
}

Rat Rat::operator-(const Rat& o) const
{
    return from_int128(m_num * o.m_den - o.m_num * m_den, m_den * o.m_den);
}

Rat Rat::operator*(const Rat& o) const
{
    // Cross-reduce first to keep intermediates small.
    Int g1 = gcd128(m_num, o.m_den);
    Int g2 = gcd128(o.m_num, m_den);
    return from_int128((m_num / g1) * (o.m_num / g2), (m_den / g2) * (o.m_den / g1));
}

Rat Rat::operator/(const Rat& o) const
{
    if (o.m_num == 0) throw SimError(Err::invalid_params, "rational division by zero");
    return from_int128(m_num * o.m_den, m_den * o.m_num);
}

bool Rat::operator<(const Rat& o) const
{
    return m_num * o.m_den < o.m_num * m_den;
}

Rat::Int Rat::floor() const
{
    Int q = m_num / m_den;
    if (m_num % m_den != 0 && m_num < 0) --q;
    return q;
}

Rat::Int Rat::round() const
{
    // Half away from zero.
    if (m_num >= 0) {
        return (m_num / m_den) + (((m_num % m_den) * 2 >= m_den) ? 1 : 0);
    }
    return -Rat::from_int128(-m_num, m_den).round();
}

double Rat::to_double() const
{
    return static_cast<double>(m_num) / static_cast<double>(m_den);
}

std::string Rat::to_fraction_string() const
{
    if (m_den == 1) return int128_to_string(m_num);
    return int128_to_string(m_num) + "/" + int128_to_string(m_den);
}

std::string Rat::to_decimal_string(int significant_digits) const
{
    if (significant_digits < 1) significant_digits = 1;
    if (m_num == 0) return "0";
    bool neg = m_num < 0;
    Int n = neg ? -m_num : m_num;
    Int d = m_den;

    // Scale into [10^(sig-1), 10^sig) and keep the decimal exponent.
    int exp10 = 0;
    while (n / d >= 10) {
        d *= 10;
        ++exp10;
    }
    while (n < d) {
        n *= 10;
        --exp10;
    }
    Int digits = 0;
    for (int i = 0; i < significant_digits; ++i) {
        Int q = n / d;
        digits = digits * 10 + q;
        n = (n - q * d) * 10;
    }
    // Round the final digit on the remainder.
    if (n * 2 >= d * 10) {
        ++digits;
        Int cap = 1;
        for (int i = 0; i < significant_digits; ++i) cap *= 10;
        if (digits == cap) {
            digits /= 10;
            ++exp10;
        }
    }

    std::string mant = int128_to_string(digits);
    // Highest digit has exponent exp10; value = 0.mant * 10^(exp10+1).
    int point = exp10 + 1;
    std::string out;
    if (point <= 0) {
        out = "0.";
        out.append(static_cast<std::size_t>(-point), '0');
        out += mant;
    } else if (static_cast<std::size_t>(point) >= mant.size()) {
        out = mant;
        out.append(static_cast<std::size_t>(point) - mant.size(), '0');
    } else {
        out = mant.substr(0, static_cast<std::size_t>(point)) + "." + mant.substr(static_cast<std::size_t>(point));
    }
    // Trim trailing fractional zeros.
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

} // namespace l2sim
