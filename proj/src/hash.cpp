// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/hash.hpp>

#include <l2sim/common.hpp>

namespace l2sim {

namespace {

// FIPS 180-4 SHA-256 compression.
constexpr std::uint32_t K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void compress(std::uint32_t state[8], const std::uint8_t block[64])
{
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = (std::uint32_t(block[4 * i]) << 24) | (std::uint32_t(block[4 * i + 1]) << 16) |
               (std::uint32_t(block[4 * i + 2]) << 8) | std::uint32_t(block[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
        std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    std::uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int i = 0; i < 64; ++i) {
        std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        std::uint32_t ch = (e & f) ^ (~e & g);
        std::uint32_t t1 = h + s1 + ch + K[i] + w[i];
        std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        std::uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

} // namespace

Hash256 sha256(std::span<const std::uint8_t> data)
{
    std::uint32_t state[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                              0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::size_t full = data.size() / 64;
    for (std::size_t i = 0; i < full; ++i) {
        compress(state, data.data() + 64 * i);
    }
    // Final padded block(s).
    std::uint8_t tail[128] = {};
    std::size_t rem = data.size() - 64 * full;
    std::memcpy(tail, data.data() + 64 * full, rem);
    tail[rem] = 0x80;
    std::size_t tail_len = (rem + 9 <= 64) ? 64 : 128;
    std::uint64_t bitlen = std::uint64_t(data.size()) * 8;
    for (int i = 0; i < 8; ++i) {
        tail[tail_len - 1 - i] = static_cast<std::uint8_t>(bitlen >> (8 * i));
    }
    compress(state, tail);
    if (tail_len == 128) compress(state, tail + 64);

    Hash256 out;
    for (int i = 0; i < 8; ++i) {
        out.bytes[4 * i] = static_cast<std::uint8_t>(state[i] >> 24);
        out.bytes[4 * i + 1] = static_cast<std::uint8_t>(state[i] >> 16);
        out.bytes[4 * i + 2] = static_cast<std::uint8_t>(state[i] >> 8);
        out.bytes[4 * i + 3] = static_cast<std::uint8_t>(state[i]);
    }
    return out;
}

bool Hash256::is_zero() const
{
    for (auto b : bytes) {
        if (b != 0) return false;
    }
    return true;
}

std::string Hash256::hex() const
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Hash256 Hash256::from_hex(const std::string& hex)
{
    if (hex.size() != 64) throw SimError(Err::invalid_params, "hash hex must be 64 chars");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw SimError(Err::invalid_params, "bad hex digit");
    };
    Hash256 out;
    for (std::size_t i = 0; i < 32; ++i) {
        out.bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return out;
}

Hasher::Hasher(const std::string& domain_tag)
{
    str(domain_tag);
}

Hasher& Hasher::u8(std::uint8_t v)
{
    m_buf.push_back(v);
    return *this;
}

Hasher& Hasher::u32(std::uint32_t v)
{
    for (int i = 3; i >= 0; --i) m_buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Hasher& Hasher::u64(std::uint64_t v)
{
    for (int i = 7; i >= 0; --i) m_buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Hasher& Hasher::str(const std::string& s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    m_buf.insert(m_buf.end(), s.begin(), s.end());
    return *this;
}

Hasher& Hasher::hash(const Hash256& h)
{
    m_buf.insert(m_buf.end(), h.bytes.begin(), h.bytes.end());
    return *this;
}

Hasher& Hasher::raw(std::span<const std::uint8_t> data)
{
    m_buf.insert(m_buf.end(), data.begin(), data.end());
    return *this;
}

Hash256 Hasher::finalize() const
{
    return sha256(m_buf);
}

} // namespace l2sim
