// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_HASH_HPP
#define L2SIM_HASH_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace l2sim {

//! 256-bit hash value. The build's hash function is SHA-256 throughout;
//! all preimages carry a domain tag so ids from different subsystems
//! can never collide structurally.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    bool operator==(const Hash256& o) const { return bytes == o.bytes; }
    bool operator!=(const Hash256& o) const { return bytes != o.bytes; }
    bool operator<(const Hash256& o) const { return bytes < o.bytes; }

    bool is_zero() const;
    std::string hex() const;
    static Hash256 from_hex(const std::string& hex);
};

Hash256 sha256(std::span<const std::uint8_t> data);

//! Incremental preimage builder; every hash in the simulator goes
//! through a tagged Hasher so serializations stay canonical.
class Hasher {
public:
    explicit Hasher(const std::string& domain_tag);

    Hasher& u8(std::uint8_t v);
    Hasher& u32(std::uint32_t v);
    Hasher& u64(std::uint64_t v);
    Hasher& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Hasher& str(const std::string& s); // length-prefixed
    Hasher& hash(const Hash256& h);
    Hasher& raw(std::span<const std::uint8_t> data);

    Hash256 finalize() const;

private:
    std::vector<std::uint8_t> m_buf;
};

} // namespace l2sim

#endif // L2SIM_HASH_HPP
