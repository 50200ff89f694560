// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_MERKLE_HPP
#define L2SIM_MERKLE_HPP

#include <l2sim/hash.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace l2sim {

//! Inclusion proof: index-bit order selects left/right at each level.
struct MerkleProof {
    Hash256 leaf;
    std::uint64_t index = 0;
    std::vector<Hash256> siblings;
    Hash256 root;
};

//! One combine step. Interior nodes carry a 0x01 prefix so an interior
//! hash can never be replayed as a leaf id (leaf ids are created under
//! their own domain tags).
Hash256 merkle_combine(const Hash256& left, const Hash256& right);

//! Binary tree root. Odd levels duplicate their last node; the root of
//! a single leaf is the leaf itself. Throws empty-leaves on [].
Hash256 merkle_root(std::span<const Hash256> leaves);

//! Root used for an empty transaction list.
Hash256 empty_tree_root();

MerkleProof merkle_prove(std::span<const Hash256> leaves, std::size_t index);

bool merkle_verify(const MerkleProof& proof);

} // namespace l2sim

#endif // L2SIM_MERKLE_HPP
