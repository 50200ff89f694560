// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/merkle.hpp>

#include <l2sim/common.hpp>

namespace l2sim {

Hash256 merkle_combine(const Hash256& left, const Hash256& right)
{
    std::vector<std::uint8_t> buf;
    buf.reserve(65);
    buf.push_back(0x01);
    buf.insert(buf.end(), left.bytes.begin(), left.bytes.end());
    buf.insert(buf.end(), right.bytes.begin(), right.bytes.end());
    return sha256(buf);
}

Hash256 empty_tree_root()
{
    return Hasher("l2sim/empty-tree").finalize();
}

Hash256 merkle_root(std::span<const Hash256> leaves)
{
    if (leaves.empty()) throw SimError(Err::empty_leaves, "merkle_root of no leaves");
    std::vector<Hash256> level(leaves.begin(), leaves.end());
    while (level.size() > 1) {
        if (level.size() % 2 == 1) level.push_back(level.back());
        std::vector<Hash256> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            next.push_back(merkle_combine(level[i], level[i + 1]));
        }
        level = std::move(next);
    }
    return level[0];
}

MerkleProof merkle_prove(std::span<const Hash256> leaves, std::size_t index)
{
    if (leaves.empty()) throw SimError(Err::empty_leaves, "merkle_prove of no leaves");
    if (index >= leaves.size()) {
        throw SimError(Err::index_out_of_range, "leaf index " + std::to_string(index) +
                                                    " of " + std::to_string(leaves.size()));
    }
    MerkleProof proof;
    proof.leaf = leaves[index];
    proof.index = index;

    std::vector<Hash256> level(leaves.begin(), leaves.end());
    std::size_t pos = index;
    while (level.size() > 1) {
        if (level.size() % 2 == 1) level.push_back(level.back());
        std::size_t sibling = pos ^ 1;
        proof.siblings.push_back(level[sibling]);
        std::vector<Hash256> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            next.push_back(merkle_combine(level[i], level[i + 1]));
        }
        level = std::move(next);
        pos /= 2;
    }
    proof.root = level[0];
    return proof;
}

bool merkle_verify(const MerkleProof& proof)
{
    Hash256 cur = proof.leaf;
    std::uint64_t pos = proof.index;
    for (const Hash256& sib : proof.siblings) {
        cur = (pos & 1) ? merkle_combine(sib, cur) : merkle_combine(cur, sib);
        pos >>= 1;
    }
    if (pos != 0) return false; // index wider than the tree
    return cur == proof.root;
}

} // namespace l2sim
