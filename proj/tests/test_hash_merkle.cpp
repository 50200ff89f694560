// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <l2sim/common.hpp>
#include <l2sim/hash.hpp>
#include <l2sim/merkle.hpp>
#include <l2sim/rng.hpp>

#include <string>
#include <vector>

using namespace l2sim;

namespace {

Hash256 sha256_str(const std::string& s)
{
    return sha256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

//! Reference recomputation: recursive, duplicate-last padding.
Hash256 naive_root(std::vector<Hash256> level)
{
    if (level.size() == 1) return level[0];
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Hash256> up;
    for (std::size_t i = 0; i < level.size(); i += 2) {
        up.push_back(merkle_combine(level[i], level[i + 1]));
    }
    return naive_root(std::move(up));
}

std::vector<Hash256> random_leaves(Rng& rng, std::size_t n)
{
    std::vector<Hash256> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.bytes32());
    return out;
}

} // namespace

TEST_CASE("sha256 matches FIPS 180-4 vectors")
{
    CHECK(sha256_str("").hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_str("abc").hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_str("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq").hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // One full block plus padding spill (70 bytes), and a long input.
    CHECK(sha256_str(std::string(70, 'a')).hex() ==
          "6bd5e5034855a11241f0dee8fc72850ffd9955b28347a86428b5fa19119f6ad0");
    CHECK(sha256_str(std::string(1000, 'x')).hex() ==
          "44f8354494a5ba03ba1792a8d3e9c534c47a9181980fde7a3f44b06ef2ae7c7f");
}

TEST_CASE("hex round trip")
{
    Rng rng(11);
    Hash256 h = rng.bytes32();
    CHECK(Hash256::from_hex(h.hex()) == h);
    CHECK_THROWS_AS(Hash256::from_hex("abcd"), SimError);
}

TEST_CASE("single-leaf root is the leaf")
{
    Rng rng(1);
    Hash256 h = rng.bytes32();
    std::vector<Hash256> leaves{h};
    CHECK(merkle_root(leaves) == h);
}

TEST_CASE("two-leaf root is one combine step")
{
    Rng rng(2);
    Hash256 h1 = rng.bytes32();
    Hash256 h2 = rng.bytes32();
    // Spell the combine out by hand: 0x01 prefix, then both nodes.
    std::vector<std::uint8_t> pre;
    pre.push_back(0x01);
    pre.insert(pre.end(), h1.bytes.begin(), h1.bytes.end());
    pre.insert(pre.end(), h2.bytes.begin(), h2.bytes.end());
    std::vector<Hash256> leaves{h1, h2};
    CHECK(merkle_root(leaves) == sha256(pre));
}

TEST_CASE("empty leaves rejected")
{
    std::vector<Hash256> none;
    CHECK_THROWS_AS(merkle_root(none), SimError);
    CHECK_THROWS_AS(merkle_prove(none, 0), SimError);
}

TEST_CASE("seven leaves match the reference recomputation")
{
    Rng rng(3);
    auto leaves = random_leaves(rng, 7);
    CHECK(merkle_root(leaves) == naive_root(leaves));
}

TEST_CASE("roots match the reference for every size 1..64")
{
    Rng rng(4);
    for (std::size_t n = 1; n <= 64; ++n) {
        auto leaves = random_leaves(rng, n);
        CHECK(merkle_root(leaves) == naive_root(leaves));
    }
}

TEST_CASE("prove/verify round-trips for every index, sizes 1..64")
{
    Rng rng(5);
    for (std::size_t n = 1; n <= 64; ++n) {
        auto leaves = random_leaves(rng, n);
        Hash256 root = merkle_root(leaves);
        for (std::size_t i = 0; i < n; ++i) {
            MerkleProof proof = merkle_prove(leaves, i);
            CHECK(proof.root == root);
            CHECK(merkle_verify(proof));
        }
    }
}

TEST_CASE("index out of range")
{
    Rng rng(6);
    auto leaves = random_leaves(rng, 4);
    CHECK_THROWS_AS(merkle_prove(leaves, 4), SimError);
}

TEST_CASE("any bit flip in leaf, sibling or root breaks verification")
{
    Rng rng(7);
    for (std::size_t n : {2u, 3u, 5u, 8u, 13u, 16u}) {
        auto leaves = random_leaves(rng, n);
        std::size_t index = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
        MerkleProof proof = merkle_prove(leaves, index);
        REQUIRE(merkle_verify(proof));

        for (std::size_t byte = 0; byte < 32; byte += 7) {
            for (int bit = 0; bit < 8; bit += 3) {
                MerkleProof p = proof;
                p.leaf.bytes[byte] ^= std::uint8_t(1u << bit);
                CHECK_FALSE(merkle_verify(p));

                p = proof;
                p.root.bytes[byte] ^= std::uint8_t(1u << bit);
                CHECK_FALSE(merkle_verify(p));

                for (std::size_t s = 0; s < proof.siblings.size(); ++s) {
                    p = proof;
                    p.siblings[s].bytes[byte] ^= std::uint8_t(1u << bit);
                    CHECK_FALSE(merkle_verify(p));
                }
            }
        }
    }
}

TEST_CASE("index perturbation fails on trees with distinct leaves")
{
    // Power-of-two sizes have no duplicate padding, so moving the claimed
    // position by any bit must land on a different root.
    Rng rng(8);
    auto leaves = random_leaves(rng, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        MerkleProof proof = merkle_prove(leaves, i);
        for (std::uint64_t bit = 0; bit < 3; ++bit) {
            MerkleProof p = proof;
            p.index ^= (1ull << bit);
            CHECK_FALSE(merkle_verify(p));
        }
        // An index beyond the tree width must never verify.
        MerkleProof p = proof;
        p.index += 8;
        CHECK_FALSE(merkle_verify(p));
    }
}

TEST_CASE("hasher uses length-prefixed strings")
{
    // ("ab","c") and ("a","bc") must not collide.
    Hash256 h1 = Hasher("t").str("ab").str("c").finalize();
    Hash256 h2 = Hasher("t").str("a").str("bc").finalize();
    CHECK(h1 != h2);
}
