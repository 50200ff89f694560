// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <l2sim/chain.hpp>
#include <l2sim/rng.hpp>

using namespace l2sim;

TEST_CASE("bitcoin block capacity")
{
    ChainParams p = ChainParams::bitcoin_2021();
    TpsCapacity cap = tps_capacity(p);
    CHECK(cap.tpb.to_double() == doctest::Approx(2759).epsilon(0.001));
    CHECK(cap.tps.to_double() == doctest::Approx(4.6).epsilon(0.01));
    // Exact values: 1,048,576/380 and that over 600 s.
    CHECK(cap.tpb == Rat(1048576, 380));
    CHECK(cap.tps == Rat(1048576, 380) / Rat(600));
}

TEST_CASE("one tx per block per second")
{
    ChainParams p = ChainParams::bitcoin_2021();
    p.block_size_bytes = p.avg_tx_size_bytes;
    p.block_interval_s = Rat(1);
    TpsCapacity cap = tps_capacity(p);
    CHECK(cap.tpb == Rat(1));
    CHECK(cap.tps == Rat(1));
}

TEST_CASE("segwit 4MB capacity")
{
    // 4,194,304 / 380 = 11,037.6421...; over 600 s = 18.3960701...
    ChainParams p = ChainParams::bitcoin_2021();
    p.block_size_bytes = 4'194'304;
    TpsCapacity cap = tps_capacity(p);
    CHECK(cap.tps.to_double() == doctest::Approx(18.39607).epsilon(1e-6));
}

TEST_CASE("invalid params rejected")
{
    ChainParams p = ChainParams::bitcoin_2021();
    p.avg_tx_size_bytes = 0;
    CHECK_THROWS_AS(tps_capacity(p), SimError);
    p = ChainParams::bitcoin_2021();
    p.block_interval_s = Rat(-1);
    CHECK_THROWS_AS(tps_capacity(p), SimError);
}

TEST_CASE("relay constraint")
{
    ChainParams p = ChainParams::bitcoin_2021();
    CHECK(check_relay_constraint(p)); // 600 >= 14

    p.block_interval_s = Rat(14);
    CHECK(check_relay_constraint(p)); // boundary equality

    p.block_interval_s = Rat(10);
    CHECK_FALSE(check_relay_constraint(p));
}

TEST_CASE("capacity is monotone in its inputs")
{
    ChainParams base = ChainParams::bitcoin_2021();
    Rat prev_tps = tps_capacity(base).tps;
    for (std::int64_t b = base.block_size_bytes + 1000; b < base.block_size_bytes + 100000; b += 10000) {
        ChainParams p = base;
        p.block_size_bytes = b;
        Rat tps = tps_capacity(p).tps;
        CHECK(tps > prev_tps);
        prev_tps = tps;
    }
    ChainParams slower = base;
    slower.block_interval_s = base.block_interval_s + Rat(60);
    CHECK(tps_capacity(slower).tps < tps_capacity(base).tps);
    ChainParams fatter_txs = base;
    fatter_txs.avg_tx_size_bytes = base.avg_tx_size_bytes + 100;
    CHECK(tps_capacity(fatter_txs).tps < tps_capacity(base).tps);
}

TEST_CASE("byte fees")
{
    CHECK(byte_fee(235, 100) == 23'500);
    CHECK(byte_fee(300, 100) == 30'000);
    CHECK(byte_fee(0, 100) == 0);
    CHECK_THROWS_AS(byte_fee(-1, 100), SimError);
}

TEST_CASE("gas fees in smallest units")
{
    // 21,000 gas at 3 Gwei = 0.000063 of the native unit.
    CHECK(gas_fee(21'000, 3'000'000'000) == 63'000'000'000'000);
    // 77,000 gas at 40 Gwei = 0.00308 ETH.
    CHECK(gas_fee(77'000, 40'000'000'000) == 3'080'000'000'000'000);
    // 245,000 gas at 40 Gwei = 0.0098 ETH.
    CHECK(gas_fee(245'000, 40'000'000'000) == 9'800'000'000'000'000);
    // 62,500 gas at 27 Gwei = 0.0016875 ETH.
    CHECK(gas_fee(62'500, 27'000'000'000) == 1'687'500'000'000'000);
    CHECK(gas_fee(0, 1) == 0);
}

TEST_CASE("presets and JSON loading")
{
    ChainParams btc = ChainParams::preset("bitcoin-2021");
    CHECK(btc.block_size_bytes == 1'048'576);
    CHECK(btc.block_interval_s == Rat(600));

    ChainParams eth = ChainParams::preset("ethereum-2021");
    CHECK(eth.gas_limit_per_block == 12'500'000);
    CHECK(eth.gas_per_byte == 16);
    CHECK(eth.avg_block_time_s == Rat(13));

    CHECK_THROWS_AS(ChainParams::preset("dogecoin"), SimError);

    ChainParams round = ChainParams::from_json(btc.to_json());
    CHECK(round.block_size_bytes == btc.block_size_bytes);
    CHECK(round.block_interval_s == btc.block_interval_s);
    CHECK(round.avg_tx_size_bytes == btc.avg_tx_size_bytes);

    nlohmann::json j = btc.to_json();
    j["block_interval_s"] = 2.1;
    CHECK(ChainParams::from_json(j).block_interval_s == Rat(21, 10));
    j["block_interval_s"] = "2.1";
    CHECK(ChainParams::from_json(j).block_interval_s == Rat(21, 10));
    j["block_interval_s"] = nlohmann::json::array({21, 10});
    CHECK(ChainParams::from_json(j).block_interval_s == Rat(21, 10));

    j["bogus_key"] = 1;
    CHECK_THROWS_AS(ChainParams::from_json(j), SimError);
}

TEST_CASE("empty mempool produces an empty block")
{
    L1Chain chain(ChainParams::bitcoin_2021());
    const Block& b = chain.produce_block();
    CHECK(b.txs.empty());
    CHECK(b.height == 1);
    CHECK(b.timestamp_s == Rat(600));
    CHECK(b.tx_root == empty_tree_root());
}

TEST_CASE("fee ordering with limited capacity")
{
    ChainParams p = ChainParams::bitcoin_2021();
    p.block_size_bytes = 760; // room for two 380-byte txs
    p.gas_limit_per_block = 760;
    L1Chain chain(p);

    auto tx_with_fee = [&](Amount fee, std::uint64_t nonce) {
        return L1Transaction::make("a", "b", 10, 380, 380, fee, TxKind::transfer, nonce);
    };
    chain.submit_tx(tx_with_fee(5, 0));
    chain.submit_tx(tx_with_fee(9, 1));
    chain.submit_tx(tx_with_fee(7, 2));

    const Block& b = chain.produce_block();
    REQUIRE(b.txs.size() == 2);
    CHECK(b.txs[0].fee == 9);
    CHECK(b.txs[1].fee == 7);
    CHECK(chain.mempool_size() == 1);

    const Block& b2 = chain.produce_block();
    REQUIRE(b2.txs.size() == 1);
    CHECK(b2.txs[0].fee == 5);
}

TEST_CASE("fee ties break by ascending id")
{
    ChainParams p = ChainParams::bitcoin_2021();
    L1Chain chain(p);
    std::vector<L1Transaction> txs;
    for (std::uint64_t n = 0; n < 8; ++n) {
        txs.push_back(L1Transaction::make("a", "b", 1, 380, 380, 50, TxKind::transfer, n));
    }
    for (const auto& tx : txs) chain.submit_tx(tx);
    const Block& b = chain.produce_block();
    REQUIRE(b.txs.size() == 8);
    for (std::size_t i = 1; i < b.txs.size(); ++i) {
        CHECK(b.txs[i - 1].id < b.txs[i].id);
    }
}

TEST_CASE("a bitcoin block fits floor(TPB) average-size txs")
{
    ChainParams p = ChainParams::bitcoin_2021();
    L1Chain chain(p);
    const std::int64_t expected = tps_capacity(p).tpb.floor(); // 2,759
    for (std::uint64_t n = 0; n < 3000; ++n) {
        chain.submit_tx(L1Transaction::make("a", "b", 1, 380, 380, 1, TxKind::transfer, n));
    }
    const Block& b = chain.produce_block();
    CHECK(static_cast<std::int64_t>(b.txs.size()) == expected);
    CHECK(chain.mempool_size() == 3000 - static_cast<std::size_t>(expected));
}

TEST_CASE("duplicate tx ids rejected")
{
    L1Chain chain(ChainParams::bitcoin_2021());
    auto tx = L1Transaction::make("a", "b", 1, 380, 380, 1, TxKind::transfer, 0);
    chain.submit_tx(tx);
    CHECK_THROWS_AS(chain.submit_tx(tx), SimError);
}

TEST_CASE("chain linkage and capacity invariants over a random run")
{
    ChainParams p = ChainParams::bitcoin_2021();
    p.block_size_bytes = 4000;
    p.gas_limit_per_block = 4000;
    L1Chain chain(p);
    Rng rng(42);

    std::uint64_t nonce = 0;
    for (int round = 0; round < 20; ++round) {
        int n = static_cast<int>(rng.uniform(0, 12));
        for (int i = 0; i < n; ++i) {
            std::int64_t size = rng.uniform(100, 900);
            chain.submit_tx(L1Transaction::make("a", "b", 1, size, size,
                                                rng.uniform(0, 500), TxKind::transfer, nonce++));
        }
        chain.produce_block();
    }
    while (chain.mempool_size() > 0) chain.produce_block();

    const auto& blocks = chain.blocks();
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        CHECK(blocks[h].parent_hash == blocks[h - 1].header_hash());
        CHECK(blocks[h].timestamp_s == blocks[h - 1].timestamp_s + p.block_interval_s);
        std::int64_t bytes = 0;
        std::int64_t gas = 0;
        for (const auto& tx : blocks[h].txs) {
            bytes += tx.size_bytes;
            gas += tx.gas_used;
        }
        CHECK(bytes <= p.block_size_bytes);
        CHECK(gas <= p.gas_limit_per_block);
        if (!blocks[h].txs.empty()) {
            std::vector<Hash256> ids;
            for (const auto& tx : blocks[h].txs) ids.push_back(tx.id);
            CHECK(blocks[h].tx_root == merkle_root(ids));
        }
    }
}

TEST_CASE("account balances")
{
    L1Chain chain(ChainParams::bitcoin_2021());
    chain.credit("alice", 1000);
    chain.debit("alice", 400);
    CHECK(chain.balance("alice") == 600);
    CHECK(chain.balance("bob") == 0);
    CHECK_THROWS_AS(chain.debit("alice", 601), SimError);
    CHECK_THROWS_AS(chain.debit("bob", 1), SimError);
}
