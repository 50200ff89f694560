// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_CHAIN_HPP
#define L2SIM_CHAIN_HPP

#include <l2sim/common.hpp>
#include <l2sim/eventlog.hpp>
#include <l2sim/hash.hpp>
#include <l2sim/merkle.hpp>
#include <l2sim/rational.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace l2sim {

//! Layer-1 capacity and fee parameters. Block production is a pure
//! timer: one block every block_interval_s of simulated time.
struct ChainParams {
    std::int64_t block_size_bytes = 0;   // B
    Rat block_interval_s;                // TB
    Rat relay_time_s;                    // TR
    std::int64_t avg_tx_size_bytes = 0;
    std::int64_t gas_limit_per_block = 0;
    std::int64_t gas_per_byte = 0;
    Rat avg_block_time_s;

    //! Throws invalid-params unless every field is strictly positive.
    void validate() const;

    static ChainParams bitcoin_2021();
    static ChainParams ethereum_2021();
    static ChainParams preset(const std::string& name);
    static ChainParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

enum class TxKind {
    transfer,
    channel_open,
    channel_close,
    plasma_commit,
    plasma_deposit,
    plasma_exit,
    rollup_batch,
    rollup_deposit,
};

const char* tx_kind_name(TxKind k);

struct L1Transaction {
    Hash256 id;
    AccountId sender;
    AccountId receiver;
    Amount amount = 0;
    std::int64_t size_bytes = 0;
    std::int64_t gas_used = 0;
    Amount fee = 0;
    TxKind kind = TxKind::transfer;

    //! Canonical id: hash of the serialized fields plus a caller nonce
    //! to keep intentionally identical payments distinct.
    static L1Transaction make(AccountId sender, AccountId receiver, Amount amount,
                              std::int64_t size_bytes, std::int64_t gas_used, Amount fee,
                              TxKind kind, std::uint64_t nonce);
};

struct Block {
    std::int64_t height = 0;
    Hash256 parent_hash;
    Hash256 tx_root;
    Rat timestamp_s;
    std::vector<L1Transaction> txs;

    Hash256 header_hash() const;
};

//! Capacity calculators.
struct TpsCapacity {
    Rat tpb;
    Rat tps;
};
TpsCapacity tps_capacity(const ChainParams& params);
bool check_relay_constraint(const ChainParams& params);

//! size_bytes * feerate, in the chain's smallest unit.
Amount byte_fee(std::int64_t size_bytes, Amount feerate_per_byte);
//! gas * gas_price, in the chain's smallest unit.
Amount gas_fee(std::int64_t gas, Amount gas_price);

//! Simulated Layer-1 chain: account balances, a fee-ordered mempool and
//! timer-driven block production. Deterministic; one instance per
//! simulation, never shared.
class L1Chain {
public:
    explicit L1Chain(ChainParams params, EventLog* log = nullptr);

    const ChainParams& params() const { return m_params; }
    std::int64_t height() const { return m_blocks.back().height; }
    Rat now() const { return m_blocks.back().timestamp_s; }
    const Block& tip() const { return m_blocks.back(); }
    const std::vector<Block>& blocks() const { return m_blocks; }
    std::size_t mempool_size() const { return m_mempool.size(); }

    //! Throws duplicate-tx-id if the id was ever seen.
    void submit_tx(const L1Transaction& tx);

    //! Drain the mempool (fee desc, id asc) into a new block at
    //! prev.timestamp + block_interval_s.
    const Block& produce_block();

    //! Produce blocks until the chain clock reaches at least `until`.
    void produce_until(const Rat& until);

    // Account plumbing for the L2 engines.
    void credit(const AccountId& account, Amount amount);
    //! Throws insufficient-l1-funds.
    void debit(const AccountId& account, Amount amount);
    Amount balance(const AccountId& account) const;

    std::uint64_t next_nonce() { return m_nonce++; }

private:
    ChainParams m_params;
    std::vector<Block> m_blocks;
    std::vector<L1Transaction> m_mempool;
    std::set<Hash256> m_seen_ids;
    std::map<AccountId, Amount> m_balances;
    std::uint64_t m_nonce = 0;
    EventLog* m_log;
};

} // namespace l2sim

#endif // L2SIM_CHAIN_HPP
