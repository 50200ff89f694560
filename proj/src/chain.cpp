// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/chain.hpp>

#include <algorithm>

namespace l2sim {

namespace {

Rat rat_from_json(const nlohmann::json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    if (v.is_string()) return Rat::parse(v.get<std::string>());
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
        return Rat(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
    }
    if (v.is_number_float()) {
        // nlohmann renders the shortest decimal that round-trips, so a
        // hand-written "2.1" comes back as the exact rational 21/10.
        return Rat::parse(nlohmann::json(v.get<double>()).dump());
    }
    throw SimError(Err::schema_invalid, key + " must be an integer, decimal string or [num,den]");
}

nlohmann::json rat_to_json(const Rat& r)
{
    if (r.den() == 1 && r.num() <= INT64_MAX && r.num() >= INT64_MIN) {
        return static_cast<std::int64_t>(r.num());
    }
    return r.to_fraction_string();
}

} // namespace

void ChainParams::validate() const
{
    bool ok = block_size_bytes > 0 && block_interval_s > Rat(0) && relay_time_s > Rat(0) &&
              avg_tx_size_bytes > 0 && gas_limit_per_block > 0 && gas_per_byte > 0 &&
              avg_block_time_s > Rat(0);
    if (!ok) throw SimError(Err::invalid_params, "chain parameters must be strictly positive");
}

ChainParams ChainParams::bitcoin_2021()
{
    ChainParams p;
    p.block_size_bytes = 1'048'576;
    p.block_interval_s = Rat(600);
    p.relay_time_s = Rat(14);
    p.avg_tx_size_bytes = 380;
    // Bitcoin has no gas market; mirror the byte limit so the gas
    // constraint never binds independently.
    p.gas_limit_per_block = 1'048'576;
    p.gas_per_byte = 1;
    p.avg_block_time_s = Rat(600);
    return p;
}

ChainParams ChainParams::ethereum_2021()
{
    ChainParams p;
    p.gas_limit_per_block = 12'500'000;
    p.gas_per_byte = 16;
    p.avg_block_time_s = Rat(13);
    p.block_interval_s = Rat(13);
    p.relay_time_s = Rat(2);
    p.block_size_bytes = 781'250;  // gas limit / gas per byte
    p.avg_tx_size_bytes = 3'397;   // ~54,350 gas per tx / 16 gas per byte
    return p;
}

ChainParams ChainParams::preset(const std::string& name)
{
    if (name == "bitcoin-2021") return bitcoin_2021();
    if (name == "ethereum-2021") return ethereum_2021();
    throw SimError(Err::invalid_params, "unknown chain preset: " + name);
}

ChainParams ChainParams::from_json(const nlohmann::json& j)
{
    static const std::set<std::string> known = {
        "block_size_bytes", "block_interval_s", "relay_time_s", "avg_tx_size_bytes",
        "gas_limit_per_block", "gas_per_byte", "avg_block_time_s"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw SimError(Err::schema_invalid, "unknown chain parameter: " + it.key());
        }
    }
    ChainParams p;
    p.block_size_bytes = j.at("block_size_bytes").get<std::int64_t>();
    p.block_interval_s = rat_from_json(j, "block_interval_s");
    p.relay_time_s = rat_from_json(j, "relay_time_s");
    p.avg_tx_size_bytes = j.at("avg_tx_size_bytes").get<std::int64_t>();
    p.gas_limit_per_block = j.at("gas_limit_per_block").get<std::int64_t>();
    p.gas_per_byte = j.at("gas_per_byte").get<std::int64_t>();
    p.avg_block_time_s = j.contains("avg_block_time_s") ? rat_from_json(j, "avg_block_time_s")
                                                        : p.block_interval_s;
    p.validate();
    return p;
}

nlohmann::json ChainParams::to_json() const
{
    return nlohmann::json{
        {"block_size_bytes", block_size_bytes},
        {"block_interval_s", rat_to_json(block_interval_s)},
        {"relay_time_s", rat_to_json(relay_time_s)},
        {"avg_tx_size_bytes", avg_tx_size_bytes},
        {"gas_limit_per_block", gas_limit_per_block},
        {"gas_per_byte", gas_per_byte},
        {"avg_block_time_s", rat_to_json(avg_block_time_s)},
    };
}

const char* tx_kind_name(TxKind k)
{
    switch (k) {
    case TxKind::transfer: return "transfer";
    case TxKind::channel_open: return "channel_open";
    case TxKind::channel_close: return "channel_close";
    case TxKind::plasma_commit: return "plasma_commit";
    case TxKind::plasma_deposit: return "plasma_deposit";
    case TxKind::plasma_exit: return "plasma_exit";
    case TxKind::rollup_batch: return "rollup_batch";
    case TxKind::rollup_deposit: return "rollup_deposit";
    }
    return "unknown";
}

L1Transaction L1Transaction::make(AccountId sender, AccountId receiver, Amount amount,
                                  std::int64_t size_bytes, std::int64_t gas_used, Amount fee,
                                  TxKind kind, std::uint64_t nonce)
{
    L1Transaction tx;
    tx.sender = std::move(sender);
    tx.receiver = std::move(receiver);
    tx.amount = amount;
    tx.size_bytes = size_bytes;
    tx.gas_used = gas_used;
    tx.fee = fee;
    tx.kind = kind;
    tx.id = Hasher("l2sim/l1tx")
                .str(tx.sender)
                .str(tx.receiver)
                .i64(tx.amount)
                .i64(tx.size_bytes)
                .i64(tx.gas_used)
                .i64(tx.fee)
                .u8(static_cast<std::uint8_t>(kind))
                .u64(nonce)
                .finalize();
    return tx;
}

Hash256 Block::header_hash() const
{
    return Hasher("l2sim/block")
        .i64(height)
        .hash(parent_hash)
        .hash(tx_root)
        .str(timestamp_s.to_fraction_string())
        .finalize();
}

TpsCapacity tps_capacity(const ChainParams& params)
{
    params.validate();
    TpsCapacity out;
    out.tpb = Rat(params.block_size_bytes) / Rat(params.avg_tx_size_bytes);
    out.tps = out.tpb / params.block_interval_s;
    return out;
}

bool check_relay_constraint(const ChainParams& params)
{
    params.validate();
    return params.block_interval_s >= params.relay_time_s;
}

Amount byte_fee(std::int64_t size_bytes, Amount feerate_per_byte)
{
    if (size_bytes < 0 || feerate_per_byte < 0) {
        throw SimError(Err::invalid_params, "byte_fee arguments must be non-negative");
    }
    return checked_mul(size_bytes, feerate_per_byte);
}

Amount gas_fee(std::int64_t gas, Amount gas_price)
{
    if (gas < 0 || gas_price < 0) {
        throw SimError(Err::invalid_params, "gas_fee arguments must be non-negative");
    }
    return checked_mul(gas, gas_price);
}

L1Chain::L1Chain(ChainParams params, EventLog* log) : m_params(std::move(params)), m_log(log)
{
    m_params.validate();
    Block genesis;
    genesis.height = 0;
    genesis.tx_root = empty_tree_root();
    genesis.timestamp_s = Rat(0);
    m_blocks.push_back(std::move(genesis));
}

void L1Chain::submit_tx(const L1Transaction& tx)
{
    if (tx.size_bytes <= 0) throw SimError(Err::invalid_params, "tx size must be positive");
    if (tx.fee < 0) throw SimError(Err::invalid_params, "tx fee must be non-negative");
    if (tx.size_bytes > m_params.block_size_bytes || tx.gas_used > m_params.gas_limit_per_block) {
        throw SimError(Err::invalid_params, "tx can never fit a block");
    }
    if (m_seen_ids.count(tx.id)) {
        throw SimError(Err::duplicate_tx_id, tx.id.hex());
    }
    m_seen_ids.insert(tx.id);
    m_mempool.push_back(tx);
}

const Block& L1Chain::produce_block()
{
    std::stable_sort(m_mempool.begin(), m_mempool.end(),
                     [](const L1Transaction& a, const L1Transaction& b) {
                         if (a.fee != b.fee) return a.fee > b.fee;
                         return a.id < b.id;
                     });

    Block block;
    block.height = m_blocks.back().height + 1;
    block.parent_hash = m_blocks.back().header_hash();
    block.timestamp_s = m_blocks.back().timestamp_s + m_params.block_interval_s;

    std::int64_t bytes_used = 0;
    std::int64_t gas_used = 0;
    std::vector<L1Transaction> deferred;
    for (auto& tx : m_mempool) {
        if (bytes_used + tx.size_bytes <= m_params.block_size_bytes &&
            gas_used + tx.gas_used <= m_params.gas_limit_per_block) {
            bytes_used += tx.size_bytes;
            gas_used += tx.gas_used;
            block.txs.push_back(std::move(tx));
        } else {
            deferred.push_back(std::move(tx));
        }
    }
    m_mempool = std::move(deferred);

    if (block.txs.empty()) {
        block.tx_root = empty_tree_root();
    } else {
        std::vector<Hash256> ids;
        ids.reserve(block.txs.size());
        for (const auto& tx : block.txs) ids.push_back(tx.id);
        block.tx_root = merkle_root(ids);
    }

    m_blocks.push_back(std::move(block));
    const Block& b = m_blocks.back();
    if (m_log) {
        m_log->emit(b.timestamp_s, "l1.block",
                    {{"height", b.height},
                     {"txs", b.txs.size()},
                     {"mempool", m_mempool.size()}});
    }
    return b;
}

void L1Chain::produce_until(const Rat& until)
{
    while (now() < until) produce_block();
}

void L1Chain::credit(const AccountId& account, Amount amount)
{
    if (amount < 0) throw SimError(Err::invalid_params, "credit must be non-negative");
    m_balances[account] = checked_add(m_balances[account], amount);
}

void L1Chain::debit(const AccountId& account, Amount amount)
{
    if (amount < 0) throw SimError(Err::invalid_params, "debit must be non-negative");
    auto it = m_balances.find(account);
    Amount have = it == m_balances.end() ? 0 : it->second;
    if (have < amount) {
        throw SimError(Err::insufficient_l1_funds,
                       account + " holds " + std::to_string(have) + ", needs " + std::to_string(amount));
    }
    m_balances[account] = have - amount;
}

Amount L1Chain::balance(const AccountId& account) const
{
    auto it = m_balances.find(account);
    return it == m_balances.end() ? 0 : it->second;
}

} // namespace l2sim
