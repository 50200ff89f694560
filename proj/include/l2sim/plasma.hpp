// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_PLASMA_HPP
#define L2SIM_PLASMA_HPP

#include <l2sim/chain.hpp>
#include <l2sim/common.hpp>
#include <l2sim/eventlog.hpp>
#include <l2sim/hash.hpp>
#include <l2sim/merkle.hpp>
#include <l2sim/rational.hpp>
#include <l2sim/rng.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace l2sim {

struct Outpoint {
    Hash256 txid;
    std::uint32_t vout = 0;

    bool operator<(const Outpoint& o) const
    {
        if (txid != o.txid) return txid < o.txid;
        return vout < o.vout;
    }
    bool operator==(const Outpoint& o) const { return txid == o.txid && vout == o.vout; }
};

struct Utxo {
    Outpoint outpoint;
    AccountId owner;
    Amount amount = 0;
};

//! Simulated signing: a signature is the hash of the signer's secret
//! and the message digest. Enough to make forged spends detectable.
Hash256 party_secret(const AccountId& party);
Hash256 sign_digest(const AccountId& party, const Hash256& digest);

struct PlasmaTx {
    struct Input {
        Outpoint outpoint;
        Hash256 signature;
    };
    struct Output {
        AccountId owner;
        Amount amount = 0;
    };

    std::vector<Input> inputs;
    std::vector<Output> outputs;
    Amount fee = 0;
    std::uint64_t nonce = 0;
    bool is_deposit = false; // zero-input commitment minting a deposit
    Hash256 id;

    Hash256 body_digest() const;
    void seal(); // compute id from the body and signatures
};

struct PlasmaBlock {
    std::int64_t height = 0;
    std::vector<PlasmaTx> txs;
    Hash256 tx_root;
    bool committed = false;
    bool withheld = false;
    Rat produced_at;
};

enum class ExitStatus { pending, challenged, finalized, cancelled };

struct ExitRequest {
    std::uint64_t id = 0;
    AccountId exiter;
    Utxo utxo;
    MerkleProof inclusion_proof;
    std::int64_t block_height = 0;
    Amount bond = 0;
    Rat started_at;
    ExitStatus status = ExitStatus::pending;
};

//! Mass exit initiation: a bitmap over a snapshot of the UTXO set,
//! backed by a large bond.
struct Meit {
    AccountId exit_operator;
    std::vector<Outpoint> snapshot; // sorted; bitmap indexes into this
    std::vector<bool> bitmap;
    Amount bond = 0;
    std::set<AccountId> signers;
    Rat started_at;
    std::int64_t as_of_height = 0; // snapshot the bitmap refers to
    bool finalized = false;
};

struct MassExitReport {
    std::size_t exits_credited = 0;
    std::size_t bits_cancelled = 0;
    std::size_t l1_mempool_peak = 0;
    Rat avg_inclusion_delay_s;
    Rat baseline_delay_s; // a lone tx waits one block interval
};

struct FastWithdrawalOutcome {
    bool completed = false; // user paid on L1, LP owns the UTXO
    Amount paid_to_user = 0;
};

enum class OperatorMode { honest, withhold, commit_invalid };

struct PlasmaConfig {
    Rat child_block_interval_s = Rat(21, 10);
    Rat challenge_period_s = Rat(7 * 24 * 3600);
    Rat meit_window_s = Rat(21 * 24 * 3600);
    std::int64_t exit_bond_percent = 10; // of the exited amount, floor 1
    Amount meit_bond = 1'000'000;
    Amount operator_stake = 1'000'000;
    std::int64_t deposit_gas = 77'000;
    std::int64_t exit_gas = 245'000;
    Amount l1_gas_price = 40'000'000'000; // 40 Gwei
    std::int64_t commit_tx_size_bytes = 120;
    std::int64_t deposit_tx_size_bytes = 180;
    std::int64_t exit_tx_size_bytes = 200;
    Rat fast_withdraw_timeout_s = Rat(3600);
    bool charge_l1_fees = true; // scenario switch for unit-scaled tests
};

//! Plasma child chain plus its L1 contract view. One shared event loop
//! with the underlying L1Chain keeps cross-chain ordering deterministic.
class PlasmaChain {
public:
    PlasmaChain(L1Chain& l1, PlasmaConfig config, AccountId operator_id, Rng rng,
                EventLog* log = nullptr);

    void set_operator_mode(OperatorMode mode);
    OperatorMode operator_mode() const { return m_mode; }

    // -- deposits ------------------------------------------------------

    //! Step 1 of the deposit flow: L1 funds move to the contract.
    std::uint64_t deposit(const AccountId& user, Amount amount);
    //! Step 3: the depositor acknowledges the child-chain commitment;
    //! only now does the UTXO become spendable.
    Outpoint acknowledge_deposit(std::uint64_t deposit_id);
    //! Stage reached so far: 1, 2 or 3.
    int deposit_stage(std::uint64_t deposit_id) const;
    //! The minted outpoint; only known once stage 2 is reached.
    Outpoint deposit_outpoint(std::uint64_t deposit_id) const;

    // -- transfers -----------------------------------------------------

    //! Honest helper: builds and signs a transfer spending `inputs`.
    PlasmaTx make_transfer(const std::vector<Outpoint>& inputs,
                           const std::vector<PlasmaTx::Output>& outputs, Amount fee);

    //! Validates and applies the transfer, queueing it for the next block.
    void transfer(const PlasmaTx& tx);

    //! Byzantine hook: queue a forged spend of someone else's output for
    //! inclusion in the next committed block.
    void inject_invalid_tx(const Outpoint& victim, const AccountId& thief);

    //! Build the next child block; commit its root to L1 unless the
    //! operator is withholding.
    const PlasmaBlock& produce_and_commit();

    // -- proofs and the exit game ---------------------------------------

    bool data_available(std::int64_t height) const;
    MerkleProof make_inclusion_proof(std::int64_t height, std::size_t tx_index) const;
    //! Where the output now sits: creating block height and tx index.
    std::pair<std::int64_t, std::size_t> locate_output(const Outpoint& outpoint) const;
    //! Committed spend of the outpoint, if any (needs block data).
    std::optional<std::pair<std::int64_t, std::size_t>> find_spend(const Outpoint& outpoint) const;

    std::uint64_t start_exit(const AccountId& user, const Outpoint& outpoint,
                             const MerkleProof& proof, std::int64_t height,
                             std::optional<Amount> claimed_amount = std::nullopt);
    //! Convenience: build proof from the chain indexes and start the exit.
    std::uint64_t start_exit(const AccountId& user, const Outpoint& outpoint);

    void challenge_exit(std::uint64_t exit_id, const MerkleProof& spend_proof,
                        const PlasmaTx& spending_tx, std::int64_t spend_height,
                        const AccountId& challenger);
    //! Convenience using the chain's own spend index.
    void challenge_exit_auto(std::uint64_t exit_id, const AccountId& challenger);

    void finalize_exit(std::uint64_t exit_id);
    const ExitRequest& exit_request(std::uint64_t exit_id) const;

    // -- fast withdrawals ------------------------------------------------

    FastWithdrawalOutcome fast_withdrawal(const AccountId& user, const Outpoint& outpoint,
                                          const AccountId& lp, Amount lp_fee, bool lp_cooperates);

    // -- mass exit --------------------------------------------------------

    //! Returns nothing when there are no participants. as_of_height picks
    //! the snapshot; -1 means the last committed height.
    std::optional<std::uint64_t> mass_exit(const std::vector<AccountId>& participants,
                                           const AccountId& exit_operator,
                                           std::int64_t as_of_height = -1);
    void challenge_meit(const Outpoint& outpoint, const AccountId& challenger);
    MassExitReport finalize_meit();
    const Meit& meit() const;

    // -- fraud proofs ------------------------------------------------------

    //! Prove a committed block invalid: the block rolls back and the
    //! operator's stake goes to the prover.
    void submit_fraud_proof(std::int64_t height, std::size_t tx_index, const AccountId& prover);

    // -- clock / state -----------------------------------------------------

    void advance_time(const Rat& seconds);
    const Rat& now() const { return m_now; }
    std::int64_t last_committed_height() const;

    const std::map<Outpoint, Utxo>& utxo_set() const { return m_utxos; }
    Amount owner_total(const AccountId& owner) const;
    Amount fee_pool() const { return m_fee_pool; }
    Amount total_deposited() const { return m_total_deposited; }
    Amount total_exited() const { return m_total_exited; }

    const std::map<std::int64_t, PlasmaBlock>& blocks() const { return m_blocks; }
    const std::map<std::int64_t, Hash256>& commitments() const { return m_commitments; }

    //! Deposits = spendable + in-flight + fees + credited exits; throws
    //! value-mismatch when a theft has slipped through.
    void check_conservation() const;

    L1Chain& l1() { return m_l1; }

private:
    struct DepositFlow {
        AccountId user;
        Amount amount = 0;
        int stage = 1;
        Outpoint outpoint;
    };

    void validate_transfer(const PlasmaTx& tx, const std::map<Outpoint, Utxo>& state) const;
    void apply_to_set(std::map<Outpoint, Utxo>& set, const PlasmaTx& tx) const;
    void index_block(const PlasmaBlock& block);
    void rebuild_indexes();
    Amount exit_bond_for(Amount amount) const;
    Amount stage1_deposit_total() const;
    void credit_exit_on_l1(const AccountId& user, Amount amount, Amount bond);
    void charge_l1_gas(const AccountId& who, std::int64_t gas);

    L1Chain& m_l1;
    PlasmaConfig m_config;
    AccountId m_operator;
    Rng m_rng;
    EventLog* m_log;
    Rat m_now;
    OperatorMode m_mode = OperatorMode::honest;

    std::map<Outpoint, Utxo> m_utxos; // spendable set
    std::vector<PlasmaTx> m_queue;
    std::vector<PlasmaTx> m_injected; // forged, not applied to the set
    std::map<std::int64_t, PlasmaBlock> m_blocks;
    std::map<std::int64_t, Hash256> m_commitments;
    std::map<std::int64_t, std::map<Outpoint, Utxo>> m_state_at; // post-block snapshots
    std::map<Outpoint, std::pair<std::int64_t, std::size_t>> m_created_at;
    std::map<Outpoint, std::pair<std::int64_t, std::size_t>> m_spent_at;
    std::int64_t m_next_height = 1;

    std::map<std::uint64_t, DepositFlow> m_deposits;
    std::uint64_t m_next_deposit_id = 1;
    std::map<std::uint64_t, ExitRequest> m_exits;
    std::uint64_t m_next_exit_id = 1;
    std::optional<Meit> m_meit;

    Amount m_fee_pool = 0;
    Amount m_total_deposited = 0;
    Amount m_total_exited = 0; // L1 credits from finalized exits
    Amount m_pending_ack_total = 0;
    Amount m_stake_slashed = 0;
    std::uint64_t m_tx_nonce = 0;
};

//! Child-chain TPS estimate from L1 statistics, following the printed
//! calculation chain (transactions per block floored to a whole count).
struct PlasmaThroughput {
    Rat avg_gas_per_tx;
    Rat tps;
};
PlasmaThroughput plasma_throughput_estimate(std::int64_t l2_gas_limit, std::int64_t l1_gas_limit,
                                            std::int64_t l1_txs_per_day,
                                            std::int64_t l1_blocks_per_day,
                                            const Rat& l2_block_time_s);

} // namespace l2sim

#endif // L2SIM_PLASMA_HPP
