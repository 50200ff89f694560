// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_CHANNELS_HPP
#define L2SIM_CHANNELS_HPP

#include <l2sim/chain.hpp>
#include <l2sim/common.hpp>
#include <l2sim/eventlog.hpp>
#include <l2sim/hash.hpp>
#include <l2sim/rational.hpp>
#include <l2sim/rng.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace l2sim {

using ChannelId = std::uint64_t;

struct FeePolicy {
    Amount base_fee = 0;
    std::int64_t proportional_ppm = 0;
};

//! base + floor(amount * ppm / 10^6)
Amount route_fee(const FeePolicy& policy, Amount amount);

enum class ChannelStatus { open, closing_unilateral, closed };

struct Htlc {
    Amount amount = 0;
    Hash256 payment_hash;
    std::int64_t expiry_height = 0;
    AccountId from; // forwarding side inside this channel
    AccountId to;
};

struct Invoice {
    AccountId payee;
    Amount amount = 0;
    Hash256 payment_hash;
};

//! One commitment state. The secret is what the counterparty can use to
//! punish a broadcast of this state once it has been superseded.
struct CommitmentState {
    std::int64_t state_number = 0;
    Amount balance_a = 0;
    Amount balance_b = 0;
    Hash256 revocation_hash;
    Hash256 revocation_secret; // revealed to the counterparty once superseded
    bool revealed = false;
};

struct UnilateralClose {
    AccountId broadcaster;
    std::int64_t state_number = 0;
    std::int64_t unlock_height = 0;
    bool stale = false;
    Amount locked_amount = 0; // broadcaster share, pending timelock
};

struct Channel {
    ChannelId id = 0;
    AccountId party_a;
    AccountId party_b;
    Amount capacity = 0;
    Amount balance_a = 0;
    Amount balance_b = 0;
    std::int64_t state_number = 0;
    std::int64_t timelock_blocks = 0;
    FeePolicy policy;
    ChannelStatus status = ChannelStatus::open;
    std::vector<CommitmentState> history; // indexed by state number
    std::vector<Htlc> pending_htlcs;
    std::optional<UnilateralClose> pending_close;

    const AccountId& other(const AccountId& party) const;
    bool is_endpoint(const AccountId& party) const;
    Amount& balance_of(const AccountId& party);
    Amount balance_of(const AccountId& party) const;
};

//! What everyone can see: endpoints, capacity and fee policy. Balances
//! are deliberately absent.
struct PublicChannelInfo {
    ChannelId id = 0;
    AccountId party_a;
    AccountId party_b;
    Amount capacity = 0;
    FeePolicy policy;
};

struct Route {
    std::vector<AccountId> nodes;       // src first, payee last
    std::vector<ChannelId> channels;    // one per edge
    std::vector<Amount> forward_amounts; // amount carried over each edge
    Amount total_sent = 0;              // invoice amount plus all hop fees

    std::size_t hops() const { return channels.size(); }
};

struct PaymentOutcome {
    bool settled = false;
    std::size_t failed_at_hop = 0; // edge index, meaningful when !settled
    Amount fees_paid = 0;
};

//! Per-hop sealed forwarding records. hop_view enforces that a node can
//! open only its own record.
struct OnionPacket {
    struct HopRecord {
        std::optional<AccountId> predecessor;
        std::optional<AccountId> successor;
        Amount amount_to_forward = 0;
        std::int64_t expiry_height = 0;
    };
    std::map<AccountId, HopRecord> records;
};

struct NetworkStats {
    std::map<std::int64_t, std::int64_t> degree_histogram;
    std::vector<AccountId> hubs;
};

struct MonitorHandle {
    std::uint64_t id = 0;
    ChannelId channel = 0;
    AccountId watched_party;
    AccountId monitor_account;
    Amount reward = 0;
};

struct ChannelNetworkConfig {
    Amount feerate_per_byte = 100;           // sat/vB for channel L1 txs
    std::int64_t open_tx_size_bytes = 235;
    std::int64_t close_tx_size_bytes = 300;
    std::int64_t withdraw_tx_size_bytes = 300;
    std::int64_t default_timelock_blocks = 144;
    std::int64_t htlc_expiry_base_blocks = 144;
    std::int64_t htlc_expiry_hop_delta_blocks = 144;
    std::size_t max_route_hops = 8;
};

//! Payment-channel network over one simulated L1. Single-threaded and
//! deterministic: every run with the same seed and call sequence
//! produces the same event log.
class ChannelNetwork {
public:
    ChannelNetwork(L1Chain& l1, ChannelNetworkConfig config, Rng rng, EventLog* log = nullptr);

    // -- lifecycle ---------------------------------------------------

    //! Funds come off L1; the opener (a) also pays the open fee.
    ChannelId open_channel(const AccountId& a, const AccountId& b, Amount fund_a, Amount fund_b,
                           std::int64_t timelock_blocks = 0, FeePolicy policy = {});

    //! Zero-fee in-channel payment; advances the commitment state.
    void direct_pay(ChannelId id, const AccountId& payer, Amount amount);

    //! Both final balances settle on L1 immediately; closer pays the fee.
    void close_cooperative(ChannelId id, const AccountId& closer);

    //! Broadcast commitment state_n. Counterparty's balance settles
    //! immediately; broadcaster's share stays locked for the timelock.
    void close_unilateral(ChannelId id, const AccountId& broadcaster, std::int64_t state_n);

    //! Counterparty co-signs an in-flight unilateral close; both sides
    //! settle immediately.
    void countersign_close(ChannelId id);

    //! Claim the whole capacity from a pending stale close. Throws
    //! window-expired once the timelock has run out.
    void penalize_cheat(ChannelId id, const AccountId& actor);

    MonitorHandle register_monitor(ChannelId id, const AccountId& party, Amount reward,
                                   const AccountId& monitor_account);

    //! Raiden-style partial withdrawal; needs the counterparty online.
    void withdraw_without_close(ChannelId id, const AccountId& party, Amount amount);

    // -- payments ----------------------------------------------------

    Invoice create_invoice(const AccountId& payee, Amount amount);
    bool verify_preimage(const Invoice& invoice, const Hash256& preimage) const;

    //! The payment secret never travels in the invoice; only its payee
    //! can look it up. Throws not-owner for anyone else.
    Hash256 invoice_secret(const Invoice& invoice, const AccountId& asking_party) const;

    //! Cheapest-fee capacity-feasible path; rank selects the k-th
    //! cheapest for retries. Empty optional when no route exists.
    std::optional<Route> find_route(const AccountId& src, const AccountId& dst, Amount amount,
                                    std::size_t rank = 0) const;

    //! HTLC-chained multi-hop payment. Atomic: on failure every channel
    //! is restored to its pre-attempt state.
    PaymentOutcome route_payment(const Route& route, const Invoice& invoice);

    OnionPacket build_onion(const Route& route) const;
    static const OnionPacket::HopRecord& hop_view(const OnionPacket& packet, const AccountId& hop);

    // -- observation -------------------------------------------------

    std::vector<PublicChannelInfo> public_graph() const;
    NetworkStats network_stats(std::int64_t hub_threshold) const;

    //! Endpoint-only balance read; throws not-endpoint otherwise.
    Amount channel_balance(ChannelId id, const AccountId& asking_party) const;

    const Channel& channel(ChannelId id) const;
    std::size_t channel_count() const { return m_channels.size(); }

    // -- clock / liveness --------------------------------------------

    void set_now(const Rat& now) { m_now = now; }
    const Rat& now() const { return m_now; }

    //! Mark a party offline for L1 heights [from, to).
    void set_offline(const AccountId& party, std::int64_t from_height, std::int64_t to_height);
    bool is_online(const AccountId& party, std::int64_t height) const;

    //! Produce n L1 blocks, resolving channel timers after each.
    void advance_blocks(int n);

    //! Throws if any channel violates conservation.
    void check_conservation() const;

    L1Chain& l1() { return m_l1; }

private:
    Channel& channel_mut(ChannelId id);
    void bump_state(Channel& ch);
    void settle_on_l1(const AccountId& party, Amount amount);
    void process_height(std::int64_t height);
    void apply_penalty(Channel& ch, const AccountId& actor);
    Amount edge_fee(const Channel& ch, Amount forwarded) const;

    L1Chain& m_l1;
    ChannelNetworkConfig m_config;
    Rng m_rng;
    EventLog* m_log;
    Rat m_now;

    std::map<ChannelId, Channel> m_channels;
    ChannelId m_next_channel_id = 1;
    std::uint64_t m_next_monitor_id = 1;
    std::map<Hash256, Hash256> m_invoice_secrets; // payment_hash -> secret
    std::vector<MonitorHandle> m_monitors;
    std::map<AccountId, std::vector<std::pair<std::int64_t, std::int64_t>>> m_offline;
};

} // namespace l2sim

#endif // L2SIM_CHANNELS_HPP
