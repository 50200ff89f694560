// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/channels.hpp>

#include <algorithm>

namespace l2sim {

Amount route_fee(const FeePolicy& policy, Amount amount)
{
    if (amount < 0) throw SimError(Err::invalid_params, "routed amount must be non-negative");
    __int128 prop = static_cast<__int128>(amount) * policy.proportional_ppm / 1'000'000;
    __int128 total = static_cast<__int128>(policy.base_fee) + prop;
    if (total > INT64_MAX) throw SimError(Err::amount_overflow, "routing fee overflow");
    return static_cast<Amount>(total);
}

const AccountId& Channel::other(const AccountId& party) const
{
    if (party == party_a) return party_b;
    if (party == party_b) return party_a;
    throw SimError(Err::not_endpoint, party + " is not on channel " + std::to_string(id));
}

bool Channel::is_endpoint(const AccountId& party) const
{
    return party == party_a || party == party_b;
}

Amount& Channel::balance_of(const AccountId& party)
{
    if (party == party_a) return balance_a;
    if (party == party_b) return balance_b;
    throw SimError(Err::not_endpoint, party + " is not on channel " + std::to_string(id));
}

Amount Channel::balance_of(const AccountId& party) const
{
    return const_cast<Channel*>(this)->balance_of(party);
}

ChannelNetwork::ChannelNetwork(L1Chain& l1, ChannelNetworkConfig config, Rng rng, EventLog* log)
    : m_l1(l1), m_config(config), m_rng(rng), m_log(log), m_now(l1.now())
{
}

Channel& ChannelNetwork::channel_mut(ChannelId id)
{
    auto it = m_channels.find(id);
    if (it == m_channels.end()) {
        throw SimError(Err::unknown_channel, "channel " + std::to_string(id));
    }
    return it->second;
}

const Channel& ChannelNetwork::channel(ChannelId id) const
{
    return const_cast<ChannelNetwork*>(this)->channel_mut(id);
}

void ChannelNetwork::bump_state(Channel& ch)
{
    // Superseding a state reveals its revocation secret to the
    // counterparty; the new state gets a fresh secret and hash.
    ch.history[static_cast<std::size_t>(ch.state_number)].revealed = true;
    ++ch.state_number;
    CommitmentState next;
    next.state_number = ch.state_number;
    next.balance_a = ch.balance_a;
    next.balance_b = ch.balance_b;
    next.revocation_secret = m_rng.bytes32();
    next.revocation_hash = sha256(next.revocation_secret.bytes);
    ch.history.push_back(next);
}

void ChannelNetwork::settle_on_l1(const AccountId& party, Amount amount)
{
    if (amount > 0) m_l1.credit(party, amount);
}

ChannelId ChannelNetwork::open_channel(const AccountId& a, const AccountId& b, Amount fund_a,
                                       Amount fund_b, std::int64_t timelock_blocks, FeePolicy policy)
{
    if (a == b) throw SimError(Err::invalid_params, "channel endpoints must differ");
    if (fund_a < 0 || fund_b < 0 || fund_a + fund_b <= 0) {
        throw SimError(Err::invalid_params, "channel funding must be positive");
    }
    Amount fee = byte_fee(m_config.open_tx_size_bytes, m_config.feerate_per_byte);
    // Debit checks first so a failure leaves L1 untouched.
    if (m_l1.balance(a) < fund_a + fee) {
        throw SimError(Err::insufficient_l1_funds, a + " cannot fund channel open");
    }
    if (m_l1.balance(b) < fund_b) {
        throw SimError(Err::insufficient_l1_funds, b + " cannot fund channel open");
    }
    m_l1.debit(a, fund_a + fee);
    m_l1.debit(b, fund_b);

    Channel ch;
    ch.id = m_next_channel_id++;
    ch.party_a = a;
    ch.party_b = b;
    ch.capacity = fund_a + fund_b;
    ch.balance_a = fund_a;
    ch.balance_b = fund_b;
    ch.timelock_blocks = timelock_blocks > 0 ? timelock_blocks : m_config.default_timelock_blocks;
    ch.policy = policy;

    CommitmentState genesis;
    genesis.state_number = 0;
    genesis.balance_a = fund_a;
    genesis.balance_b = fund_b;
    genesis.revocation_secret = m_rng.bytes32();
    genesis.revocation_hash = sha256(genesis.revocation_secret.bytes);
    ch.history.push_back(genesis);

    m_l1.submit_tx(L1Transaction::make(a, "chan:" + std::to_string(ch.id), ch.capacity,
                                       m_config.open_tx_size_bytes,
                                       m_config.open_tx_size_bytes * m_l1.params().gas_per_byte,
                                       fee, TxKind::channel_open, m_l1.next_nonce()));

    ChannelId id = ch.id;
    m_channels.emplace(id, std::move(ch));
    if (m_log) {
        m_log->emit(m_now, "channel.open",
                    {{"channel", id}, {"a", a}, {"b", b}, {"fund_a", fund_a}, {"fund_b", fund_b},
                     {"fee", fee}});
    }
    return id;
}

void ChannelNetwork::direct_pay(ChannelId id, const AccountId& payer, Amount amount)
{
    Channel& ch = channel_mut(id);
    if (ch.status != ChannelStatus::open) throw SimError(Err::channel_not_open, std::to_string(id));
    if (amount < 0) throw SimError(Err::invalid_params, "payment amount must be non-negative");
    Amount& from = ch.balance_of(payer);
    if (from < amount) {
        throw SimError(Err::insufficient_balance,
                       payer + " has " + std::to_string(from) + " in channel " + std::to_string(id));
    }
    from -= amount;
    ch.balance_of(ch.other(payer)) += amount;
    bump_state(ch);
    if (m_log) {
        m_log->emit(m_now, "channel.pay",
                    {{"channel", id}, {"payer", payer}, {"amount", amount},
                     {"state", ch.state_number}});
    }
}

void ChannelNetwork::close_cooperative(ChannelId id, const AccountId& closer)
{
    Channel& ch = channel_mut(id);
    if (ch.status != ChannelStatus::open) throw SimError(Err::channel_not_open, std::to_string(id));
    if (!ch.is_endpoint(closer)) throw SimError(Err::not_endpoint, closer);
    if (!ch.pending_htlcs.empty()) throw SimError(Err::htlc_pending, "settle HTLCs before closing");

    Amount fee = byte_fee(m_config.close_tx_size_bytes, m_config.feerate_per_byte);
    m_l1.debit(closer, fee);
    settle_on_l1(ch.party_a, ch.balance_a);
    settle_on_l1(ch.party_b, ch.balance_b);
    m_l1.submit_tx(L1Transaction::make(closer, "chan:" + std::to_string(id), ch.capacity,
                                       m_config.close_tx_size_bytes,
                                       m_config.close_tx_size_bytes * m_l1.params().gas_per_byte,
                                       fee, TxKind::channel_close, m_l1.next_nonce()));
    if (m_log) {
        m_log->emit(m_now, "channel.close_coop",
                    {{"channel", id}, {"to_a", ch.balance_a}, {"to_b", ch.balance_b}, {"fee", fee}});
    }
    ch.balance_a = 0;
    ch.balance_b = 0;
    ch.status = ChannelStatus::closed;
}

void ChannelNetwork::close_unilateral(ChannelId id, const AccountId& broadcaster, std::int64_t state_n)
{
    Channel& ch = channel_mut(id);
    if (ch.status != ChannelStatus::open) throw SimError(Err::channel_not_open, std::to_string(id));
    if (!ch.is_endpoint(broadcaster)) throw SimError(Err::not_endpoint, broadcaster);
    if (state_n < 0 || state_n > ch.state_number) {
        throw SimError(Err::unknown_state, "no commitment for state " + std::to_string(state_n));
    }
    if (!ch.pending_htlcs.empty()) {
        throw SimError(Err::htlc_pending, "commitment with in-flight HTLCs cannot be modelled");
    }

    const CommitmentState& snap = ch.history[static_cast<std::size_t>(state_n)];
    const AccountId& counterparty = ch.other(broadcaster);
    Amount counterparty_share = broadcaster == ch.party_a ? snap.balance_b : snap.balance_a;
    Amount broadcaster_share = broadcaster == ch.party_a ? snap.balance_a : snap.balance_b;

    Amount fee = byte_fee(m_config.close_tx_size_bytes, m_config.feerate_per_byte);
    m_l1.debit(broadcaster, fee);
    m_l1.submit_tx(L1Transaction::make(broadcaster, "chan:" + std::to_string(id), ch.capacity,
                                       m_config.close_tx_size_bytes,
                                       m_config.close_tx_size_bytes * m_l1.params().gas_per_byte,
                                       fee, TxKind::channel_close, m_l1.next_nonce()));

    ch.status = ChannelStatus::closing_unilateral;
    ch.pending_close = UnilateralClose{broadcaster, state_n,
                                       m_l1.height() + ch.timelock_blocks,
                                       state_n < ch.state_number, broadcaster_share};
    // The counterparty's side is spendable immediately.
    settle_on_l1(counterparty, counterparty_share);
    ch.balance_a = 0;
    ch.balance_b = 0;

    if (m_log) {
        m_log->emit(m_now, "channel.close_unilateral",
                    {{"channel", id}, {"broadcaster", broadcaster}, {"state", state_n},
                     {"stale", ch.pending_close->stale},
                     {"unlock_height", ch.pending_close->unlock_height},
                     {"counterparty_paid", counterparty_share}});
    }

    if (ch.pending_close->stale) {
        // A watching victim reacts at once; otherwise the first
        // registered monitor for the victim does.
        if (is_online(counterparty, m_l1.height())) {
            apply_penalty(ch, counterparty);
        } else {
            for (const auto& m : m_monitors) {
                if (m.channel == id && m.watched_party == counterparty) {
                    apply_penalty(ch, m.monitor_account);
                    break;
                }
            }
        }
    }
}

void ChannelNetwork::countersign_close(ChannelId id)
{
    Channel& ch = channel_mut(id);
    if (ch.status != ChannelStatus::closing_unilateral || !ch.pending_close) {
        throw SimError(Err::channel_not_open, "no unilateral close pending");
    }
    settle_on_l1(ch.pending_close->broadcaster, ch.pending_close->locked_amount);
    ch.status = ChannelStatus::closed;
    if (m_log) {
        m_log->emit(m_now, "channel.close_countersigned",
                    {{"channel", id}, {"broadcaster", ch.pending_close->broadcaster},
                     {"released", ch.pending_close->locked_amount}});
    }
}

void ChannelNetwork::apply_penalty(Channel& ch, const AccountId& actor)
{
    if (!ch.pending_close || ch.status != ChannelStatus::closing_unilateral) {
        throw SimError(Err::window_expired, "no punishable close pending");
    }
    const UnilateralClose& close = *ch.pending_close;
    if (!close.stale) {
        throw SimError(Err::unknown_state, "latest-state close is not punishable");
    }
    if (m_l1.height() >= close.unlock_height) {
        throw SimError(Err::window_expired, "timelock already expired");
    }

    const AccountId victim = ch.other(close.broadcaster);
    const CommitmentState& snap = ch.history[static_cast<std::size_t>(close.state_number)];
    Amount already_paid = close.broadcaster == ch.party_a ? snap.balance_b : snap.balance_a;

    Amount reward = 0;
    if (actor != victim) {
        for (const auto& m : m_monitors) {
            if (m.channel == ch.id && m.watched_party == victim && m.monitor_account == actor) {
                reward = m.reward;
                break;
            }
        }
    }
    Amount to_victim = ch.capacity - already_paid - reward;
    if (to_victim < 0) to_victim = 0;
    settle_on_l1(victim, to_victim);
    if (reward > 0) settle_on_l1(actor, reward);
    ch.status = ChannelStatus::closed;
    if (m_log) {
        m_log->emit(m_now, "channel.penalty",
                    {{"channel", ch.id}, {"cheater", close.broadcaster}, {"victim", victim},
                     {"actor", actor}, {"victim_award", to_victim}, {"monitor_reward", reward}});
    }
}

void ChannelNetwork::penalize_cheat(ChannelId id, const AccountId& actor)
{
    apply_penalty(channel_mut(id), actor);
}

MonitorHandle ChannelNetwork::register_monitor(ChannelId id, const AccountId& party, Amount reward,
                                               const AccountId& monitor_account)
{
    const Channel& ch = channel(id);
    if (!ch.is_endpoint(party)) throw SimError(Err::not_endpoint, party);
    if (reward < 0) throw SimError(Err::invalid_params, "monitor reward must be non-negative");
    MonitorHandle handle{m_next_monitor_id++, id, party, monitor_account, reward};
    m_monitors.push_back(handle);
    if (m_log) {
        m_log->emit(m_now, "monitor.registered",
                    {{"channel", id}, {"party", party}, {"monitor", monitor_account},
                     {"reward", reward}});
    }
    return handle;
}

void ChannelNetwork::withdraw_without_close(ChannelId id, const AccountId& party, Amount amount)
{
    Channel& ch = channel_mut(id);
    if (ch.status != ChannelStatus::open) throw SimError(Err::channel_not_open, std::to_string(id));
    if (!ch.is_endpoint(party)) throw SimError(Err::not_endpoint, party);
    if (!is_online(ch.other(party), m_l1.height())) {
        throw SimError(Err::counterparty_refused, ch.other(party) + " is offline and cannot co-sign");
    }
    if (amount < 0 || ch.balance_of(party) < amount) {
        throw SimError(Err::insufficient_balance, "withdrawal exceeds channel balance");
    }
    Amount fee = byte_fee(m_config.withdraw_tx_size_bytes, m_config.feerate_per_byte);
    m_l1.debit(party, fee);
    ch.balance_of(party) -= amount;
    ch.capacity -= amount;
    settle_on_l1(party, amount);
    m_l1.submit_tx(L1Transaction::make(party, "chan:" + std::to_string(id), amount,
                                       m_config.withdraw_tx_size_bytes,
                                       m_config.withdraw_tx_size_bytes * m_l1.params().gas_per_byte,
                                       fee, TxKind::channel_close, m_l1.next_nonce()));
    bump_state(ch);
    if (m_log) {
        m_log->emit(m_now, "channel.withdraw",
                    {{"channel", id}, {"party", party}, {"amount", amount},
                     {"capacity", ch.capacity}});
    }
}

Invoice ChannelNetwork::create_invoice(const AccountId& payee, Amount amount)
{
    if (amount <= 0) throw SimError(Err::invalid_params, "invoice amount must be positive");
    Hash256 secret = m_rng.bytes32();
    Invoice inv;
    inv.payee = payee;
    inv.amount = amount;
    inv.payment_hash = sha256(secret.bytes);
    m_invoice_secrets[inv.payment_hash] = secret;
    return inv;
}

bool ChannelNetwork::verify_preimage(const Invoice& invoice, const Hash256& preimage) const
{
    return sha256(preimage.bytes) == invoice.payment_hash;
}

Hash256 ChannelNetwork::invoice_secret(const Invoice& invoice, const AccountId& asking_party) const
{
    if (asking_party != invoice.payee) {
        throw SimError(Err::not_owner, asking_party + " does not hold the payment secret");
    }
    auto it = m_invoice_secrets.find(invoice.payment_hash);
    if (it == m_invoice_secrets.end()) throw SimError(Err::invalid_params, "unknown invoice");
    return it->second;
}

Amount ChannelNetwork::edge_fee(const Channel& ch, Amount forwarded) const
{
    return route_fee(ch.policy, forwarded);
}

std::optional<Route> ChannelNetwork::find_route(const AccountId& src, const AccountId& dst,
                                                Amount amount, std::size_t rank) const
{
    if (src == dst) throw SimError(Err::invalid_params, "route endpoints must differ");
    if (amount <= 0) throw SimError(Err::invalid_params, "routed amount must be positive");

    // Adjacency over open channels only; the public view (capacity, fee
    // policy) is all this search is allowed to use.
    std::map<AccountId, std::vector<const Channel*>> adj;
    for (const auto& [id, ch] : m_channels) {
        if (ch.status != ChannelStatus::open) continue;
        adj[ch.party_a].push_back(&ch);
        adj[ch.party_b].push_back(&ch);
    }

    std::vector<Route> candidates;
    std::vector<AccountId> nodes{dst};
    std::vector<ChannelId> channels;
    std::vector<Amount> amounts;
    std::size_t steps = 0;
    const std::size_t step_cap = 1'000'000;

    // Walk backward from the payee. `need` is the amount that must cross
    // the next edge toward the current head of the partial route.
    auto dfs = [&](auto&& self, const AccountId& at, Amount need) -> void {
        if (channels.size() >= m_config.max_route_hops || ++steps > step_cap) return;
        auto it = adj.find(at);
        if (it == adj.end()) return;
        for (const Channel* ch : it->second) {
            const AccountId& u = ch->other(at);
            if (std::find(nodes.begin(), nodes.end(), u) != nodes.end()) continue;
            if (ch->capacity < need) continue;

            nodes.insert(nodes.begin(), u);
            channels.insert(channels.begin(), ch->id);
            amounts.insert(amounts.begin(), need);
            if (u == src) {
                Route r;
                r.nodes = nodes;
                r.channels = channels;
                r.forward_amounts = amounts;
                r.total_sent = need;
                candidates.push_back(std::move(r));
            } else {
                // u would forward as an intermediary, so this edge's fee
                // is owed by whoever pays u.
                self(self, u, need + edge_fee(*ch, need));
            }
            nodes.erase(nodes.begin());
            channels.erase(channels.begin());
            amounts.erase(amounts.begin());
        }
    };
    dfs(dfs, dst, amount);

    std::sort(candidates.begin(), candidates.end(), [](const Route& a, const Route& b) {
        if (a.total_sent != b.total_sent) return a.total_sent < b.total_sent;
        if (a.hops() != b.hops()) return a.hops() < b.hops();
        if (a.nodes != b.nodes) return a.nodes < b.nodes;
        return a.channels < b.channels;
    });
    if (rank >= candidates.size()) return std::nullopt;
    return candidates[rank];
}

PaymentOutcome ChannelNetwork::route_payment(const Route& route, const Invoice& invoice)
{
    if (route.nodes.size() < 2 || route.channels.size() != route.nodes.size() - 1) {
        throw SimError(Err::invalid_params, "malformed route");
    }
    if (route.nodes.back() != invoice.payee) {
        throw SimError(Err::invalid_params, "route does not end at the invoice payee");
    }
    auto secret_it = m_invoice_secrets.find(invoice.payment_hash);
    if (secret_it == m_invoice_secrets.end()) {
        throw SimError(Err::invalid_params, "unknown invoice");
    }

    const std::size_t k = route.channels.size();
    const std::int64_t height = m_l1.height();

    // Lock phase: HTLCs chain forward with expiries strictly decreasing
    // toward the payee. Capacity was checked when the route was found;
    // hidden balances can still fail any hop here.
    std::size_t locked = 0;
    bool failed = false;
    std::size_t failed_hop = 0;
    for (std::size_t i = 0; i < k; ++i) {
        Channel& ch = channel_mut(route.channels[i]);
        const AccountId& forwarder = route.nodes[i];
        const AccountId& receiver = route.nodes[i + 1];
        Amount m = route.forward_amounts[i];
        if (ch.status != ChannelStatus::open || ch.balance_of(forwarder) < m) {
            failed = true;
            failed_hop = i;
            break;
        }
        Htlc htlc;
        htlc.amount = m;
        htlc.payment_hash = invoice.payment_hash;
        htlc.expiry_height = height + m_config.htlc_expiry_base_blocks +
                             static_cast<std::int64_t>(k - 1 - i) * m_config.htlc_expiry_hop_delta_blocks;
        htlc.from = forwarder;
        htlc.to = receiver;
        ch.balance_of(forwarder) -= m;
        ch.pending_htlcs.push_back(htlc);
        bump_state(ch);
        if (m_log) {
            m_log->emit(m_now, "htlc.lock",
                        {{"channel", ch.id}, {"from", forwarder}, {"amount", m},
                         {"expiry", htlc.expiry_height}});
        }
        ++locked;
    }

    if (failed) {
        // Unwind: every upstream HTLC refunds; no balance change survives.
        for (std::size_t j = locked; j-- > 0;) {
            Channel& ch = channel_mut(route.channels[j]);
            const Htlc htlc = ch.pending_htlcs.back();
            ch.pending_htlcs.pop_back();
            ch.balance_of(htlc.from) += htlc.amount;
            bump_state(ch);
            if (m_log) {
                m_log->emit(m_now, "htlc.refund", {{"channel", ch.id}, {"amount", htlc.amount}});
            }
        }
        if (m_log) {
            m_log->emit(m_now, "pay.failed",
                        {{"payee", invoice.payee}, {"amount", invoice.amount},
                         {"at_hop", failed_hop}});
        }
        return PaymentOutcome{false, failed_hop, 0};
    }

    // The payee releases the preimage and settlement propagates back.
    const Hash256& preimage = secret_it->second;
    if (!verify_preimage(invoice, preimage)) {
        throw SimError(Err::bad_authorization, "stored preimage does not match invoice");
    }
    for (std::size_t j = k; j-- > 0;) {
        Channel& ch = channel_mut(route.channels[j]);
        const Htlc htlc = ch.pending_htlcs.back();
        ch.pending_htlcs.pop_back();
        ch.balance_of(htlc.to) += htlc.amount;
        bump_state(ch);
        if (m_log) {
            m_log->emit(m_now, "htlc.settle",
                        {{"channel", ch.id}, {"to", htlc.to}, {"amount", htlc.amount}});
        }
    }
    if (m_log) {
        m_log->emit(m_now, "pay.settled",
                    {{"payee", invoice.payee}, {"amount", invoice.amount},
                     {"fees", route.total_sent - invoice.amount}});
    }
    return PaymentOutcome{true, 0, route.total_sent - invoice.amount};
}

OnionPacket ChannelNetwork::build_onion(const Route& route) const
{
    if (route.nodes.size() < 2) throw SimError(Err::invalid_params, "onion needs two nodes");
    OnionPacket packet;
    const std::int64_t height = m_l1.height();
    const std::size_t k = route.channels.size();
    for (std::size_t i = 0; i < route.nodes.size(); ++i) {
        OnionPacket::HopRecord rec;
        if (i > 0) rec.predecessor = route.nodes[i - 1];
        if (i + 1 < route.nodes.size()) {
            rec.successor = route.nodes[i + 1];
            rec.amount_to_forward = route.forward_amounts[i];
            rec.expiry_height = height + m_config.htlc_expiry_base_blocks +
                                static_cast<std::int64_t>(k - 1 - i) * m_config.htlc_expiry_hop_delta_blocks;
        } else {
            rec.amount_to_forward = route.forward_amounts.back();
        }
        packet.records.emplace(route.nodes[i], rec);
    }
    return packet;
}

const OnionPacket::HopRecord& ChannelNetwork::hop_view(const OnionPacket& packet, const AccountId& hop)
{
    auto it = packet.records.find(hop);
    if (it == packet.records.end()) throw SimError(Err::not_a_hop, hop);
    return it->second;
}

std::vector<PublicChannelInfo> ChannelNetwork::public_graph() const
{
    std::vector<PublicChannelInfo> out;
    for (const auto& [id, ch] : m_channels) {
        if (ch.status != ChannelStatus::open) continue;
        out.push_back(PublicChannelInfo{id, ch.party_a, ch.party_b, ch.capacity, ch.policy});
    }
    return out;
}

NetworkStats ChannelNetwork::network_stats(std::int64_t hub_threshold) const
{
    std::map<AccountId, std::int64_t> degree;
    for (const auto& [id, ch] : m_channels) {
        if (ch.status != ChannelStatus::open) continue;
        ++degree[ch.party_a];
        ++degree[ch.party_b];
    }
    NetworkStats stats;
    for (const auto& [node, d] : degree) {
        ++stats.degree_histogram[d];
        if (d >= hub_threshold) stats.hubs.push_back(node);
    }
    return stats;
}

Amount ChannelNetwork::channel_balance(ChannelId id, const AccountId& asking_party) const
{
    const Channel& ch = channel(id);
    if (!ch.is_endpoint(asking_party)) {
        throw SimError(Err::not_endpoint, asking_party + " may not read balances of channel " +
                                              std::to_string(id));
    }
    return ch.balance_of(asking_party);
}

void ChannelNetwork::set_offline(const AccountId& party, std::int64_t from_height, std::int64_t to_height)
{
    if (from_height >= to_height) throw SimError(Err::invalid_params, "empty offline interval");
    m_offline[party].emplace_back(from_height, to_height);
}

bool ChannelNetwork::is_online(const AccountId& party, std::int64_t height) const
{
    auto it = m_offline.find(party);
    if (it == m_offline.end()) return true;
    for (const auto& [from, to] : it->second) {
        if (height >= from && height < to) return false;
    }
    return true;
}

void ChannelNetwork::advance_blocks(int n)
{
    for (int i = 0; i < n; ++i) {
        m_l1.produce_block();
        if (m_now < m_l1.now()) m_now = m_l1.now();
        process_height(m_l1.height());
    }
}

void ChannelNetwork::process_height(std::int64_t height)
{
    for (auto& [id, ch] : m_channels) {
        if (ch.status != ChannelStatus::closing_unilateral || !ch.pending_close) continue;
        const UnilateralClose& close = *ch.pending_close;
        const AccountId victim = ch.other(close.broadcaster);
        if (close.stale && height < close.unlock_height && is_online(victim, height)) {
            // Victim came back online inside the window.
            apply_penalty(ch, victim);
            continue;
        }
        if (height >= close.unlock_height) {
            settle_on_l1(close.broadcaster, close.locked_amount);
            ch.status = ChannelStatus::closed;
            if (m_log) {
                m_log->emit(m_now, close.stale ? "channel.cheat_succeeded" : "channel.close_finalized",
                            {{"channel", id}, {"broadcaster", close.broadcaster},
                             {"released", close.locked_amount}});
            }
        }
    }
}

void ChannelNetwork::check_conservation() const
{
    for (const auto& [id, ch] : m_channels) {
        if (ch.status != ChannelStatus::open) continue;
        Amount in_flight = 0;
        for (const auto& h : ch.pending_htlcs) in_flight += h.amount;
        if (ch.balance_a + ch.balance_b + in_flight != ch.capacity) {
            throw SimError(Err::value_mismatch,
                           "conservation violated on channel " + std::to_string(id));
        }
    }
}

} // namespace l2sim
