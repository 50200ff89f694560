// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/plasma.hpp>

#include <algorithm>

namespace l2sim {

Hash256 party_secret(const AccountId& party)
{
    return Hasher("l2sim/party-secret").str(party).finalize();
}

Hash256 sign_digest(const AccountId& party, const Hash256& digest)
{
    return Hasher("l2sim/sig").hash(party_secret(party)).hash(digest).finalize();
}

Hash256 PlasmaTx::body_digest() const
{
    Hasher h("l2sim/ptx-body");
    h.u32(static_cast<std::uint32_t>(inputs.size()));
    for (const auto& in : inputs) {
        h.hash(in.outpoint.txid).u32(in.outpoint.vout);
    }
    h.u32(static_cast<std::uint32_t>(outputs.size()));
    for (const auto& out : outputs) {
        h.str(out.owner).i64(out.amount);
    }
    h.i64(fee).u64(nonce).u8(is_deposit ? 1 : 0);
    return h.finalize();
}

void PlasmaTx::seal()
{
    Hasher h("l2sim/ptx");
    h.hash(body_digest());
    for (const auto& in : inputs) h.hash(in.signature);
    id = h.finalize();
}

PlasmaChain::PlasmaChain(L1Chain& l1, PlasmaConfig config, AccountId operator_id, Rng rng,
                         EventLog* log)
    : m_l1(l1), m_config(std::move(config)), m_operator(std::move(operator_id)), m_rng(rng),
      m_log(log), m_now(l1.now())
{
    // The operator's slashable stake sits in the contract from day one.
    if (m_config.operator_stake > 0) m_l1.debit(m_operator, m_config.operator_stake);
    m_state_at[0] = {};
}

void PlasmaChain::set_operator_mode(OperatorMode mode)
{
    m_mode = mode;
    if (m_log) {
        const char* name = mode == OperatorMode::honest ? "honest"
                           : mode == OperatorMode::withhold ? "withhold"
                                                            : "commit_invalid";
        m_log->emit(m_now, "plasma.operator_mode", {{"mode", name}});
    }
}

void PlasmaChain::charge_l1_gas(const AccountId& who, std::int64_t gas)
{
    if (!m_config.charge_l1_fees) return;
    m_l1.debit(who, gas_fee(gas, m_config.l1_gas_price));
}

std::uint64_t PlasmaChain::deposit(const AccountId& user, Amount amount)
{
    if (amount <= 0) throw SimError(Err::invalid_params, "deposit must be positive");
    Amount fee = m_config.charge_l1_fees ? gas_fee(m_config.deposit_gas, m_config.l1_gas_price) : 0;
    if (m_l1.balance(user) < amount + fee) {
        throw SimError(Err::insufficient_l1_funds, user + " cannot cover deposit plus fee");
    }
    m_l1.debit(user, amount + fee);
    m_total_deposited += amount;

    m_l1.submit_tx(L1Transaction::make(user, "plasma:contract", amount,
                                       m_config.deposit_tx_size_bytes, m_config.deposit_gas, fee,
                                       TxKind::plasma_deposit, m_l1.next_nonce()));

    std::uint64_t id = m_next_deposit_id++;
    m_deposits[id] = DepositFlow{user, amount, 1, {}};
    if (m_log) {
        m_log->emit(m_now, "plasma.deposit_started",
                    {{"deposit", id}, {"user", user}, {"amount", amount}, {"l1_fee", fee}});
    }
    return id;
}

int PlasmaChain::deposit_stage(std::uint64_t deposit_id) const
{
    auto it = m_deposits.find(deposit_id);
    if (it == m_deposits.end()) throw SimError(Err::invalid_params, "unknown deposit");
    return it->second.stage;
}

Outpoint PlasmaChain::deposit_outpoint(std::uint64_t deposit_id) const
{
    auto it = m_deposits.find(deposit_id);
    if (it == m_deposits.end()) throw SimError(Err::invalid_params, "unknown deposit");
    if (it->second.stage < 2) {
        throw SimError(Err::invalid_params, "deposit not yet committed; no outpoint exists");
    }
    return it->second.outpoint;
}

Outpoint PlasmaChain::acknowledge_deposit(std::uint64_t deposit_id)
{
    auto it = m_deposits.find(deposit_id);
    if (it == m_deposits.end()) throw SimError(Err::invalid_params, "unknown deposit");
    DepositFlow& flow = it->second;
    if (flow.stage < 2) {
        throw SimError(Err::invalid_params,
                       "deposit not yet committed by the child chain; wait for a block");
    }
    if (flow.stage >= 3) return flow.outpoint;
    flow.stage = 3;

    Utxo utxo{flow.outpoint, flow.user, flow.amount};
    m_utxos[flow.outpoint] = utxo;
    m_pending_ack_total -= flow.amount;
    if (m_log) {
        m_log->emit(m_now, "plasma.deposit_ack",
                    {{"deposit", deposit_id}, {"user", flow.user}, {"amount", flow.amount}});
    }
    return flow.outpoint;
}

PlasmaTx PlasmaChain::make_transfer(const std::vector<Outpoint>& inputs,
                                    const std::vector<PlasmaTx::Output>& outputs, Amount fee)
{
    PlasmaTx tx;
    tx.fee = fee;
    tx.nonce = m_tx_nonce++;
    tx.outputs = outputs;
    for (const auto& op : inputs) tx.inputs.push_back({op, {}});
    Hash256 digest = tx.body_digest();
    for (auto& in : tx.inputs) {
        auto it = m_utxos.find(in.outpoint);
        if (it == m_utxos.end()) throw SimError(Err::double_spend, "input not in the unspent set");
        in.signature = sign_digest(it->second.owner, digest);
    }
    tx.seal();
    return tx;
}

void PlasmaChain::validate_transfer(const PlasmaTx& tx, const std::map<Outpoint, Utxo>& state) const
{
    if (tx.is_deposit) {
        if (!tx.inputs.empty() || tx.outputs.size() != 1) {
            throw SimError(Err::invalid_params, "malformed deposit commitment");
        }
        return;
    }
    if (tx.inputs.empty()) throw SimError(Err::invalid_params, "transfer needs inputs");
    if (tx.fee < 0) throw SimError(Err::value_mismatch, "negative fee");
    Hash256 digest = tx.body_digest();
    Amount in_total = 0;
    std::set<Outpoint> seen;
    for (const auto& in : tx.inputs) {
        if (!seen.insert(in.outpoint).second) {
            throw SimError(Err::double_spend, "outpoint used twice in one transfer");
        }
        auto it = state.find(in.outpoint);
        if (it == state.end()) throw SimError(Err::double_spend, "input not in the unspent set");
        if (in.signature != sign_digest(it->second.owner, digest)) {
            throw SimError(Err::bad_authorization, "input not signed by its owner");
        }
        in_total += it->second.amount;
    }
    Amount out_total = 0;
    for (const auto& out : tx.outputs) {
        if (out.amount <= 0) throw SimError(Err::value_mismatch, "outputs must be positive");
        out_total += out.amount;
    }
    if (in_total != out_total + tx.fee) {
        throw SimError(Err::value_mismatch, "inputs must equal outputs plus fee");
    }
}

void PlasmaChain::apply_to_set(std::map<Outpoint, Utxo>& set, const PlasmaTx& tx) const
{
    for (const auto& in : tx.inputs) set.erase(in.outpoint);
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) {
        Outpoint op{tx.id, i};
        set[op] = Utxo{op, tx.outputs[i].owner, tx.outputs[i].amount};
    }
}

void PlasmaChain::transfer(const PlasmaTx& tx)
{
    validate_transfer(tx, m_utxos);
    apply_to_set(m_utxos, tx);
    m_fee_pool += tx.fee;
    m_queue.push_back(tx);
    if (m_log) {
        m_log->emit(m_now, "plasma.transfer",
                    {{"tx", tx.id.hex().substr(0, 16)}, {"inputs", tx.inputs.size()},
                     {"outputs", tx.outputs.size()}, {"fee", tx.fee}});
    }
}

void PlasmaChain::inject_invalid_tx(const Outpoint& victim, const AccountId& thief)
{
    auto it = m_utxos.find(victim);
    if (it == m_utxos.end()) throw SimError(Err::invalid_params, "victim output not found");
    PlasmaTx tx;
    tx.nonce = m_tx_nonce++;
    tx.inputs.push_back({victim, {}});
    tx.outputs.push_back({thief, it->second.amount});
    tx.inputs[0].signature = sign_digest(thief, tx.body_digest()); // thief cannot sign for the owner
    tx.seal();
    m_injected.push_back(tx);
    if (m_log) {
        m_log->emit(m_now, "plasma.injected_invalid", {{"thief", thief}});
    }
}

const PlasmaBlock& PlasmaChain::produce_and_commit()
{
    m_now += m_config.child_block_interval_s;

    PlasmaBlock block;
    block.height = m_next_height++;
    block.produced_at = m_now;

    // Stage 2 for any deposit still waiting: the chain commits that the
    // funds will be spendable. A withheld block is invisible to the
    // depositor, so the flow stalls at stage 1 there.
    if (m_mode != OperatorMode::withhold) {
        for (auto& [id, flow] : m_deposits) {
            if (flow.stage != 1) continue;
            PlasmaTx mint;
            mint.is_deposit = true;
            mint.nonce = m_tx_nonce++;
            mint.outputs.push_back({flow.user, flow.amount});
            mint.seal();
            flow.outpoint = Outpoint{mint.id, 0};
            flow.stage = 2;
            m_pending_ack_total += flow.amount;
            block.txs.push_back(std::move(mint));
        }
    }

    for (auto& tx : m_queue) block.txs.push_back(std::move(tx));
    m_queue.clear();
    for (auto& tx : m_injected) block.txs.push_back(std::move(tx));
    bool had_injected = !m_injected.empty();
    m_injected.clear();

    if (block.txs.empty()) {
        block.tx_root = empty_tree_root();
    } else {
        std::vector<Hash256> ids;
        for (const auto& tx : block.txs) ids.push_back(tx.id);
        block.tx_root = merkle_root(ids);
    }

    if (m_mode == OperatorMode::withhold) {
        block.withheld = true;
        block.committed = false;
    } else {
        block.committed = true;
        m_commitments[block.height] = block.tx_root;
        std::int64_t commit_gas = m_config.commit_tx_size_bytes * m_l1.params().gas_per_byte;
        Amount fee = m_config.charge_l1_fees ? gas_fee(commit_gas, m_config.l1_gas_price) : 0;
        if (m_config.charge_l1_fees) m_l1.debit(m_operator, fee);
        m_l1.submit_tx(L1Transaction::make(m_operator, "plasma:contract", 0,
                                           m_config.commit_tx_size_bytes, commit_gas, fee,
                                           TxKind::plasma_commit, m_l1.next_nonce()));
    }

    std::int64_t h = block.height;
    m_blocks[h] = std::move(block);
    const PlasmaBlock& stored = m_blocks[h];
    index_block(stored);
    m_state_at[h] = m_utxos;

    m_l1.produce_until(m_now);
    if (m_log) {
        m_log->emit(m_now, "plasma.block",
                    {{"height", h}, {"txs", stored.txs.size()}, {"committed", stored.committed},
                     {"withheld", stored.withheld}, {"invalid", had_injected}});
    }
    return stored;
}

void PlasmaChain::index_block(const PlasmaBlock& block)
{
    for (std::size_t i = 0; i < block.txs.size(); ++i) {
        const PlasmaTx& tx = block.txs[i];
        // Forged txs never enter the ownership indexes; they only sit in
        // the block body for fraud proofs to point at.
        bool valid = true;
        if (!tx.is_deposit) {
            try {
                std::int64_t prev = block.height - 1;
                validate_transfer(tx, m_state_at.at(prev));
            } catch (const SimError&) {
                valid = false;
            }
        }
        if (!valid) continue;
        for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
            m_created_at[Outpoint{tx.id, v}] = {block.height, i};
        }
        for (const auto& in : tx.inputs) {
            m_spent_at[in.outpoint] = {block.height, i};
        }
    }
}

bool PlasmaChain::data_available(std::int64_t height) const
{
    auto it = m_blocks.find(height);
    return it != m_blocks.end() && !it->second.withheld;
}

MerkleProof PlasmaChain::make_inclusion_proof(std::int64_t height, std::size_t tx_index) const
{
    if (!data_available(height)) {
        throw SimError(Err::bad_proof, "block data unavailable at height " + std::to_string(height));
    }
    const PlasmaBlock& block = m_blocks.at(height);
    if (tx_index >= block.txs.size()) throw SimError(Err::index_out_of_range, "tx index");
    std::vector<Hash256> ids;
    for (const auto& tx : block.txs) ids.push_back(tx.id);
    return merkle_prove(ids, tx_index);
}

std::pair<std::int64_t, std::size_t> PlasmaChain::locate_output(const Outpoint& outpoint) const
{
    auto it = m_created_at.find(outpoint);
    if (it == m_created_at.end()) throw SimError(Err::invalid_params, "output never created");
    return it->second;
}

std::optional<std::pair<std::int64_t, std::size_t>> PlasmaChain::find_spend(const Outpoint& outpoint) const
{
    auto it = m_spent_at.find(outpoint);
    if (it == m_spent_at.end()) return std::nullopt;
    if (!data_available(it->second.first)) return std::nullopt;
    return it->second;
}

Amount PlasmaChain::exit_bond_for(Amount amount) const
{
    Amount bond = amount * m_config.exit_bond_percent / 100;
    return bond > 0 ? bond : 1;
}

std::uint64_t PlasmaChain::start_exit(const AccountId& user, const Outpoint& outpoint,
                                      const MerkleProof& proof, std::int64_t height,
                                      std::optional<Amount> claimed_amount)
{
    auto commit = m_commitments.find(height);
    if (commit == m_commitments.end() || proof.root != commit->second || !merkle_verify(proof)) {
        throw SimError(Err::bad_proof, "inclusion proof does not match a committed root");
    }
    if (proof.leaf != outpoint.txid) {
        throw SimError(Err::bad_proof, "proof is not about the creating transaction");
    }
    // The contract inspects the submitted transaction body.
    const PlasmaBlock& block = m_blocks.at(height);
    if (proof.index >= block.txs.size() || block.txs[proof.index].id != outpoint.txid ||
        outpoint.vout >= block.txs[proof.index].outputs.size()) {
        throw SimError(Err::bad_proof, "no such output in the committed block");
    }
    const PlasmaTx::Output& out = block.txs[proof.index].outputs[outpoint.vout];
    if (out.owner != user) throw SimError(Err::not_owner, user + " does not own the output");
    if (claimed_amount && *claimed_amount != out.amount) {
        throw SimError(Err::value_mismatch, "withdrawal must take the whole unspent output");
    }

    Amount bond = exit_bond_for(out.amount);
    if (m_l1.balance(user) < bond) throw SimError(Err::bond_unavailable, user + " cannot post bond");
    m_l1.debit(user, bond);

    ExitRequest req;
    req.id = m_next_exit_id++;
    req.exiter = user;
    req.utxo = Utxo{outpoint, out.owner, out.amount};
    req.inclusion_proof = proof;
    req.block_height = height;
    req.bond = bond;
    req.started_at = m_now;
    m_exits[req.id] = req;
    if (m_log) {
        m_log->emit(m_now, "plasma.exit_started",
                    {{"exit", req.id}, {"user", user}, {"amount", out.amount}, {"bond", bond}});
    }
    return req.id;
}

std::uint64_t PlasmaChain::start_exit(const AccountId& user, const Outpoint& outpoint)
{
    auto [height, index] = locate_output(outpoint);
    return start_exit(user, outpoint, make_inclusion_proof(height, index), height);
}

void PlasmaChain::challenge_exit(std::uint64_t exit_id, const MerkleProof& spend_proof,
                                 const PlasmaTx& spending_tx, std::int64_t spend_height,
                                 const AccountId& challenger)
{
    auto it = m_exits.find(exit_id);
    if (it == m_exits.end()) throw SimError(Err::invalid_params, "unknown exit");
    ExitRequest& req = it->second;
    if (req.status != ExitStatus::pending) {
        throw SimError(Err::already_cancelled, "exit is not pending");
    }
    if (m_now >= req.started_at + m_config.challenge_period_s) {
        throw SimError(Err::window_closed, "challenge period elapsed");
    }
    auto commit = m_commitments.find(spend_height);
    if (commit == m_commitments.end() || spend_proof.root != commit->second ||
        !merkle_verify(spend_proof) || spend_proof.leaf != spending_tx.id) {
        throw SimError(Err::invalid_proof, "spend proof does not match a committed root");
    }
    bool consumes = false;
    for (const auto& in : spending_tx.inputs) {
        if (in.outpoint == req.utxo.outpoint) consumes = true;
    }
    if (!consumes) {
        throw SimError(Err::invalid_proof, "transaction does not consume the exited output");
    }

    req.status = ExitStatus::cancelled;
    m_l1.credit(challenger, req.bond); // exiter's bond is forfeited
    if (m_log) {
        m_log->emit(m_now, "plasma.exit_challenged",
                    {{"exit", exit_id}, {"challenger", challenger}, {"bond", req.bond}});
    }
}

void PlasmaChain::challenge_exit_auto(std::uint64_t exit_id, const AccountId& challenger)
{
    auto it = m_exits.find(exit_id);
    if (it == m_exits.end()) throw SimError(Err::invalid_params, "unknown exit");
    auto spend = find_spend(it->second.utxo.outpoint);
    if (!spend) throw SimError(Err::invalid_proof, "no committed spend of this output");
    auto [h, idx] = *spend;
    challenge_exit(exit_id, make_inclusion_proof(h, idx), m_blocks.at(h).txs[idx], h, challenger);
}

void PlasmaChain::finalize_exit(std::uint64_t exit_id)
{
    auto it = m_exits.find(exit_id);
    if (it == m_exits.end()) throw SimError(Err::invalid_params, "unknown exit");
    ExitRequest& req = it->second;
    if (req.status == ExitStatus::cancelled) {
        throw SimError(Err::already_cancelled, "exit was cancelled");
    }
    if (req.status == ExitStatus::finalized) {
        throw SimError(Err::already_cancelled, "exit already finalized");
    }
    if (m_now < req.started_at + m_config.challenge_period_s) {
        throw SimError(Err::not_elapsed, "challenge period still open");
    }
    req.status = ExitStatus::finalized;
    m_utxos.erase(req.utxo.outpoint);
    credit_exit_on_l1(req.exiter, req.utxo.amount, req.bond);
    if (m_log) {
        m_log->emit(m_now, "plasma.exit_finalized",
                    {{"exit", exit_id}, {"user", req.exiter}, {"amount", req.utxo.amount}});
    }
}

void PlasmaChain::credit_exit_on_l1(const AccountId& user, Amount amount, Amount bond)
{
    m_l1.credit(user, amount + bond);
    m_total_exited += amount;
    Amount fee = m_config.charge_l1_fees ? gas_fee(m_config.exit_gas, m_config.l1_gas_price) : 0;
    if (m_config.charge_l1_fees) m_l1.debit(user, fee);
    m_l1.submit_tx(L1Transaction::make("plasma:contract", user, amount,
                                       m_config.exit_tx_size_bytes, m_config.exit_gas, fee,
                                       TxKind::plasma_exit, m_l1.next_nonce()));
}

const ExitRequest& PlasmaChain::exit_request(std::uint64_t exit_id) const
{
    auto it = m_exits.find(exit_id);
    if (it == m_exits.end()) throw SimError(Err::invalid_params, "unknown exit");
    return it->second;
}

FastWithdrawalOutcome PlasmaChain::fast_withdrawal(const AccountId& user, const Outpoint& outpoint,
                                                   const AccountId& lp, Amount lp_fee,
                                                   bool lp_cooperates)
{
    if (m_mode == OperatorMode::withhold) {
        throw SimError(Err::lp_refused, "liquidity providers refuse a withholding chain");
    }
    auto it = m_utxos.find(outpoint);
    if (it == m_utxos.end()) throw SimError(Err::invalid_params, "output not spendable");
    if (it->second.owner != user) throw SimError(Err::not_owner, user);
    if (lp_fee < 0 || lp_fee >= it->second.amount) {
        throw SimError(Err::invalid_params, "LP fee must be below the withdrawn amount");
    }
    Amount pay = it->second.amount - lp_fee;
    if (m_l1.balance(lp) < pay) throw SimError(Err::lp_insolvent, lp);

    // Funds lock to a child-chain swap contract; the two outcomes below
    // are the only reachable ones, and each is atomic.
    Utxo locked = it->second;
    m_utxos.erase(it);

    FastWithdrawalOutcome outcome;
    if (lp_cooperates) {
        m_l1.debit(lp, pay);
        m_l1.credit(user, pay);
        locked.owner = lp;
        m_utxos[locked.outpoint] = locked;
        outcome.completed = true;
        outcome.paid_to_user = pay;
        if (m_log) {
            m_log->emit(m_now, "plasma.fast_withdraw",
                        {{"user", user}, {"lp", lp}, {"paid", pay}, {"fee", lp_fee}});
        }
    } else {
        m_now += m_config.fast_withdraw_timeout_s;
        m_l1.produce_until(m_now);
        m_utxos[locked.outpoint] = locked; // user reclaims at timeout
        if (m_log) {
            m_log->emit(m_now, "plasma.fast_withdraw_timeout", {{"user", user}, {"lp", lp}});
        }
    }
    return outcome;
}

std::optional<std::uint64_t> PlasmaChain::mass_exit(const std::vector<AccountId>& participants,
                                                    const AccountId& exit_operator,
                                                    std::int64_t as_of_height)
{
    if (participants.empty()) return std::nullopt;
    bool withholding_seen = false;
    for (const auto& [h, b] : m_blocks) {
        if (b.withheld) withholding_seen = true;
    }
    if (!withholding_seen) {
        throw SimError(Err::invalid_params, "mass exit requires detected withholding");
    }
    if (m_meit) throw SimError(Err::invalid_params, "a mass exit is already pending");
    if (m_l1.balance(exit_operator) < m_config.meit_bond) {
        throw SimError(Err::bond_unavailable, exit_operator + " cannot post the MEIT bond");
    }
    if (as_of_height < 0) as_of_height = last_committed_height();
    auto state_it = m_state_at.find(as_of_height);
    if (state_it == m_state_at.end()) {
        throw SimError(Err::invalid_params, "no state snapshot at that height");
    }

    m_l1.debit(exit_operator, m_config.meit_bond);

    Meit meit;
    meit.exit_operator = exit_operator;
    meit.bond = m_config.meit_bond;
    meit.signers.insert(participants.begin(), participants.end());
    meit.started_at = m_now;
    meit.as_of_height = as_of_height;
    for (const auto& [op, utxo] : state_it->second) {
        meit.snapshot.push_back(op);
        meit.bitmap.push_back(meit.signers.count(utxo.owner) > 0);
    }
    if (std::none_of(meit.bitmap.begin(), meit.bitmap.end(), [](bool b) { return b; })) {
        m_l1.credit(exit_operator, m_config.meit_bond);
        throw SimError(Err::insufficient_signatures, "no participant owns state in the snapshot");
    }

    // One large initiation transaction on L1.
    std::int64_t size = 200 + static_cast<std::int64_t>(meit.bitmap.size() / 8 + 1);
    m_l1.submit_tx(L1Transaction::make(exit_operator, "plasma:contract", 0, size,
                                       size * m_l1.params().gas_per_byte, 0, TxKind::plasma_exit,
                                       m_l1.next_nonce()));

    m_meit = std::move(meit);
    if (m_log) {
        std::size_t marked = 0;
        for (bool b : m_meit->bitmap) marked += b ? 1 : 0;
        m_log->emit(m_now, "plasma.meit",
                    {{"operator", exit_operator}, {"participants", participants.size()},
                     {"bits", m_meit->bitmap.size()}, {"marked", marked},
                     {"bond", m_config.meit_bond}});
    }
    return 1;
}

void PlasmaChain::challenge_meit(const Outpoint& outpoint, const AccountId& challenger)
{
    if (!m_meit) throw SimError(Err::invalid_params, "no mass exit pending");
    if (m_now >= m_meit->started_at + m_config.meit_window_s) {
        throw SimError(Err::window_closed, "mass-exit window elapsed");
    }
    auto spend = find_spend(outpoint);
    if (!spend) throw SimError(Err::invalid_proof, "no committed spend of this output");
    for (std::size_t i = 0; i < m_meit->snapshot.size(); ++i) {
        if (m_meit->snapshot[i] == outpoint && m_meit->bitmap[i]) {
            m_meit->bitmap[i] = false;
            if (m_log) {
                m_log->emit(m_now, "plasma.meit_challenged", {{"challenger", challenger}});
            }
            return;
        }
    }
    throw SimError(Err::invalid_proof, "output is not marked in the bitmap");
}

MassExitReport PlasmaChain::finalize_meit()
{
    if (!m_meit) throw SimError(Err::invalid_params, "no mass exit pending");
    if (m_now < m_meit->started_at + m_config.meit_window_s) {
        throw SimError(Err::not_elapsed, "mass-exit window still open");
    }
    MassExitReport report;
    report.baseline_delay_s = m_l1.params().block_interval_s;

    // Every surviving bit credits on L1 at once; measure what the burst
    // does to the mempool.
    Rat submit_time = m_l1.now();
    std::vector<Hash256> pending_ids;
    const auto& snapshot_state = m_state_at.at(m_meit->as_of_height);
    for (std::size_t i = 0; i < m_meit->snapshot.size(); ++i) {
        if (!m_meit->bitmap[i]) {
            ++report.bits_cancelled;
            continue;
        }
        const Utxo& utxo = snapshot_state.at(m_meit->snapshot[i]);
        m_utxos.erase(utxo.outpoint);
        m_l1.credit(utxo.owner, utxo.amount);
        m_total_exited += utxo.amount;
        auto tx = L1Transaction::make("plasma:contract", utxo.owner, utxo.amount,
                                      m_config.exit_tx_size_bytes, m_config.exit_gas, 0,
                                      TxKind::plasma_exit, m_l1.next_nonce());
        pending_ids.push_back(tx.id);
        m_l1.submit_tx(tx);
        ++report.exits_credited;
    }
    report.l1_mempool_peak = m_l1.mempool_size();

    // Drain the burst and measure the inclusion delay it inflicted.
    std::map<Hash256, Rat> included_at;
    while (m_l1.mempool_size() > 0) {
        const Block& b = m_l1.produce_block();
        for (const auto& tx : b.txs) included_at[tx.id] = b.timestamp_s;
    }
    if (m_l1.now() > m_now) m_now = m_l1.now();
    Rat total_delay(0);
    for (const auto& id : pending_ids) {
        total_delay += included_at.at(id) - submit_time;
    }
    if (!pending_ids.empty()) {
        report.avg_inclusion_delay_s = total_delay / Rat(static_cast<std::int64_t>(pending_ids.size()));
    }

    m_l1.credit(m_meit->exit_operator, m_meit->bond);
    m_meit->finalized = true;
    if (m_log) {
        m_log->emit(m_now, "plasma.meit_finalized",
                    {{"credited", report.exits_credited},
                     {"cancelled", report.bits_cancelled},
                     {"mempool_peak", report.l1_mempool_peak},
                     {"avg_delay_s", report.avg_inclusion_delay_s.to_fraction_string()}});
    }
    return report;
}

const Meit& PlasmaChain::meit() const
{
    if (!m_meit) throw SimError(Err::invalid_params, "no mass exit pending");
    return *m_meit;
}

void PlasmaChain::submit_fraud_proof(std::int64_t height, std::size_t tx_index,
                                     const AccountId& prover)
{
    if (!data_available(height)) throw SimError(Err::bad_proof, "block data unavailable");
    auto commit = m_commitments.find(height);
    if (commit == m_commitments.end()) throw SimError(Err::bad_proof, "block is not committed");
    const PlasmaBlock& block = m_blocks.at(height);
    if (tx_index >= block.txs.size()) throw SimError(Err::index_out_of_range, "tx index");

    // Replay the block against the pre-state; the claim stands only if
    // the named transaction really is invalid there.
    std::map<Outpoint, Utxo> state = m_state_at.at(height - 1);
    for (std::size_t i = 0; i <= tx_index; ++i) {
        const PlasmaTx& tx = block.txs[i];
        try {
            validate_transfer(tx, state);
        } catch (const SimError&) {
            if (i == tx_index) {
                // Roll back this block and everything after it.
                std::erase_if(m_blocks, [&](const auto& kv) { return kv.first >= height; });
                std::erase_if(m_commitments, [&](const auto& kv) { return kv.first >= height; });
                std::erase_if(m_state_at, [&](const auto& kv) { return kv.first >= height; });
                m_utxos = m_state_at.at(height - 1);
                m_next_height = height;
                rebuild_indexes();
                Amount slash = m_config.operator_stake - m_stake_slashed;
                if (slash < 0) slash = 0;
                m_l1.credit(prover, slash);
                m_stake_slashed += slash;
                if (m_log) {
                    m_log->emit(m_now, "plasma.fraud_proven",
                                {{"height", height}, {"prover", prover}, {"slashed", slash}});
                }
                return;
            }
            throw SimError(Err::invalid_proof, "an earlier transaction already fails");
        }
        apply_to_set(state, tx);
    }
    throw SimError(Err::invalid_proof, "transaction is valid in its block");
}

std::int64_t PlasmaChain::last_committed_height() const
{
    if (m_commitments.empty()) return 0;
    return m_commitments.rbegin()->first;
}

Amount PlasmaChain::owner_total(const AccountId& owner) const
{
    Amount total = 0;
    for (const auto& [op, utxo] : m_utxos) {
        if (utxo.owner == owner) total += utxo.amount;
    }
    return total;
}

void PlasmaChain::advance_time(const Rat& seconds)
{
    if (seconds < Rat(0)) throw SimError(Err::invalid_params, "time only moves forward");
    m_now += seconds;
    m_l1.produce_until(m_now);
}

void PlasmaChain::rebuild_indexes()
{
    m_created_at.clear();
    m_spent_at.clear();
    for (const auto& [h, block] : m_blocks) index_block(block);
}

Amount PlasmaChain::stage1_deposit_total() const
{
    Amount total = 0;
    for (const auto& [id, flow] : m_deposits) {
        if (flow.stage == 1) total += flow.amount;
    }
    return total;
}

void PlasmaChain::check_conservation() const
{
    Amount spendable = 0;
    for (const auto& [op, utxo] : m_utxos) spendable += utxo.amount;
    Amount expected = spendable + m_pending_ack_total + stage1_deposit_total() + m_fee_pool +
                      m_total_exited;
    if (expected != m_total_deposited) {
        throw SimError(Err::value_mismatch,
                       "plasma conservation violated: deposits " + std::to_string(m_total_deposited) +
                           " vs accounted " + std::to_string(expected));
    }
}

PlasmaThroughput plasma_throughput_estimate(std::int64_t l2_gas_limit, std::int64_t l1_gas_limit,
                                            std::int64_t l1_txs_per_day,
                                            std::int64_t l1_blocks_per_day,
                                            const Rat& l2_block_time_s)
{
    if (l2_gas_limit <= 0 || l1_gas_limit <= 0 || l1_txs_per_day <= 0 || l1_blocks_per_day <= 0 ||
        l2_block_time_s <= Rat(0)) {
        throw SimError(Err::invalid_params, "throughput inputs must be positive");
    }
    // Whole transactions per block, as the estimate chain presents it.
    Rat avg_tx_per_block = Rat(l1_txs_per_day) / Rat(l1_blocks_per_day);
    Rat whole_txs(static_cast<std::int64_t>(avg_tx_per_block.floor()));
    PlasmaThroughput out;
    out.avg_gas_per_tx = Rat(l1_gas_limit) / whole_txs;
    out.tps = Rat(l2_gas_limit) / out.avg_gas_per_tx / l2_block_time_s;
    return out;
}

} // namespace l2sim
