// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_COMMON_HPP
#define L2SIM_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace l2sim {

//! Money is always an integer number of the chain's smallest unit
//! (satoshi, wei). Wide intermediates go through CheckedMul/CheckedAdd.
using Amount = std::int64_t;

using AccountId = std::string;

enum class Err {
    invalid_params,
    empty_leaves,
    index_out_of_range,
    duplicate_tx_id,
    insufficient_l1_funds,
    insufficient_balance,
    channel_not_open,
    route_not_found,
    unknown_state,
    window_expired,
    not_endpoint,
    counterparty_refused,
    not_a_hop,
    double_spend,
    bad_authorization,
    value_mismatch,
    bad_proof,
    not_owner,
    bond_unavailable,
    window_closed,
    invalid_proof,
    not_elapsed,
    already_cancelled,
    lp_insolvent,
    lp_refused,
    insufficient_signatures,
    invalid_tx,
    untrusted_prover,
    stale_prev_root,
    missing_proof,
    insufficient_rollup_balance,
    proof_exceeds_gas_limit,
    empty_batch,
    too_many_authors,
    fee_payer_insolvent,
    no_such_batch,
    backend_misconfigured,
    empty_results,
    schema_invalid,
    amount_overflow,
    htlc_pending,
    unknown_channel,
    unknown_account,
};

const char* err_name(Err e);

//! Thrown when an operation's preconditions are violated. Modeled
//! protocol outcomes (a denied route, a rejected challenge) are returned
//! as values instead.
class SimError : public std::runtime_error {
public:
    SimError(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), m_code(code) {}

    Err code() const { return m_code; }

private:
    Err m_code;
};

//! Multiply two amounts, throwing amount_overflow instead of wrapping.
Amount checked_mul(Amount a, Amount b);
Amount checked_add(Amount a, Amount b);

} // namespace l2sim

#endif // L2SIM_COMMON_HPP
