// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/common.hpp>

namespace l2sim {

const char* err_name(Err e)
{
    switch (e) {
    case Err::invalid_params: return "invalid-params";
    case Err::empty_leaves: return "empty-leaves";
    case Err::index_out_of_range: return "index-out-of-range";
    case Err::duplicate_tx_id: return "duplicate-tx-id";
    case Err::insufficient_l1_funds: return "insufficient-l1-funds";
    case Err::insufficient_balance: return "insufficient-balance";
    case Err::channel_not_open: return "channel-not-open";
    case Err::route_not_found: return "route-not-found";
    case Err::unknown_state: return "unknown-state";
    case Err::window_expired: return "window-expired";
    case Err::not_endpoint: return "not-endpoint";
    case Err::counterparty_refused: return "counterparty-refused";
    case Err::not_a_hop: return "not-a-hop";
    case Err::double_spend: return "double-spend";
    case Err::bad_authorization: return "bad-authorization";
    case Err::value_mismatch: return "value-mismatch";
    case Err::bad_proof: return "bad-proof";
    case Err::not_owner: return "not-owner";
    case Err::bond_unavailable: return "bond-unavailable";
    case Err::window_closed: return "window-closed";
    case Err::invalid_proof: return "invalid-proof";
    case Err::not_elapsed: return "not-elapsed";
    case Err::already_cancelled: return "already-cancelled";
    case Err::lp_insolvent: return "lp-insolvent";
    case Err::lp_refused: return "lp-refused";
    case Err::insufficient_signatures: return "insufficient-signatures";
    case Err::invalid_tx: return "invalid-tx";
    case Err::untrusted_prover: return "untrusted-prover";
    case Err::stale_prev_root: return "stale-prev-root";
    case Err::missing_proof: return "missing-proof";
    case Err::insufficient_rollup_balance: return "insufficient-rollup-balance";
    case Err::proof_exceeds_gas_limit: return "proof-exceeds-gas-limit";
    case Err::empty_batch: return "empty-batch";
    case Err::too_many_authors: return "too-many-authors";
    case Err::fee_payer_insolvent: return "fee-payer-insolvent";
    case Err::no_such_batch: return "no-such-batch";
    case Err::backend_misconfigured: return "backend-misconfigured";
    case Err::empty_results: return "empty-results";
    case Err::schema_invalid: return "schema-invalid";
    case Err::amount_overflow: return "amount-overflow";
    case Err::htlc_pending: return "htlc-pending";
    case Err::unknown_channel: return "unknown-channel";
    case Err::unknown_account: return "unknown-account";
    }
    return "unknown-error";
}

Amount checked_mul(Amount a, Amount b)
{
    __int128 r = static_cast<__int128>(a) * static_cast<__int128>(b);
    if (r > INT64_MAX || r < INT64_MIN) {
        throw SimError(Err::amount_overflow, "product does not fit the smallest-unit range");
    }
    return static_cast<Amount>(r);
}

Amount checked_add(Amount a, Amount b)
{
    __int128 r = static_cast<__int128>(a) + static_cast<__int128>(b);
    if (r > INT64_MAX || r < INT64_MIN) {
        throw SimError(Err::amount_overflow, "sum does not fit the smallest-unit range");
    }
    return static_cast<Amount>(r);
}

} // namespace l2sim
