// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef L2SIM_EVENTLOG_HPP
#define L2SIM_EVENTLOG_HPP

#include <l2sim/rational.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace l2sim {

//! Append-only record of state transitions, one JSON object per event.
//! Timestamps are exact rationals rendered as "p/q" so logs are
//! byte-stable across runs.
class EventLog {
public:
    void emit(const Rat& time, const std::string& type, nlohmann::json fields = {});

    const std::vector<nlohmann::json>& events() const { return m_events; }

    //! JSON-lines rendering, one event per line.
    std::string to_jsonl() const;

    std::size_t count(const std::string& type) const;
    bool has(const std::string& type) const { return count(type) > 0; }

private:
    std::vector<nlohmann::json> m_events;
    std::uint64_t m_seq = 0;
};

} // namespace l2sim

#endif // L2SIM_EVENTLOG_HPP
