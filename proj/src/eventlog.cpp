// Copyright (c) 2026 The l2sim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <l2sim/eventlog.hpp>

namespace l2sim {

void EventLog::emit(const Rat& time, const std::string& type, nlohmann::json fields)
{
    nlohmann::json ev = std::move(fields);
    ev["t"] = time.to_fraction_string();
    ev["seq"] = m_seq++;
    ev["type"] = type;
    m_events.push_back(std::move(ev));
}

std::string EventLog::to_jsonl() const
{
    std::string out;
    for (const auto& ev : m_events) {
        out += ev.dump();
        out += '\n';
    }
    return out;
}

std::size_t EventLog::count(const std::string& type) const
{
    std::size_t n = 0;
    for (const auto& ev : m_events) {
        if (ev.at("type").get<std::string>() == type) ++n;
    }
    return n;
}

} // namespace l2sim
