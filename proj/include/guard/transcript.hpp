#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guard/bus.hpp"

namespace guard {

struct TranscriptHeader {
    int schema_version = 1;
    std::string scenario_name;
    std::uint64_t seed = 0;
    Tick horizon = 0;
    std::string scenario_json;  // canonical scenario echo, single line
};

/// Append-only record of a run: header, every bus event in canonical order,
/// and the final metrics text. Replaying the same scenario and seed yields a
/// byte-identical serialization.
class RunTranscript {
public:
    TranscriptHeader header;
    std::vector<BusEvent> events;
    std::string metrics_text;

    std::string serialize() const;
    static RunTranscript parse(const std::string& text);
    static RunTranscript load(const std::string& path);
    void save(const std::string& path) const;

    std::uint64_t digest() const;
};

std::string serialize_event(const BusEvent& ev);
BusEvent parse_event(std::string_view line);

}  // namespace guard
