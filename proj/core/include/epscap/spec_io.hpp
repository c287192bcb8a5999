#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epscap/channel.hpp"

namespace epscap {

/// Parsed channel spec file: a named mixture plus optional cost and labels.
struct ChannelSpec {
    MixedChannel channel;
    std::string name;
    std::vector<std::string> labels;  // one per component when present
};

/// Reads a JSON channel spec. Weights and matrix rows are renormalized when
/// they are within 1e-9 of 1 and rejected otherwise; every violation is
/// reported with its JSON field path. Throws SpecParseError.
ChannelSpec parse_channel_spec(const std::filesystem::path& path);
ChannelSpec parse_channel_spec_text(const std::string& json_text);

/// Serializes back to the same JSON schema, bit-exact doubles
/// (round-trips through parse_channel_spec_text to an identical mixture).
std::string serialize_channel_spec(const ChannelSpec& spec);

}  // namespace epscap
