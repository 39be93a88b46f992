#pragma once

#include <optional>
#include <string>

#include "arviz/commands.hpp"
#include "arviz/trainer.hpp"
#include "arviz/world.hpp"

namespace arviz {

/// Bridge message schema version, sent in every outbound message.
inline constexpr int kProtocolVersion = 1;

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(const std::string& what, std::uint64_t commandId = 0)
        : std::runtime_error(what), commandId(commandId) {}
    std::uint64_t commandId;
};

/// Parses one inbound message. Throws ProtocolError on malformed input.
InboundCommand parse_command(const std::string& text);
std::string to_json(const InboundCommand& cmd);

/// Optional parts of a snapshot message: the static layout (sent on
/// connect) and the interactive expert's checkbox state.
struct SnapshotExtras {
    const WarehouseConfig* layout = nullptr;
    std::optional<FrameActions> checkboxes;
};

std::string snapshot_message(const WorldSnapshot& snap, const SnapshotExtras& extras = {});
std::string status_message(const IterationReport& report);
std::string ack_message(std::uint64_t commandId);
std::string error_message(const std::string& text, std::uint64_t commandId = 0);

}  // namespace arviz
