#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "arviz/commands.hpp"

namespace arviz {

/// WebSocket endpoint at /ws plus a static-file endpoint for the console.
///
/// Runs its own network thread. The simulation side only publishes snapshot
/// text and receives validated commands through the handler.
class BridgeServer {
public:
    struct Options {
        std::string host = "127.0.0.1";
        unsigned short port = 8080;  // 0 picks a free port
        std::filesystem::path staticRoot;
        double snapshotHz = 10.0;
    };

    /// Returns an error text to reject the command, nullopt to accept it.
    using CommandHandler = std::function<std::optional<std::string>(const InboundCommand&)>;
    using ClientsChanged = std::function<void(int clients)>;

    BridgeServer(Options options, CommandHandler onCommand, ClientsChanged onClients = {});
    ~BridgeServer();
    BridgeServer(const BridgeServer&) = delete;
    BridgeServer& operator=(const BridgeServer&) = delete;

    /// Binds and starts serving. Throws std::runtime_error if the port is busy.
    void start();
    void stop();
    unsigned short port() const;
    int clients() const;

    /// Latest snapshot, streamed at snapshotHz. `onConnect` is sent as the
    /// first message to newly connected clients.
    void publish(std::string snapshot, std::string onConnect);
    /// Sent to every client right away (iteration status and the like).
    void broadcast(std::string message);

    class Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// Content type for a static file, by extension.
std::string mime_type(const std::filesystem::path& path);

/// Maps a request target onto a file under `root`; nullopt for targets that
/// escape the root.
std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root, std::string_view target);

}  // namespace arviz
