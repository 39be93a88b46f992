#include "arviz/bridge.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "arviz/protocol.hpp"

namespace arviz {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

std::string mime_type(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    if (ext == ".map") return "application/json";
    return "application/octet-stream";
}

std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root, std::string_view target) {
    std::string path(target.substr(0, target.find('?')));
    if (path.empty() || path.front() != '/') return std::nullopt;
    if (path.back() == '/') path += "index.html";
    const std::filesystem::path rel = std::filesystem::path(path.substr(1)).lexically_normal();
    if (rel.empty() || rel.is_absolute()) return std::nullopt;
    for (const auto& part : rel) {
        if (part == "..") return std::nullopt;
    }
    return root / rel;
}

class WsSession;

class BridgeServer::Impl {
public:
    Impl(Options options, CommandHandler onCommand, ClientsChanged onClients)
        : options_(std::move(options)), onCommand_(std::move(onCommand)), onClients_(std::move(onClients)),
          acceptor_(ioc_), timer_(ioc_) {}

    void start();
    void stop();

    void join(const std::shared_ptr<WsSession>& s);
    void leave(WsSession* s);
    std::string handle(const std::string& text);

    void publish(std::string snapshot, std::string onConnect) {
        std::lock_guard lock(mutex_);
        snapshot_ = std::make_shared<const std::string>(std::move(snapshot));
        onConnect_ = std::make_shared<const std::string>(std::move(onConnect));
        ++sequence_;
    }
    void broadcast(std::string message);

    const Options& options() const { return options_; }
    unsigned short port() const { return port_; }
    int clients() const { return clientCount_.load(); }

private:
    void accept();
    void tick();

    Options options_;
    CommandHandler onCommand_;
    ClientsChanged onClients_;
    net::io_context ioc_;
    tcp::acceptor acceptor_;
    net::steady_timer timer_;
    std::thread thread_;
    unsigned short port_ = 0;

    std::mutex mutex_;
    std::shared_ptr<const std::string> snapshot_;
    std::shared_ptr<const std::string> onConnect_;
    std::uint64_t sequence_ = 0;
    std::uint64_t sentSequence_ = 0;

    std::set<std::shared_ptr<WsSession>> sessions_;  // io thread only
    std::set<std::shared_ptr<WsSession>> ungreeted_;  // joined before anything was published
    std::atomic<int> clientCount_{0};
};

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, BridgeServer::Impl& server) : ws_(std::move(socket)), server_(server) {}

    void run(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->server_.join(self);
            self->read();
        });
    }

    void send(std::shared_ptr<const std::string> msg, bool droppable) {
        if (droppable && queue_.size() > 8) return;
        queue_.push_back(std::move(msg));
        if (queue_.size() == 1) write();
    }

    void close() {
        beast::error_code ec;
        beast::get_lowest_layer(ws_).socket().close(ec);
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->server_.leave(self.get());
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->send(std::make_shared<const std::string>(self->server_.handle(text)), false);
            self->read();
        });
    }

    void write() {
        ws_.text(true);
        ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->server_.leave(self.get());
                return;
            }
            self->queue_.pop_front();
            if (!self->queue_.empty()) self->write();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    BridgeServer::Impl& server_;
};

namespace {

http::response<http::string_body> static_response(const http::request<http::string_body>& req,
                                                  const std::filesystem::path& root) {
    auto reply = [&](http::status status, std::string body, const std::string& type) {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::content_type, type);
        res.keep_alive(req.keep_alive());
        res.body() = std::move(body);
        res.prepare_payload();
        return res;
    };
    if (req.method() != http::verb::get && req.method() != http::verb::head) {
        return reply(http::status::method_not_allowed, "method not allowed\n", "text/plain");
    }
    const auto path = root.empty() ? std::nullopt : resolve_static(root, std::string_view(req.target().data(), req.target().size()));
    if (!path) return reply(http::status::not_found, "not found\n", "text/plain");
    std::ifstream in(*path, std::ios::binary);
    if (!in || std::filesystem::is_directory(*path)) return reply(http::status::not_found, "not found\n", "text/plain");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto res = reply(http::status::ok, ss.str(), mime_type(*path));
    if (req.method() == http::verb::head) res.body().clear();
    return res;
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, BridgeServer::Impl& server) : stream_(std::move(socket)), server_(server) {}

    void run() { read(); }

private:
    void read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                return;
            }
            self->onRequest();
        });
    }

    void onRequest() {
        if (websocket::is_upgrade(req_)) {
            if (req_.target() == "/ws") {
                stream_.expires_never();
                std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
            }
            return;
        }
        auto res = std::make_shared<http::response<http::string_body>>(static_response(req_, server_.options().staticRoot));
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
            if (!ec && res->keep_alive()) {
                self->read();
            } else {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
            }
        });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
    BridgeServer::Impl& server_;
};

}  // namespace

void BridgeServer::Impl::start() {
    try {
        const tcp::endpoint ep(net::ip::make_address(options_.host), options_.port);
        acceptor_.open(ep.protocol());
        acceptor_.set_option(net::socket_base::reuse_address(true));
        acceptor_.bind(ep);
        acceptor_.listen();
    } catch (const boost::system::system_error& e) {
        throw std::runtime_error("cannot listen on " + options_.host + ":" + std::to_string(options_.port) + ": " +
                                 e.code().message());
    }
    port_ = acceptor_.local_endpoint().port();
    accept();
    tick();
    thread_ = std::thread([this] { ioc_.run(); });
}

void BridgeServer::Impl::stop() {
    if (!thread_.joinable()) return;
    ioc_.stop();
    thread_.join();
    for (const auto& s : sessions_) s->close();
    sessions_.clear();
    ungreeted_.clear();
    clientCount_ = 0;
}

void BridgeServer::Impl::accept() {
    acceptor_.async_accept(net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) return;
        std::make_shared<HttpSession>(std::move(socket), *this)->run();
        accept();
    });
}

void BridgeServer::Impl::tick() {
    timer_.expires_after(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / options_.snapshotHz)));
    timer_.async_wait([this](beast::error_code ec) {
        if (ec) return;
        std::shared_ptr<const std::string> snap;
        std::shared_ptr<const std::string> greeting;
        {
            std::lock_guard lock(mutex_);
            if (sequence_ != sentSequence_) {
                snap = snapshot_;
                greeting = onConnect_;
                sentSequence_ = sequence_;
            }
        }
        if (snap) {
            for (const auto& s : sessions_) {
                if (ungreeted_.erase(s)) {
                    s->send(greeting, false);
                } else {
                    s->send(snap, true);
                }
            }
        }
        tick();
    });
}

void BridgeServer::Impl::join(const std::shared_ptr<WsSession>& s) {
    std::shared_ptr<const std::string> first;
    {
        std::lock_guard lock(mutex_);
        first = onConnect_;
    }
    if (first) {
        s->send(first, false);
    } else {
        ungreeted_.insert(s);
    }
    sessions_.insert(s);
    clientCount_ = static_cast<int>(sessions_.size());
    if (onClients_) onClients_(clientCount_);
}

void BridgeServer::Impl::leave(WsSession* s) {
    for (auto it = sessions_.begin(); it != sessions_.end(); ++it) {
        if (it->get() == s) {
            ungreeted_.erase(*it);
            sessions_.erase(it);
            clientCount_ = static_cast<int>(sessions_.size());
            if (onClients_) onClients_(clientCount_);
            return;
        }
    }
}

std::string BridgeServer::Impl::handle(const std::string& text) {
    InboundCommand cmd;
    try {
        cmd = parse_command(text);
    } catch (const ProtocolError& e) {
        return error_message(e.what(), e.commandId);
    }
    if (const auto err = onCommand_(cmd)) return error_message(*err, cmd.id);
    return ack_message(cmd.id);
}

void BridgeServer::Impl::broadcast(std::string message) {
    auto msg = std::make_shared<const std::string>(std::move(message));
    net::post(ioc_, [this, msg] {
        for (const auto& s : sessions_) s->send(msg, false);
    });
}

BridgeServer::BridgeServer(Options options, CommandHandler onCommand, ClientsChanged onClients)
    : impl_(std::make_unique<Impl>(std::move(options), std::move(onCommand), std::move(onClients))) {}

BridgeServer::~BridgeServer() { impl_->stop(); }

void BridgeServer::start() { impl_->start(); }
void BridgeServer::stop() { impl_->stop(); }
unsigned short BridgeServer::port() const { return impl_->port(); }
int BridgeServer::clients() const { return impl_->clients(); }
void BridgeServer::publish(std::string snapshot, std::string onConnect) {
    impl_->publish(std::move(snapshot), std::move(onConnect));
}
void BridgeServer::broadcast(std::string message) { impl_->broadcast(std::move(message)); }

}  // namespace arviz
