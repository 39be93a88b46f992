#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "arviz/bridge.hpp"
#include "arviz/protocol.hpp"
#include "arviz/serve.hpp"
#include "oracles.hpp"

using namespace arviz;
namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

class Client {
public:
    explicit Client(unsigned short port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/ws");
    }

    void send(const std::string& text) { ws_.write(net::buffer(text)); }

    std::string read() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return beast::buffers_to_string(buf.data());
    }

    /// Reads until a message of the given type arrives.
    json read_type(const std::string& type) {
        for (int i = 0; i < 50; ++i) {
            const json j = json::parse(read());
            if (j["type"] == type) return j;
        }
        return {};
    }

    void close() { ws_.close(websocket::close_code::normal); }

private:
    net::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
};

http::response<http::string_body> get(unsigned short port, const std::string& target) {
    net::io_context ioc;
    beast::tcp_stream stream(ioc);
    tcp::resolver resolver(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return res;
}

class BridgeTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = std::filesystem::temp_directory_path() / "arviz_bridge_static";
        std::filesystem::create_directories(root_ / "js");
        std::ofstream(root_ / "index.html") << "<html>console</html>";
        std::ofstream(root_ / "js" / "app.js") << "console.log(1);";
        BridgeServer::Options o;
        o.port = 0;
        o.staticRoot = root_;
        o.snapshotHz = 50;
        server_ = std::make_unique<BridgeServer>(
            o,
            [this](const InboundCommand& c) -> std::optional<std::string> {
                received_.push_back(c);
                return check_command(c, 12, 4);
            },
            [this](int n) { lastClients_ = n; });
        server_->start();
    }

    void TearDown() override {
        server_->stop();
        std::filesystem::remove_all(root_);
    }

    std::filesystem::path root_;
    std::unique_ptr<BridgeServer> server_;
    std::vector<InboundCommand> received_;
    std::atomic<int> lastClients_{-1};
};

}  // namespace

TEST_F(BridgeTest, EphemeralPortIsReported) {
    EXPECT_NE(server_->port(), 0);
}

TEST_F(BridgeTest, ConnectGetsTheConnectMessageFirstThenSnapshots) {
    server_->publish(R"({"type":"snapshot","tick":1})", R"({"type":"snapshot","tick":1,"layout":{}})");
    Client c(server_->port());
    const json first = json::parse(c.read());
    EXPECT_EQ(first["type"], "snapshot");
    EXPECT_TRUE(first.contains("layout"));
    server_->publish(R"({"type":"snapshot","tick":2})", R"({"type":"snapshot","tick":2,"layout":{}})");
    json next = c.read_type("snapshot");
    while (next["tick"] != 2) next = c.read_type("snapshot");
    EXPECT_FALSE(next.contains("layout"));
    for (int i = 0; i < 100 && server_->clients() != 1; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    EXPECT_EQ(server_->clients(), 1);
    EXPECT_EQ(lastClients_.load(), 1);
    c.close();
    for (int i = 0; i < 100 && server_->clients() != 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    EXPECT_EQ(server_->clients(), 0);
}

TEST_F(BridgeTest, CommandsAreAckedOrRejectedAndTheConnectionSurvives) {
    Client c(server_->port());
    c.send(R"({"id":1,"type":"setChannel","agentKind":"robot","agentId":0,"channel":"trajectory","on":false})");
    json r = c.read_type("ack");
    EXPECT_EQ(r["id"], 1);

    c.send(R"({"id":2,"type":"setChannel","agentKind":"robot","agentId":99,"channel":"trajectory","on":false})");
    r = c.read_type("error");
    EXPECT_EQ(r["id"], 2);
    EXPECT_NE(r["text"].get<std::string>().find("99"), std::string::npos);

    c.send("this is not json");
    r = c.read_type("error");
    EXPECT_EQ(r["id"], 0);

    c.send(R"({"id":3,"type":"pause"})");
    r = c.read_type("ack");
    EXPECT_EQ(r["id"], 3);
    c.close();
    ASSERT_EQ(received_.size(), 3u);
    EXPECT_EQ(received_[0].command, (Command{SetChannel{AgentKind::Robot, 0, VizChannel::Trajectory, false}}));
}

TEST_F(BridgeTest, BroadcastReachesClients) {
    Client c(server_->port());
    for (int i = 0; i < 100 && server_->clients() != 1; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    server_->broadcast(R"({"type":"iterationStatus","iteration":4})");
    EXPECT_EQ(c.read_type("iterationStatus")["iteration"], 4);
}

TEST_F(BridgeTest, ServesStaticFiles) {
    auto res = get(server_->port(), "/");
    EXPECT_EQ(res.result(), http::status::ok);
    EXPECT_EQ(res.body(), "<html>console</html>");
    EXPECT_EQ(res[http::field::content_type], "text/html");
    res = get(server_->port(), "/js/app.js?v=3");
    EXPECT_EQ(res.result(), http::status::ok);
    EXPECT_EQ(res[http::field::content_type], "application/javascript");
    EXPECT_EQ(get(server_->port(), "/missing.css").result(), http::status::not_found);
    EXPECT_NE(get(server_->port(), "/../../etc/passwd").result(), http::status::ok);
}

TEST_F(BridgeTest, BusyPortIsAnError) {
    BridgeServer::Options o;
    o.port = server_->port();
    BridgeServer second(o, [](const InboundCommand&) { return std::nullopt; });
    EXPECT_THROW(second.start(), std::runtime_error);
}

TEST(Static, ResolveRejectsEscapes) {
    const std::filesystem::path root = "/srv/console";
    EXPECT_EQ(resolve_static(root, "/"), root / "index.html");
    EXPECT_EQ(resolve_static(root, "/a/../b.js"), root / "b.js");
    EXPECT_FALSE(resolve_static(root, "/../secret"));
    EXPECT_FALSE(resolve_static(root, "/a/../../secret"));
    EXPECT_FALSE(resolve_static(root, "relative"));
    EXPECT_EQ(mime_type("x.css"), "text/css");
    EXPECT_EQ(mime_type("x.bin"), "application/octet-stream");
}

TEST(Serve, InteractiveTrainingWaitsForAConsoleAndReportsIterations) {
    BridgeServer::Options o;
    o.port = 0;
    ServeSession session(arviz::testing::small_world(), o, true);
    TrainerParams p;
    p.iterations = 2;
    p.pairsPerIteration = 3;
    p.expertTimeout = 20;
    TrainingResult result;
    std::thread trainer([&] { result = session.train(session.interactive(), p); });

    // Nothing is recorded until a console is connected; the toggle and the
    // speed-up land at the next tick, long before the last snapshot event.
    Client c(session.port());
    c.send(R"({"id":1,"type":"setSpeed","multiplier":16})");
    c.send(R"({"id":2,"type":"setChannel","agentKind":"station","agentId":1,"channel":"balloon","on":false})");
    std::vector<json> statuses;
    bool sawLayout = false;
    while (statuses.size() < 2 || !sawLayout) {
        const json m = json::parse(c.read());
        if (m["type"] == "iterationStatus") statuses.push_back(m);
        if (m["type"] == "snapshot" && m.contains("layout")) sawLayout = true;
    }
    trainer.join();
    c.close();
    EXPECT_EQ(statuses[0]["iteration"], 0);
    EXPECT_EQ(statuses[0]["records"], 3 * 4);
    EXPECT_EQ(statuses[1]["iteration"], 1);
    EXPECT_EQ(result.dataset.size(), 2u * 3u * 4u);
    const Demonstration& last = result.dataset.records().back();
    EXPECT_EQ(last.agentKind, AgentKind::Station);
    EXPECT_EQ(last.action, 0);
}

TEST(Serve, TrialStopsAtMaxTicksAndLogsTheRun) {
    BridgeServer::Options o;
    o.port = 0;
    ServeSession session(arviz::testing::micro_world(), o, false);
    ReplayLog log;
    const TrialMetrics m =
        session.trial(std::make_shared<Policy>(Policy::builtin(PolicyKind::AllOn)), 1, &log, 120);
    EXPECT_EQ(log.endTick, 120u);
    EXPECT_FALSE(m.timedOut);
    EXPECT_EQ(log.configFingerprint, fingerprint(arviz::testing::micro_world()));
}
