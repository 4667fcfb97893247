#pragma once

#include <sys/socket.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "headmouse/error.hpp"
#include "headmouse/service/protocol.hpp"

// WebSocket endpoint /session plus static files at /. One thread per
// connection; messages on a connection are handled strictly in arrival order.
namespace headmouse::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct ServerOptions {
    std::string host = "127.0.0.1";
    unsigned short port = 8943;  // 0 picks an ephemeral port
    std::optional<std::filesystem::path> config_path;
    std::optional<std::filesystem::path> static_dir;
    ServiceOptions protocol;
};

// "host:port" -> (host, port)
inline std::pair<std::string, unsigned short> parse_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size())
        throw InvalidArgumentError("bind address must be host:port, got \"" + bind + "\"");
    const std::string port_text = bind.substr(colon + 1);
    if (port_text.find_first_not_of("0123456789") != std::string::npos || port_text.size() > 5)
        throw InvalidArgumentError("bad port \"" + port_text + "\"");
    const unsigned long port = std::stoul(port_text);
    if (port > 65535) throw InvalidArgumentError("port out of range");
    return {bind.substr(0, colon), static_cast<unsigned short>(port)};
}

inline std::string_view mime_type(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    return "application/octet-stream";
}

class Server {
public:
    explicit Server(ServerOptions options)
        : options_(std::move(options)), store_(options_.config_path), acceptor_(ioc_) {}

    ~Server() { stop(); }

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds and starts accepting on a background thread. Throws IoError when
    // the address cannot be bound.
    void start() {
        try {
            const tcp::endpoint ep{asio::ip::make_address(options_.host), options_.port};
            acceptor_.open(ep.protocol());
            acceptor_.set_option(asio::socket_base::reuse_address(true));
            acceptor_.bind(ep);
            acceptor_.listen();
        } catch (const boost::system::system_error& e) {
            throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port) + ": " + e.what());
        }
        port_ = acceptor_.local_endpoint().port();
        do_accept();
        io_thread_ = std::thread([this] { ioc_.run(); });
    }

    void stop() {
        if (stopped_.exchange(true)) return;
        asio::post(ioc_, [this] {
            boost::system::error_code ec;
            acceptor_.close(ec);
        });
        ioc_.stop();
        if (io_thread_.joinable()) io_thread_.join();
        std::list<Worker> threads;
        {
            std::lock_guard lock(mu_);
            for (auto& c : live_) ::shutdown(c->socket.native_handle(), SHUT_RDWR);
            threads.swap(threads_);
        }
        for (auto& w : threads)
            if (w.thread.joinable()) w.thread.join();
    }

    // Blocks until stop() is called from another thread.
    void wait() {
        if (io_thread_.joinable()) io_thread_.join();
    }

    unsigned short port() const noexcept { return port_; }
    ConfigStore& store() noexcept { return store_; }

private:
    struct Worker {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };

    // Caller holds mu_.
    void reap_finished() {
        for (auto it = threads_.begin(); it != threads_.end();) {
            if (it->done->load()) {
                it->thread.join();
                it = threads_.erase(it);
            } else {
                ++it;
            }
        }
    }

    struct Live {
        explicit Live(tcp::socket s) : socket(std::move(s)) {}
        tcp::socket socket;
    };

    void do_accept() {
        acceptor_.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
            if (ec) return;
            auto live = std::make_shared<Live>(std::move(socket));
            {
                std::lock_guard lock(mu_);
                reap_finished();
                live_.push_back(live);
                threads_.push_back(Worker{});
                Worker& w = threads_.back();
                w.done = std::make_shared<std::atomic<bool>>(false);
                w.thread = std::thread([this, live, done = w.done] {
                    serve_connection(*live);
                    std::lock_guard l(mu_);
                    live_.remove(live);
                    done->store(true);
                });
            }
            do_accept();
        });
    }

    void serve_connection(Live& live) {
        beast::error_code ec;
        beast::flat_buffer buffer;
        http::request<http::string_body> req;
        http::read(live.socket, buffer, req, ec);
        if (ec) return;

        if (websocket::is_upgrade(req)) {
            if (req.target() != "/session") {
                respond(live.socket, req, http::status::not_found, "text/plain", "no such endpoint\n");
                return;
            }
            run_websocket(live, req);
            return;
        }
        serve_static(live.socket, req);
    }

    void run_websocket(Live& live, const http::request<http::string_body>& req) {
        websocket::stream<tcp::socket&> ws(live.socket);
        beast::error_code ec;
        ws.accept(req, ec);
        if (ec) return;
        Connection conn(store_, options_.protocol);
        beast::flat_buffer buf;
        for (;;) {
            buf.clear();
            ws.read(buf, ec);
            if (ec) return;
            const std::string text = beast::buffers_to_string(buf.data());
            for (const auto& msg : conn.handle(text)) {
                ws.text(true);
                ws.write(asio::buffer(msg), ec);
                if (ec) return;
            }
        }
    }

    void serve_static(tcp::socket& socket, const http::request<http::string_body>& req) {
        if (req.method() != http::verb::get && req.method() != http::verb::head) {
            respond(socket, req, http::status::method_not_allowed, "text/plain", "method not allowed\n");
            return;
        }
        std::string target(req.target());
        if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
        if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
            respond(socket, req, http::status::bad_request, "text/plain", "bad path\n");
            return;
        }
        if (target == "/") target = "/index.html";

        if (!options_.static_dir) {
            if (target == "/index.html") {
                respond(socket, req, http::status::ok, "text/html",
                        "<!doctype html><title>headmouse</title><p>headmouse service is running. "
                        "Connect a client to <code>/session</code>.</p>\n");
            } else {
                respond(socket, req, http::status::not_found, "text/plain", "not found\n");
            }
            return;
        }
        const std::filesystem::path file = *options_.static_dir / target.substr(1);
        std::ifstream in(file, std::ios::binary);
        if (!in || std::filesystem::is_directory(file)) {
            respond(socket, req, http::status::not_found, "text/plain", "not found\n");
            return;
        }
        std::ostringstream body;
        body << in.rdbuf();
        respond(socket, req, http::status::ok, mime_type(file), body.str());
    }

    static void respond(tcp::socket& socket, const http::request<http::string_body>& req, http::status status,
                        std::string_view type, std::string body) {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
        res.keep_alive(false);
        res.body() = std::move(body);
        res.prepare_payload();
        beast::error_code ec;
        http::write(socket, res, ec);
        socket.shutdown(tcp::socket::shutdown_send, ec);
    }

    ServerOptions options_;
    ConfigStore store_;
    asio::io_context ioc_;
    tcp::acceptor acceptor_;
    std::thread io_thread_;
    std::atomic<bool> stopped_{false};
    unsigned short port_ = 0;

    std::mutex mu_;
    std::list<std::shared_ptr<Live>> live_;
    std::list<Worker> threads_;
};

}  // namespace headmouse::service
