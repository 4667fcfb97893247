#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <boost/beast/core/detail/base64.hpp>
#include <json.hpp>

#include "headmouse/config.hpp"
#include "headmouse/error.hpp"
#include "headmouse/ingest.hpp"
#include "headmouse/registry.hpp"
#include "headmouse/session.hpp"

// JSON message protocol spoken on the /session WebSocket. Transport-free so it
// can be driven directly in tests.
namespace headmouse::service {

using nlohmann::json;

struct ServiceOptions {
    int max_frame_width = 1920;
    int max_frame_height = 1080;
};

inline std::optional<std::string> decode_base64(std::string_view in) {
    if (in.size() % 4 != 0) return std::nullopt;
    std::string out(boost::beast::detail::base64::decoded_size(in.size()), '\0');
    const auto [written, read] = boost::beast::detail::base64::decode(out.data(), in.data(), in.size());
    const std::string_view rest = in.substr(read);
    if (rest.size() > 2 || rest.find_first_not_of('=') != std::string_view::npos) return std::nullopt;
    out.resize(written);
    return out;
}

inline std::string encode_base64(std::string_view in) {
    std::string out(boost::beast::detail::base64::encoded_size(in.size()), '\0');
    out.resize(boost::beast::detail::base64::encode(out.data(), in.data(), in.size()));
    return out;
}

// The persisted config shared by all connections. Connections snapshot it when
// they open; their registry edits are written through here (and to disk when a
// path is configured) but never reach another open connection.
class ConfigStore {
public:
    ConfigStore() = default;
    explicit ConfigStore(std::optional<std::filesystem::path> path) : path_(std::move(path)) {
        if (path_ && std::filesystem::exists(*path_)) config_ = load_config(*path_);
    }
    explicit ConfigStore(EngineConfig cfg) : config_(std::move(cfg)) {}

    EngineConfig snapshot() const {
        std::lock_guard lock(mu_);
        return config_;
    }

    void record_add(const AppEntry& entry) {
        std::lock_guard lock(mu_);
        if (config_.registry.find(entry.label) != nullptr) return;
        config_.registry = add(config_.registry, entry.label, entry.target, entry.added_at);
        persist();
    }

    void record_remove(const std::string& label) {
        std::lock_guard lock(mu_);
        if (config_.registry.find(label) == nullptr) return;
        config_.registry = remove(config_.registry, label);
        persist();
    }

private:
    void persist() {
        if (path_) save_config(config_, *path_);
    }

    mutable std::mutex mu_;
    std::optional<std::filesystem::path> path_;
    EngineConfig config_;
};

inline json event_to_json(const Event& e) {
    json args = json::array();
    switch (e.kind) {
        case EventKind::CursorMoved: args = {e.position.x, e.position.y}; break;
        case EventKind::MouseDown:
        case EventKind::MouseUp: args = {to_string(e.button)}; break;
        case EventKind::Click: args = {to_string(e.button), e.count}; break;
        case EventKind::EnabledChanged: args = {e.enabled}; break;
        default:
            for (const auto& a : event_args(e)) args.push_back(a);
            break;
    }
    return json{{"type", "event"}, {"seq", e.seq}, {"kind", to_string(e.kind)}, {"args", args}};
}

inline json error_to_json(const std::string& code, const std::string& message) {
    return json{{"type", "error"}, {"code", code}, {"message", message}};
}

// One connection's protocol state. handle() maps one client message to the
// ordered list of server messages it produces (serialized JSON text).
class Connection {
public:
    Connection(ConfigStore& store, ServiceOptions options = {})
        : store_(store), options_(options), config_(store.snapshot()),
          session_(config_.pipeline(), config_.grammar()) {}

    std::vector<std::string> handle(std::string_view text) {
        out_.clear();
        try {
            dispatch(text);
        } catch (const Error& e) {
            reply(error_to_json(e.code(), e.what()));
        } catch (const json::exception& e) {
            reply(error_to_json("bad_message", e.what()));
        }
        return std::move(out_);
    }

    const Session& session() const { return session_; }
    const EngineConfig& config() const { return config_; }

private:
    struct ProtocolError : Error {
        ProtocolError(std::string code, const std::string& m) : Error(std::move(code), m) {}
    };

    void reply(const json& j) { out_.push_back(j.dump()); }

    void send_events(const std::vector<Event>& events) {
        for (const auto& e : events) reply(event_to_json(e));
    }

    void send_state() {
        const SessionState& s = session_.state();
        const Point c = session_.cursor();
        json face = nullptr;
        if (const auto& f = session_.last_detection()) face = {{"x", f->x}, {"y", f->y}, {"w", f->w}, {"h", f->h}};
        reply(json{{"type", "state"},
                   {"cursor", {{"x", c.x}, {"y", c.y}}},
                   {"face", face},
                   {"enabled", s.enabled},
                   {"awaiting", s.awaiting ? json(*s.awaiting) : json(nullptr)},
                   {"seq", s.seq}});
    }

    void send_registry() {
        json apps = json::array();
        for (const auto& a : config_.registry.apps) apps.push_back({{"label", a.label}, {"target", a.target}});
        reply(json{{"type", "registry"}, {"apps", apps}});
    }

    static const json& require(const json& msg, const char* key) {
        if (!msg.contains(key)) throw ProtocolError("bad_message", std::string("missing field \"") + key + "\"");
        return msg.at(key);
    }

    static std::string require_string(const json& msg, const char* key) {
        const json& v = require(msg, key);
        if (!v.is_string()) throw ProtocolError("bad_message", std::string("field \"") + key + "\" must be a string");
        return v.get<std::string>();
    }

    void dispatch(std::string_view text) {
        json msg;
        try {
            msg = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ProtocolError("bad_json", e.what());
        }
        if (!msg.is_object() || !msg.contains("type") || !msg.at("type").is_string())
            throw ProtocolError("unknown_type", "message must be an object with a string \"type\"");
        const std::string type = msg.at("type").get<std::string>();

        if (type == "frame") return on_frame(msg);
        if (type == "phrase") {
            send_events(session_.phrase(require_string(msg, "text")));
            return send_state();
        }
        if (type == "calibrate") {
            send_events(session_.calibrate());
            return send_state();
        }
        if (type == "set_background") {
            if (!last_frame_) throw ProtocolError("no_frame", "no frame received yet to use as background");
            session_.set_background(*last_frame_);
            return send_state();
        }
        if (type == "config") return on_config(msg);
        if (type == "registry_add") {
            const std::string label = require_string(msg, "label");
            const std::string target = require_string(msg, "target");
            config_ = add_app(config_, label, target);
            session_.set_grammar(config_.grammar());
            store_.record_add(config_.registry.apps.back());
            return send_registry();
        }
        if (type == "registry_remove") {
            const std::string label = normalize_phrase(require_string(msg, "label"));
            config_.registry = remove(config_.registry, label);
            session_.set_grammar(config_.grammar());
            store_.record_remove(label);
            return send_registry();
        }
        if (type == "registry_list") return send_registry();
        throw ProtocolError("unknown_type", "unknown message type \"" + type + "\"");
    }

    void on_frame(const json& msg) {
        const json& w = require(msg, "w");
        const json& h = require(msg, "h");
        if (!w.is_number_integer() || !h.is_number_integer() || w.get<long long>() <= 0 || h.get<long long>() <= 0)
            throw ProtocolError("bad_frame", "w and h must be positive integers");
        const long long width = w.get<long long>(), height = h.get<long long>();
        if (width > options_.max_frame_width || height > options_.max_frame_height)
            throw ProtocolError("frame_too_large", "frame " + std::to_string(width) + "x" + std::to_string(height) +
                                                       " exceeds " + std::to_string(options_.max_frame_width) + "x" +
                                                       std::to_string(options_.max_frame_height));
        const auto bytes = decode_base64(require_string(msg, "data"));
        if (!bytes) throw ProtocolError("bad_frame", "data is not valid base64");
        const auto expected = static_cast<std::size_t>(width * height * 3);
        if (bytes->size() != expected)
            throw ProtocolError("bad_frame", "data decodes to " + std::to_string(bytes->size()) + " bytes, expected " +
                                                 std::to_string(expected));
        Frame frame = frame_from_rgb_bytes(static_cast<int>(width), static_cast<int>(height), *bytes);
        send_events(session_.frame(frame));
        last_frame_ = std::move(frame);
        send_state();
    }

    void on_config(const json& msg) {
        PipelineConfig p = session_.config();
        try {
            detail::reject_unknown_keys(msg, "", "type", "cursor", "segmentation", "skin");
            if (msg.contains("cursor")) apply_json(p.cursor, msg.at("cursor"), "cursor");
            if (msg.contains("segmentation")) apply_json(p.seg, msg.at("segmentation"), "segmentation");
            if (msg.contains("skin")) apply_json(p.skin, msg.at("skin"), "skin");
        } catch (const ParseError& e) {
            throw ProtocolError("bad_config", e.what());
        }
        session_.set_config(p);
        send_state();
    }

    ConfigStore& store_;
    ServiceOptions options_;
    EngineConfig config_;
    Session session_;
    std::optional<Frame> last_frame_;
    std::vector<std::string> out_;
};

}  // namespace headmouse::service
