#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "headmouse/config.hpp"
#include "headmouse/error.hpp"
#include "headmouse/grammar.hpp"
#include "headmouse/session.hpp"

namespace headmouse {

inline constexpr int kConfigFormatVersion = 1;
inline constexpr const char* kDefaultConfigPath = "headmouse.json";
inline constexpr const char* kConfigEnvVar = "HEADMOUSE_CONFIG";

struct AppEntry {
    std::string label;   // normalized voice phrase
    std::string target;  // opaque launch string
    std::int64_t added_at = 0;  // unix seconds

    friend bool operator==(const AppEntry&, const AppEntry&) = default;
};

// Launchable apps and phrase synonyms. Values are immutable in practice:
// every mutation returns a new registry with `revision` advanced by one.
struct Registry {
    std::int64_t revision = 0;
    std::vector<AppEntry> apps;
    std::map<std::string, std::string> synonyms;  // phrase -> built-in intent name

    friend bool operator==(const Registry&, const Registry&) = default;

    const AppEntry* find(const std::string& label) const {
        const std::string key = normalize_phrase(label);
        for (const auto& a : apps)
            if (a.label == key) return &a;
        return nullptr;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(apps.size());
        for (const auto& a : apps) out.push_back(a.label);
        return out;
    }

    std::map<std::string, std::string> targets() const {
        std::map<std::string, std::string> out;
        for (const auto& a : apps) out[a.label] = a.target;
        return out;
    }
};

inline std::int64_t unix_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

inline Registry add(const Registry& reg, const std::string& label, const std::string& target,
                    std::int64_t added_at = unix_now()) {
    const std::string key = normalize_phrase(label);
    if (key.empty()) throw InvalidArgumentError("app label is empty after normalization");
    if (is_static_phrase(key)) throw CollisionError(key, "app label \"" + key + "\" is a reserved command phrase");
    if (reg.synonyms.count(key) != 0) throw CollisionError(key, "app label \"" + key + "\" is already a synonym");
    if (reg.find(key) != nullptr) throw DuplicateError("app label \"" + key + "\" is already registered");
    Registry out = reg;
    out.apps.push_back({key, target, added_at});
    ++out.revision;
    return out;
}

inline Registry remove(const Registry& reg, const std::string& label) {
    const std::string key = normalize_phrase(label);
    Registry out = reg;
    const auto it = std::find_if(out.apps.begin(), out.apps.end(), [&](const AppEntry& a) { return a.label == key; });
    if (it == out.apps.end()) throw NotFoundError("no app labelled \"" + key + "\"");
    out.apps.erase(it);
    ++out.revision;
    return out;
}

// Synonyms only extend the built-in phrases; built-ins themselves cannot be removed.
inline Registry add_synonym(const Registry& reg, const std::string& phrase, const std::string& intent_name) {
    const std::string key = normalize_phrase(phrase);
    if (key.empty()) throw InvalidArgumentError("synonym is empty after normalization");
    if (!static_intent_from_name(intent_name))
        throw InvalidArgumentError("unknown intent \"" + intent_name + "\" for synonym");
    if (is_static_phrase(key)) throw CollisionError(key, "\"" + key + "\" is a built-in phrase");
    if (reg.find(key) != nullptr) throw CollisionError(key, "\"" + key + "\" is an app label");
    if (reg.synonyms.count(key) != 0) throw DuplicateError("synonym \"" + key + "\" already defined");
    Registry out = reg;
    out.synonyms[key] = intent_name;
    ++out.revision;
    return out;
}

inline Registry remove_synonym(const Registry& reg, const std::string& phrase) {
    const std::string key = normalize_phrase(phrase);
    if (reg.synonyms.count(key) == 0) throw NotFoundError("no synonym \"" + key + "\"");
    Registry out = reg;
    out.synonyms.erase(key);
    ++out.revision;
    return out;
}

inline Grammar build_grammar(const Registry& reg, const std::vector<std::string>& menu_names = default_menu_names()) {
    return build_grammar(reg.labels(), menu_names, reg.synonyms, reg.targets());
}

// Everything persisted in the config file. Sections other than the registry
// are optional and written only when present.
struct EngineConfig {
    Registry registry;
    std::optional<SkinRange> skin;
    std::optional<CursorConfig> cursor;
    std::optional<SegParams> segmentation;
    std::optional<std::vector<std::string>> menus;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;

    PipelineConfig pipeline() const {
        PipelineConfig p;
        if (skin) p.skin = *skin;
        if (cursor) p.cursor = *cursor;
        if (segmentation) p.seg = *segmentation;
        return p;
    }

    std::vector<std::string> menu_names() const { return menus ? *menus : default_menu_names(); }

    Grammar grammar() const { return build_grammar(registry, menu_names()); }
};

// Registry add() that also keeps the label clear of the configured menu names.
inline EngineConfig add_app(const EngineConfig& cfg, const std::string& label, const std::string& target,
                            std::int64_t added_at = unix_now()) {
    const std::string key = normalize_phrase(label);
    for (const auto& m : cfg.menu_names())
        if (normalize_phrase(m) == key) throw CollisionError(key, "app label \"" + key + "\" is a menu name");
    EngineConfig out = cfg;
    out.registry = add(cfg.registry, label, target, added_at);
    return out;
}

inline json to_json(const Registry& reg) {
    json apps = json::array();
    for (const auto& a : reg.apps) apps.push_back({{"label", a.label}, {"target", a.target}, {"added_at", a.added_at}});
    json syn = json::object();
    for (const auto& [k, v] : reg.synonyms) syn[k] = v;
    return json{{"version", kConfigFormatVersion}, {"revision", reg.revision}, {"apps", apps}, {"synonyms", syn}};
}

inline json to_json(const EngineConfig& cfg) {
    json j = to_json(cfg.registry);
    if (cfg.skin) j["skin"] = to_json(*cfg.skin);
    if (cfg.cursor) j["cursor"] = to_json(*cfg.cursor);
    if (cfg.segmentation) j["segmentation"] = to_json(*cfg.segmentation);
    if (cfg.menus) j["menus"] = *cfg.menus;
    return j;
}

// Canonical text: sorted keys, 2-space indent, trailing newline.
inline std::string serialize(const EngineConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }
inline std::string serialize(const Registry& reg) { return to_json(reg).dump(2) + "\n"; }

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
    return "line " + std::to_string(line);
}

inline void check_label(const std::string& label, const std::string& where) {
    if (label.empty()) throw ParseError(where, "label is empty");
    if (normalize_phrase(label) != label) throw ParseError(where, "label \"" + label + "\" is not normalized");
    if (is_static_phrase(label)) throw ParseError(where, "label \"" + label + "\" is a reserved command phrase");
}

inline Registry registry_from_json(const json& j) {
    if (!j.contains("version")) throw ParseError("version", "missing field");
    if (!j.at("version").is_number_integer()) throw ParseError("version", "expected an integer");
    const auto version = j.at("version").get<long long>();
    if (version != kConfigFormatVersion) throw VersionError(version);

    Registry reg;
    if (j.contains("revision")) reg.revision = field_as<std::int64_t>(j, "revision", "");
    if (!j.contains("apps")) throw ParseError("apps", "missing field");
    const json& apps = j.at("apps");
    if (!apps.is_array()) throw ParseError("apps", "expected an array");
    for (std::size_t i = 0; i < apps.size(); ++i) {
        const std::string where = "apps[" + std::to_string(i) + "]";
        const json& e = apps[i];
        require_object(e, where);
        reject_unknown_keys(e, where, "label", "target", "added_at");
        for (const char* key : {"label", "target"})
            if (!e.contains(key)) throw ParseError(where + "." + key, "missing field");
        AppEntry a;
        a.label = field_as<std::string>(e, "label", where);
        a.target = field_as<std::string>(e, "target", where);
        if (e.contains("added_at")) a.added_at = field_as<std::int64_t>(e, "added_at", where);
        check_label(a.label, where + ".label");
        if (reg.find(a.label) != nullptr) throw ParseError(where + ".label", "duplicate label \"" + a.label + "\"");
        reg.apps.push_back(std::move(a));
    }
    if (j.contains("synonyms")) {
        const json& syn = j.at("synonyms");
        require_object(syn, "synonyms");
        for (const auto& [phrase, v] : syn.items()) {
            const std::string where = "synonyms." + phrase;
            if (!v.is_string()) throw ParseError(where, "expected an intent name");
            check_label(phrase, where);
            if (reg.find(phrase) != nullptr) throw ParseError(where, "synonym collides with an app label");
            if (!static_intent_from_name(v.get<std::string>()))
                throw ParseError(where, "unknown intent \"" + v.get<std::string>() + "\"");
            reg.synonyms[phrase] = v.get<std::string>();
        }
    }
    return reg;
}

}  // namespace detail

inline EngineConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(detail::line_context(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!j.is_object()) throw ParseError("line 1", "config must be a JSON object");
    detail::reject_unknown_keys(j, "", "version", "revision", "apps", "synonyms", "skin", "cursor", "segmentation",
                                "menus");
    EngineConfig cfg;
    cfg.registry = detail::registry_from_json(j);
    if (j.contains("skin")) apply_json(cfg.skin.emplace(), j.at("skin"), "skin");
    if (j.contains("cursor")) apply_json(cfg.cursor.emplace(), j.at("cursor"), "cursor");
    if (j.contains("segmentation")) apply_json(cfg.segmentation.emplace(), j.at("segmentation"), "segmentation");
    if (j.contains("menus")) {
        const json& m = j.at("menus");
        if (!m.is_array()) throw ParseError("menus", "expected an array");
        auto& menus = cfg.menus.emplace();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i].is_string()) throw ParseError("menus[" + std::to_string(i) + "]", "expected a string");
            menus.push_back(m[i].get<std::string>());
        }
    }
    try {
        (void)cfg.grammar();
    } catch (const CollisionError& e) {
        throw ParseError("menus", e.what());
    }
    return cfg;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to a sibling temporary then renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot replace " + path.string() + ": " + ec.message());
    }
}

inline EngineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }
inline void save_config(const EngineConfig& cfg, const std::filesystem::path& path) {
    write_file_atomic(path, serialize(cfg));
}

inline Registry load(const std::filesystem::path& path) { return load_config(path).registry; }
inline void save(const Registry& reg, const std::filesystem::path& path) { write_file_atomic(path, serialize(reg)); }

// --config flag, then $HEADMOUSE_CONFIG, then ./headmouse.json.
inline std::filesystem::path resolve_config_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return env;
    return kDefaultConfigPath;
}

}  // namespace headmouse
