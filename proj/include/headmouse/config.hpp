#pragma once

#include <string>

#include <json.hpp>

#include "headmouse/color.hpp"
#include "headmouse/error.hpp"
#include "headmouse/segmentation.hpp"
#include "headmouse/tracker.hpp"

// JSON (de)serialization of the tunable parameter blocks. Reading is partial:
// only keys present in the object are applied, unknown keys are rejected.
namespace headmouse {

using json = nlohmann::json;

namespace detail {

template <typename T>
T field_as(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    const std::string ctx = where.empty() ? key : where + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ParseError(ctx, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ParseError(ctx, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ParseError(ctx, "expected a number");
    } else {
        if (!v.is_string()) throw ParseError(ctx, "expected a string");
    }
    return v.get<T>();
}

inline void require_object(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
}

template <typename... Keys>
void reject_unknown_keys(const json& obj, const std::string& where, Keys... keys) {
    for (const auto& [k, v] : obj.items()) {
        if (!((k == keys) || ...)) throw ParseError(where.empty() ? k : where + "." + k, "unknown field");
    }
}

template <typename T>
void read_if(const json& obj, const char* key, T& dst, const std::string& where) {
    if (obj.contains(key)) dst = field_as<T>(obj, key, where);
}

// Rewrites the semantic validation failure as a parse error with context.
template <typename T>
void validate_as_parse(const T& value, const std::string& where) {
    try {
        value.validate();
    } catch (const InvalidArgumentError& e) {
        throw ParseError(where, e.what());
    }
}

}  // namespace detail

inline json to_json(const SkinRange& r) {
    return json{{"r_min", r.r_min}, {"r_max", r.r_max}, {"g_min", r.g_min}, {"g_max", r.g_max},
                {"brightness_min", r.brightness_min}};
}

inline void apply_json(SkinRange& r, const json& j, const std::string& where = "skin") {
    detail::require_object(j, where);
    detail::reject_unknown_keys(j, where, "r_min", "r_max", "g_min", "g_max", "brightness_min");
    SkinRange out = r;
    detail::read_if(j, "r_min", out.r_min, where);
    detail::read_if(j, "r_max", out.r_max, where);
    detail::read_if(j, "g_min", out.g_min, where);
    detail::read_if(j, "g_max", out.g_max, where);
    detail::read_if(j, "brightness_min", out.brightness_min, where);
    detail::validate_as_parse(out, where);
    r = out;
}

inline json to_json(const CursorConfig& c) {
    return json{{"gain", c.gain},         {"dead_zone", c.dead_zone}, {"alpha", c.alpha},
                {"screen_w", c.screen_w}, {"screen_h", c.screen_h},   {"invert_x", c.invert_x},
                {"invert_y", c.invert_y}, {"loss_hold", c.loss_hold}};
}

inline void apply_json(CursorConfig& c, const json& j, const std::string& where = "cursor") {
    detail::require_object(j, where);
    detail::reject_unknown_keys(j, where, "gain", "dead_zone", "alpha", "screen_w", "screen_h", "invert_x",
                                "invert_y", "loss_hold");
    CursorConfig out = c;
    detail::read_if(j, "gain", out.gain, where);
    detail::read_if(j, "dead_zone", out.dead_zone, where);
    detail::read_if(j, "alpha", out.alpha, where);
    detail::read_if(j, "screen_w", out.screen_w, where);
    detail::read_if(j, "screen_h", out.screen_h, where);
    detail::read_if(j, "invert_x", out.invert_x, where);
    detail::read_if(j, "invert_y", out.invert_y, where);
    detail::read_if(j, "loss_hold", out.loss_hold, where);
    detail::validate_as_parse(out, where);
    c = out;
}

inline json to_json(const SegParams& p) {
    json j{{"bg_tolerance", p.bg_tolerance}, {"denoise", p.denoise}};
    if (p.min_area) j["min_area"] = *p.min_area;
    return j;
}

inline void apply_json(SegParams& p, const json& j, const std::string& where = "segmentation") {
    detail::require_object(j, where);
    detail::reject_unknown_keys(j, where, "bg_tolerance", "min_area", "denoise");
    SegParams out = p;
    detail::read_if(j, "bg_tolerance", out.bg_tolerance, where);
    detail::read_if(j, "denoise", out.denoise, where);
    if (j.contains("min_area")) {
        if (j.at("min_area").is_null()) out.min_area.reset();
        else out.min_area = detail::field_as<int>(j, "min_area", where);
    }
    detail::validate_as_parse(out, where);
    p = out;
}

}  // namespace headmouse
