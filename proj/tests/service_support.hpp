#pragma once

#include <string>

#include <json.hpp>

#include "headmouse/ingest.hpp"
#include "headmouse/service/protocol.hpp"

namespace hmtest {

using namespace headmouse;

inline std::string rgb_bytes(const Frame& f) {
    std::string out;
    out.reserve(3 * f.size());
    for (PackedPixel p : f.pixels()) {
        const Rgb8 c = decompose_unchecked(p);
        out += static_cast<char>(c.r);
        out += static_cast<char>(c.g);
        out += static_cast<char>(c.b);
    }
    return out;
}

inline std::string frame_msg(const Frame& f) {
    return nlohmann::json{{"type", "frame"},
                          {"w", f.width()},
                          {"h", f.height()},
                          {"data", service::encode_base64(rgb_bytes(f))}}
        .dump();
}

inline std::string phrase_msg(const std::string& text) { return nlohmann::json{{"type", "phrase"}, {"text", text}}.dump(); }

}  // namespace hmtest
