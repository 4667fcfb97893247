#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "headmouse/error.hpp"
#include "headmouse/frame.hpp"

namespace headmouse {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(const Point&, const Point&) = default;
};

// Relative (mouse-like) mapping from face-center motion to cursor motion.
struct CursorConfig {
    double gain = 4.0;       // cursor px per face-center px
    double dead_zone = 0.5;  // per-axis smoothed motion at or below this is dropped
    double alpha = 0.4;      // EMA weight of the newest sample; 1 disables smoothing
    int screen_w = 1920;
    int screen_h = 1080;
    bool invert_x = false;
    bool invert_y = false;
    int loss_hold = 15;  // missing frames tolerated before the face is reported lost

    friend bool operator==(const CursorConfig&, const CursorConfig&) = default;

    void validate() const {
        if (!(gain > 0.0) || !std::isfinite(gain)) throw InvalidArgumentError("gain must be > 0");
        if (!(dead_zone >= 0.0) || !std::isfinite(dead_zone)) throw InvalidArgumentError("dead_zone must be >= 0");
        if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgumentError("alpha must be in (0, 1]");
        if (screen_w <= 0 || screen_h <= 0) throw InvalidArgumentError("screen size must be positive");
        if (loss_hold < 0) throw InvalidArgumentError("loss_hold must be >= 0");
    }
};

struct TrackerState {
    Point neutral;
    Point smoothed;
    Point cursor;
    int lost_frames = 0;

    friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

struct TrackResult {
    TrackerState state;
    Point cursor;
    bool moved = false;
};

inline Point center_of(const Rect& r) { return {r.center_x(), r.center_y()}; }

inline TrackerState calibrate(const Rect& face, const CursorConfig& config) {
    TrackerState s;
    s.neutral = s.smoothed = center_of(face);
    s.cursor = {config.screen_w / 2.0, config.screen_h / 2.0};
    s.lost_frames = 0;
    return s;
}

inline TrackResult track(const TrackerState& state, const std::optional<Rect>& face, const CursorConfig& config) {
    TrackResult out{state, state.cursor, false};
    if (!face) {
        ++out.state.lost_frames;
        return out;
    }

    const Point c = center_of(*face);
    const Point smoothed{config.alpha * c.x + (1.0 - config.alpha) * state.smoothed.x,
                         config.alpha * c.y + (1.0 - config.alpha) * state.smoothed.y};
    double dx = smoothed.x - state.smoothed.x;
    double dy = smoothed.y - state.smoothed.y;
    if (std::abs(dx) <= config.dead_zone) dx = 0.0;
    if (std::abs(dy) <= config.dead_zone) dy = 0.0;
    if (config.invert_x) dx = -dx;
    if (config.invert_y) dy = -dy;

    const Point cursor{std::clamp(state.cursor.x + config.gain * dx, 0.0, static_cast<double>(config.screen_w)),
                       std::clamp(state.cursor.y + config.gain * dy, 0.0, static_cast<double>(config.screen_h))};

    out.state.smoothed = smoothed;
    out.state.cursor = cursor;
    out.state.lost_frames = 0;
    out.cursor = cursor;
    out.moved = cursor != state.cursor;
    return out;
}

}  // namespace headmouse
