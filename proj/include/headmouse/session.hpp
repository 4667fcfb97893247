#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "headmouse/color.hpp"
#include "headmouse/frame.hpp"
#include "headmouse/grammar.hpp"
#include "headmouse/segmentation.hpp"
#include "headmouse/tracker.hpp"

namespace headmouse {

enum class Button { Left, Right };

inline const char* to_string(Button b) { return b == Button::Left ? "Left" : "Right"; }

enum class EventKind {
    CursorMoved,
    MouseDown,
    MouseUp,
    Click,
    NavUp,
    NavDown,
    Enter,
    MenuSelected,
    ConfirmRequested,
    AppLaunched,
    Cancelled,
    EnabledChanged,
    FaceLost,
    FaceFound,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::CursorMoved: return "CursorMoved";
        case EventKind::MouseDown: return "MouseDown";
        case EventKind::MouseUp: return "MouseUp";
        case EventKind::Click: return "Click";
        case EventKind::NavUp: return "NavUp";
        case EventKind::NavDown: return "NavDown";
        case EventKind::Enter: return "Enter";
        case EventKind::MenuSelected: return "MenuSelected";
        case EventKind::ConfirmRequested: return "ConfirmRequested";
        case EventKind::AppLaunched: return "AppLaunched";
        case EventKind::Cancelled: return "Cancelled";
        case EventKind::EnabledChanged: return "EnabledChanged";
        case EventKind::FaceLost: return "FaceLost";
        case EventKind::FaceFound: return "FaceFound";
    }
    return "?";
}

// One output event. Only the fields relevant to `kind` are meaningful:
//   CursorMoved: position; MouseDown/MouseUp: button; Click: button, count;
//   MenuSelected/ConfirmRequested: name; AppLaunched: name, target;
//   EnabledChanged: enabled.
struct Event {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::CursorMoved;
    Point position;
    Button button = Button::Left;
    int count = 1;
    std::string name;
    std::string target;
    bool enabled = false;

    friend bool operator==(const Event&, const Event&) = default;
};

struct SessionState {
    bool enabled = false;
    std::optional<std::string> awaiting;  // AwaitConfirm(label) when set, Idle otherwise
    std::optional<Button> held;
    // Absent until the first face is seen; the first detection calibrates.
    std::optional<TrackerState> tracker;
    std::optional<Rect> last_face;
    bool face_lost = false;
    std::uint64_t seq = 0;  // seq of the last emitted event, 0 before any

    friend bool operator==(const SessionState&, const SessionState&) = default;
};

struct PipelineConfig {
    SkinRange skin = default_skin_range();
    SegParams seg;
    CursorConfig cursor;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct Step {
    SessionState state;
    std::vector<Event> events;
    std::optional<Rect> face;  // detection result for frame steps
};

namespace detail {

class Emitter {
public:
    explicit Emitter(Step& step) : step_(step) {}

    Event& emit(EventKind kind) {
        Event e;
        e.seq = ++step_.state.seq;
        e.kind = kind;
        step_.events.push_back(std::move(e));
        return step_.events.back();
    }

private:
    Step& step_;
};

}  // namespace detail

// Detection and tracking for one frame. `background` may be null (no subtraction).
inline Step on_frame(const SessionState& state, const Frame& frame, const Frame* background,
                     const PipelineConfig& config) {
    if (background != nullptr) detail::require_same_dims(frame, *background);
    Step step{state, {}, detect(frame, background, config.skin, config.seg)};
    detail::Emitter out(step);
    SessionState& s = step.state;
    if (step.face) s.last_face = step.face;

    if (!s.tracker) {
        if (step.face) s.tracker = calibrate(*step.face, config.cursor);
        return step;
    }

    const TrackResult r = track(*s.tracker, step.face, config.cursor);
    s.tracker = r.state;
    if (step.face) {
        if (s.face_lost) {
            s.face_lost = false;
            out.emit(EventKind::FaceFound);
        }
    } else if (r.state.lost_frames == config.cursor.loss_hold + 1) {
        s.face_lost = true;
        out.emit(EventKind::FaceLost);
    }
    if (r.moved) out.emit(EventKind::CursorMoved).position = r.cursor;
    return step;
}

// Re-centers on the most recent detection; the cursor jumps to mid-screen.
inline Step on_calibrate(const SessionState& state, const CursorConfig& cursor) {
    Step step{state, {}, state.last_face};
    if (!state.last_face) return step;
    const Point before = state.tracker ? state.tracker->cursor : Point{cursor.screen_w / 2.0, cursor.screen_h / 2.0};
    step.state.tracker = calibrate(*state.last_face, cursor);
    if (step.state.tracker->cursor != before) {
        detail::Emitter out(step);
        out.emit(EventKind::CursorMoved).position = step.state.tracker->cursor;
    }
    return step;
}

inline Step on_intent(const SessionState& state, const Intent& intent, const Grammar& grammar) {
    Step step{state, {}, std::nullopt};
    detail::Emitter out(step);
    SessionState& s = step.state;

    if (!s.enabled) {
        if (intent.kind == IntentKind::Enable) {
            s.enabled = true;
            out.emit(EventKind::EnabledChanged).enabled = true;
        }
        return step;
    }

    if (intent.kind == IntentKind::Disable) {
        if (s.held) {
            out.emit(EventKind::MouseUp).button = *s.held;
            s.held.reset();
        }
        s.awaiting.reset();
        s.enabled = false;
        out.emit(EventKind::EnabledChanged).enabled = false;
        return step;
    }

    if (s.awaiting) {
        if (intent.kind == IntentKind::Yes) {
            Event& e = out.emit(EventKind::AppLaunched);
            e.name = *s.awaiting;
            e.target = grammar.target_of(*s.awaiting);
            s.awaiting.reset();
        } else if (intent.kind == IntentKind::No) {
            out.emit(EventKind::Cancelled);
            s.awaiting.reset();
        }
        return step;
    }

    auto click = [&](Button b, int count) {
        Event& e = out.emit(EventKind::Click);
        e.button = b;
        e.count = count;
    };

    switch (intent.kind) {
        case IntentKind::LeftClick: click(Button::Left, 1); break;
        case IntentKind::DoubleLeftClick: click(Button::Left, 2); break;
        case IntentKind::RightClick: click(Button::Right, 1); break;
        case IntentKind::DoubleRightClick: click(Button::Right, 2); break;
        case IntentKind::HoldButton:
            if (!s.held) {
                s.held = Button::Left;
                out.emit(EventKind::MouseDown).button = Button::Left;
            }
            break;
        case IntentKind::ReleaseButton:
            if (s.held) {
                out.emit(EventKind::MouseUp).button = *s.held;
                s.held.reset();
            }
            break;
        case IntentKind::Up: out.emit(EventKind::NavUp); break;
        case IntentKind::Down: out.emit(EventKind::NavDown); break;
        case IntentKind::Ok: out.emit(EventKind::Enter); break;
        case IntentKind::MenuSelect: out.emit(EventKind::MenuSelected).name = intent.name; break;
        case IntentKind::LaunchApp:
            s.awaiting = intent.name;
            out.emit(EventKind::ConfirmRequested).name = intent.name;
            break;
        case IntentKind::Yes:
        case IntentKind::No:
        case IntentKind::Enable:
        case IntentKind::Disable: break;
    }
    return step;
}

inline Step on_phrase(const SessionState& state, std::string_view text, const Grammar& grammar) {
    const auto intent = grammar.parse(text);
    if (!intent) return Step{state, {}, std::nullopt};
    return on_intent(state, *intent, grammar);
}

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Positional arguments of an event, in log order.
inline std::vector<std::string> event_args(const Event& e) {
    switch (e.kind) {
        case EventKind::CursorMoved: return {format_number(e.position.x), format_number(e.position.y)};
        case EventKind::MouseDown:
        case EventKind::MouseUp: return {to_string(e.button)};
        case EventKind::Click: return {to_string(e.button), std::to_string(e.count)};
        case EventKind::MenuSelected:
        case EventKind::ConfirmRequested: return {e.name};
        case EventKind::AppLaunched:
            if (e.target.empty()) return {e.name};
            return {e.name, e.target};
        case EventKind::EnabledChanged: return {e.enabled ? "true" : "false"};
        default: return {};
    }
}

// `seq<TAB>kind<TAB>args...`, no trailing newline.
inline std::string format_event(const Event& e) {
    std::string line = std::to_string(e.seq);
    line += '\t';
    line += to_string(e.kind);
    for (const auto& a : event_args(e)) {
        line += '\t';
        line += a;
    }
    return line;
}

// Owns one session's state together with its configuration, grammar and background.
class Session {
public:
    Session(PipelineConfig config, Grammar grammar) : config_(std::move(config)), grammar_(std::move(grammar)) {}

    std::vector<Event> frame(const Frame& f) {
        Step step = on_frame(state_, f, background(), config_);
        last_detection_ = step.face;
        return apply(std::move(step));
    }
    std::vector<Event> phrase(std::string_view text) { return apply(on_phrase(state_, text, grammar_)); }
    std::vector<Event> calibrate() { return apply(on_calibrate(state_, config_.cursor)); }

    void set_background(Frame bg) { background_ = std::move(bg); }
    void clear_background() { background_.reset(); }
    const Frame* background() const { return background_ ? &*background_ : nullptr; }

    void set_grammar(Grammar g) { grammar_ = std::move(g); }
    void set_config(PipelineConfig c) { config_ = std::move(c); }

    const SessionState& state() const noexcept { return state_; }
    const PipelineConfig& config() const noexcept { return config_; }
    const Grammar& grammar() const noexcept { return grammar_; }
    const std::optional<Rect>& last_detection() const noexcept { return last_detection_; }

    Point cursor() const {
        if (state_.tracker) return state_.tracker->cursor;
        return {config_.cursor.screen_w / 2.0, config_.cursor.screen_h / 2.0};
    }

private:
    std::vector<Event> apply(Step step) {
        state_ = std::move(step.state);
        return std::move(step.events);
    }

    PipelineConfig config_;
    Grammar grammar_;
    SessionState state_;
    std::optional<Frame> background_;
    std::optional<Rect> last_detection_;
};

}  // namespace headmouse
