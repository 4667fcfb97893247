#pragma once

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "headmouse/error.hpp"

namespace headmouse {

enum class IntentKind {
    LeftClick,
    DoubleLeftClick,
    RightClick,
    DoubleRightClick,
    HoldButton,
    ReleaseButton,
    Up,
    Down,
    Ok,
    Yes,
    No,
    Enable,
    Disable,
    MenuSelect,
    LaunchApp,
};

// A parsed voice command. `name` is the menu or app label for MenuSelect and
// LaunchApp and empty otherwise.
struct Intent {
    IntentKind kind = IntentKind::LeftClick;
    std::string name;

    friend bool operator==(const Intent&, const Intent&) = default;
};

inline constexpr std::array<std::pair<IntentKind, std::string_view>, 15> kIntentNames{{
    {IntentKind::LeftClick, "LeftClick"},
    {IntentKind::DoubleLeftClick, "DoubleLeftClick"},
    {IntentKind::RightClick, "RightClick"},
    {IntentKind::DoubleRightClick, "DoubleRightClick"},
    {IntentKind::HoldButton, "HoldButton"},
    {IntentKind::ReleaseButton, "ReleaseButton"},
    {IntentKind::Up, "Up"},
    {IntentKind::Down, "Down"},
    {IntentKind::Ok, "Ok"},
    {IntentKind::Yes, "Yes"},
    {IntentKind::No, "No"},
    {IntentKind::Enable, "Enable"},
    {IntentKind::Disable, "Disable"},
    {IntentKind::MenuSelect, "MenuSelect"},
    {IntentKind::LaunchApp, "LaunchApp"},
}};

inline std::string_view intent_kind_name(IntentKind k) {
    for (const auto& [kind, name] : kIntentNames)
        if (kind == k) return name;
    return "?";
}

// Parameterless kinds only; MenuSelect/LaunchApp cannot be targets of a synonym.
inline std::optional<IntentKind> static_intent_from_name(std::string_view name) {
    for (const auto& [kind, n] : kIntentNames)
        if (n == name && kind != IntentKind::MenuSelect && kind != IntentKind::LaunchApp) return kind;
    return std::nullopt;
}

inline std::string to_string(const Intent& i) {
    std::string s(intent_kind_name(i.kind));
    if (i.kind == IntentKind::MenuSelect || i.kind == IntentKind::LaunchApp) s += "(" + i.name + ")";
    return s;
}

// Lowercase, drop ASCII punctuation, collapse whitespace runs, trim.
inline std::string normalize_phrase(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (u < 0x80 && (std::isspace(u) != 0)) {
            pending_space = !out.empty();
            continue;
        }
        if (u < 0x80 && (std::ispunct(u) != 0)) continue;
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(u < 0x80 ? std::tolower(u) : u);
    }
    return out;
}

inline const std::vector<std::pair<std::string_view, IntentKind>>& static_phrases() {
    static const std::vector<std::pair<std::string_view, IntentKind>> table{
        {"click", IntentKind::LeftClick},
        {"left click", IntentKind::LeftClick},
        {"double click", IntentKind::DoubleLeftClick},
        {"double left click", IntentKind::DoubleLeftClick},
        {"right click", IntentKind::RightClick},
        {"double right click", IntentKind::DoubleRightClick},
        {"hold", IntentKind::HoldButton},
        {"release", IntentKind::ReleaseButton},
        {"up", IntentKind::Up},
        {"down", IntentKind::Down},
        {"ok", IntentKind::Ok},
        {"yes", IntentKind::Yes},
        {"no", IntentKind::No},
        {"enable", IntentKind::Enable},
        {"disable", IntentKind::Disable},
    };
    return table;
}

inline bool is_static_phrase(std::string_view normalized) {
    for (const auto& [p, k] : static_phrases())
        if (p == normalized) return true;
    return false;
}

// Immutable phrase table: built-ins, synonyms, app labels and menu names.
class Grammar {
public:
    std::optional<Intent> parse(std::string_view text) const {
        const auto it = table_.find(normalize_phrase(text));
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<std::string, Intent>& entries() const noexcept { return table_; }
    const std::set<std::string>& app_labels() const noexcept { return apps_; }
    const std::set<std::string>& menu_names() const noexcept { return menus_; }

    // Launch target recorded for an app label; empty when none was given.
    std::string target_of(const std::string& label) const {
        const auto it = targets_.find(label);
        return it == targets_.end() ? std::string{} : it->second;
    }

private:
    friend Grammar build_grammar(const std::vector<std::string>&, const std::vector<std::string>&,
                                 const std::map<std::string, std::string>&,
                                 const std::map<std::string, std::string>&);

    void insert(const std::string& phrase, Intent intent, std::string_view what) {
        if (phrase.empty()) throw InvalidArgumentError(std::string(what) + " phrase is empty after normalization");
        const auto [it, inserted] = table_.emplace(phrase, intent);
        if (!inserted && !(it->second == intent))
            throw CollisionError(phrase, std::string(what) + " \"" + phrase + "\" collides with an existing phrase");
    }

    std::map<std::string, Intent> table_;
    std::set<std::string> apps_;
    std::set<std::string> menus_;
    std::map<std::string, std::string> targets_;
};

// `synonyms` maps extra phrases to built-in intent names ("LeftClick", ...);
// `targets` maps app labels to launch strings.
inline Grammar build_grammar(const std::vector<std::string>& app_labels, const std::vector<std::string>& menu_names,
                             const std::map<std::string, std::string>& synonyms = {},
                             const std::map<std::string, std::string>& targets = {}) {
    Grammar g;
    for (const auto& [phrase, kind] : static_phrases()) g.table_.emplace(std::string(phrase), Intent{kind, {}});

    for (const auto& [raw, intent_name] : synonyms) {
        const std::string phrase = normalize_phrase(raw);
        const auto kind = static_intent_from_name(intent_name);
        if (!kind) throw InvalidArgumentError("synonym \"" + raw + "\" names unknown intent \"" + intent_name + "\"");
        if (is_static_phrase(phrase))
            throw CollisionError(phrase, "synonym \"" + phrase + "\" redefines a built-in phrase");
        g.insert(phrase, Intent{*kind, {}}, "synonym");
    }
    for (const auto& raw : menu_names) {
        const std::string name = normalize_phrase(raw);
        g.insert(name, Intent{IntentKind::MenuSelect, name}, "menu name");
        g.menus_.insert(name);
    }
    for (const auto& raw : app_labels) {
        const std::string label = normalize_phrase(raw);
        g.insert(label, Intent{IntentKind::LaunchApp, label}, "app label");
        g.apps_.insert(label);
    }
    for (const auto& [raw, target] : targets) g.targets_[normalize_phrase(raw)] = target;
    return g;
}

inline std::optional<Intent> parse(const Grammar& g, std::string_view text) { return g.parse(text); }

// Default demo menu bar.
inline const std::vector<std::string>& default_menu_names() {
    static const std::vector<std::string> menus{"file", "edit", "view", "insert"};
    return menus;
}

}  // namespace headmouse
