#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "headmouse/color.hpp"
#include "headmouse/frame.hpp"
#include "headmouse/grammar.hpp"
#include "headmouse/registry.hpp"
#include "headmouse/ingest.hpp"
#include "headmouse/segmentation.hpp"

namespace hmtest {

using namespace headmouse;

// Brute-force largest 4-connected component by explicit-stack flood fill.
// Ties keep the component found first in row-major order.
inline std::optional<Rect> flood_fill_largest(const BitMask& m, int min_area) {
    const int w = m.width(), h = m.height();
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::size_t best_area = 0;
    std::optional<Rect> best;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            if (!m.at(x0, y0) || seen[y0 * w + x0]) continue;
            std::vector<std::pair<int, int>> stack{{x0, y0}};
            seen[y0 * w + x0] = 1;
            std::size_t area = 0;
            int lx = x0, hx = x0, ly = y0, hy = y0;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++area;
                lx = std::min(lx, x);
                hx = std::max(hx, x);
                ly = std::min(ly, y);
                hy = std::max(hy, y);
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
                    if (!m.at(nx[k], ny[k]) || seen[ny[k] * w + nx[k]]) continue;
                    seen[ny[k] * w + nx[k]] = 1;
                    stack.emplace_back(nx[k], ny[k]);
                }
            }
            if (area > best_area) {
                best_area = area;
                best = Rect{lx, ly, hx - lx + 1, hy - ly + 1};
            }
        }
    }
    if (!best || best_area < static_cast<std::size_t>(min_area)) return std::nullopt;
    return best;
}

inline BitMask random_mask(std::mt19937& rng, int max_dim = 32) {
    std::uniform_int_distribution<int> dim(1, max_dim);
    std::uniform_real_distribution<double> density(0.05, 0.7);
    const int w = dim(rng), h = dim(rng);
    BitMask m(w, h);
    const double p = density(rng);
    std::bernoulli_distribution bit(p);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, bit(rng));
    return m;
}

inline Rgb8 random_rgb(std::mt19937& rng) {
    std::uniform_int_distribution<int> c(0, 255);
    return Rgb8{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
}

inline int max_channel_diff(Rgb8 a, Rgb8 b) {
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

// Ellipse membership counted directly, independent of render().
inline std::size_t ellipse_pixel_count(const Ellipse& e, int w, int h) {
    std::size_t n = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double u = (x - e.cx) / e.rx, v = (y - e.cy) / e.ry;
            n += (u * u + v * v <= 1.0) ? 1 : 0;
        }
    return n;
}

// Random clean scene: background outside the skin range, face color inside it
// and separated from the background by more than `bg_tolerance`, up to five
// single-pixel specks kept 2 px clear of the face's bounding box.
inline SynthScene random_scene(std::mt19937& rng, const SkinRange& range, const SegParams& params) {
    std::uniform_int_distribution<int> wd(64, 200), hd(48, 160);
    SynthScene s;
    s.width = wd(rng);
    s.height = hd(rng);
    do {
        s.bg_color = random_rgb(rng);
    } while (is_skin(s.bg_color, range));
    do {
        s.skin_color = random_rgb(rng);
    } while (!is_skin(s.skin_color, range) || max_channel_diff(s.skin_color, s.bg_color) <= params.bg_tolerance);

    const Frame probe(s.width, s.height);
    const auto min_area = static_cast<std::size_t>(params.min_area_for(probe));
    for (;;) {
        std::uniform_real_distribution<double> rxd(3.0, s.width / 3.0), ryd(3.0, s.height / 3.0);
        Ellipse e;
        e.rx = rxd(rng);
        e.ry = ryd(rng);
        std::uniform_real_distribution<double> cxd(e.rx, s.width - 1 - e.rx), cyd(e.ry, s.height - 1 - e.ry);
        e.cx = cxd(rng);
        e.cy = cyd(rng);
        if (ellipse_pixel_count(e, s.width, s.height) >= min_area) {
            s.face = e;
            break;
        }
    }

    const double lx = std::floor(s.face.cx - s.face.rx) - 2, hx = std::ceil(s.face.cx + s.face.rx) + 2;
    const double ly = std::floor(s.face.cy - s.face.ry) - 2, hy = std::ceil(s.face.cy + s.face.ry) + 2;
    std::uniform_int_distribution<int> nspecks(0, 5), xs(0, s.width - 1), ys(0, s.height - 1);
    std::bernoulli_distribution skin_colored(0.5);
    for (int k = nspecks(rng), tries = 0; k > 0 && tries < 1000; ++tries) {
        const int x = xs(rng), y = ys(rng);
        if (x >= lx && x <= hx && y >= ly && y <= hy) continue;
        s.specks.push_back({x, y, skin_colored(rng) ? s.skin_color : random_rgb(rng)});
        --k;
    }
    return s;
}

inline std::string random_word(std::mt19937& rng, int min_len = 1, int max_len = 8) {
    std::uniform_int_distribution<int> len(min_len, max_len), letter('a', 'z');
    std::string w;
    for (int k = len(rng); k > 0; --k) w += static_cast<char>(letter(rng));
    return w;
}

// Registry built through add()/add_synonym() with awkward target strings.
inline Registry random_registry(std::mt19937& rng) {
    static const std::vector<std::string> odd{"", "C:\\Program Files\\x.exe", "quote\"d", "tab\tnew\nline",
                                              "\xc3\xa9t\xc3\xa9", "{}[]", "/usr/bin/firefox --new-window"};
    static const std::vector<std::string> intents{"LeftClick", "RightClick", "Ok", "Up", "Down", "HoldButton"};
    std::uniform_int_distribution<int> napps(0, 12), nsyn(0, 4), words(1, 3);
    std::uniform_int_distribution<std::size_t> pick_odd(0, odd.size() - 1), pick_intent(0, intents.size() - 1);
    std::uniform_int_distribution<std::int64_t> ts(0, 4'000'000'000LL);
    Registry reg;
    for (int i = napps(rng); i > 0; --i) {
        std::string label;
        for (int k = words(rng); k > 0; --k) label += (label.empty() ? "" : " ") + random_word(rng);
        const std::string target = std::bernoulli_distribution(0.5)(rng) ? odd[pick_odd(rng)] : random_word(rng, 0, 30);
        try {
            reg = add(reg, label, target, ts(rng));
        } catch (const Error&) {
        }
    }
    for (int i = nsyn(rng); i > 0; --i) {
        try {
            reg = add_synonym(reg, random_word(rng, 3, 9), intents[pick_intent(rng)]);
        } catch (const Error&) {
        }
    }
    return reg;
}

inline std::string data_dir() { return HEADMOUSE_DATA_DIR; }
inline std::string test_data_dir() { return HEADMOUSE_TEST_DATA_DIR; }

}  // namespace hmtest
