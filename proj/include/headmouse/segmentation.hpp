#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "headmouse/color.hpp"
#include "headmouse/error.hpp"
#include "headmouse/frame.hpp"

namespace headmouse {

struct SegParams {
    int bg_tolerance = 30;
    // Unset means 0.5% of the frame's pixel count (at least 1).
    std::optional<int> min_area;
    bool denoise = true;

    friend bool operator==(const SegParams&, const SegParams&) = default;

    int min_area_for(const Frame& f) const {
        if (min_area) return *min_area;
        return std::max(1, static_cast<int>(std::ceil(0.005 * static_cast<double>(f.size()))));
    }

    void validate() const {
        if (bg_tolerance < 0 || bg_tolerance > 255) throw InvalidArgumentError("bg_tolerance must be in [0, 255]");
        if (min_area && *min_area < 1) throw InvalidArgumentError("min_area must be >= 1");
    }
};

namespace detail {

inline void require_same_dims(const Frame& a, const Frame& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatchError("frame is " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                     " but background is " + std::to_string(b.width()) + "x" +
                                     std::to_string(b.height()));
}

}  // namespace detail

// Foreground mask: set where any channel differs from the background by more than `tol`.
inline BitMask subtract_background(const Frame& frame, const Frame& background, int tol) {
    detail::require_same_dims(frame, background);
    BitMask out(frame.width(), frame.height());
    const auto fp = frame.pixels();
    const auto bp = background.pixels();
    for (std::size_t i = 0; i < fp.size(); ++i) {
        const Rgb8 a = decompose_unchecked(fp[i]);
        const Rgb8 b = decompose_unchecked(bp[i]);
        const int d = std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
        out.raw(i) = d > tol ? 1 : 0;
    }
    return out;
}

inline BitMask skin_mask(const Frame& frame, const SkinRange& range) {
    BitMask out(frame.width(), frame.height());
    const auto fp = frame.pixels();
    for (std::size_t i = 0; i < fp.size(); ++i) out.raw(i) = is_skin(decompose_unchecked(fp[i]), range) ? 1 : 0;
    return out;
}

// 3x3 majority filter. Border pixels vote over the part of the window inside the mask.
inline BitMask denoise(const BitMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    BitMask out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - 1), y1 = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - 1), x1 = std::min(w - 1, x + 1);
            int set = 0;
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) set += mask.at(xx, yy);
            const int valid = (y1 - y0 + 1) * (x1 - x0 + 1);
            out.set(x, y, 2 * set > valid);
        }
    }
    return out;
}

struct Component {
    std::size_t area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    Rect bounds() const { return Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1}; }
};

// 4-connected components. Components are numbered in row-major order of their
// first pixel; `labels` holds component index + 1 per pixel, 0 for unset bits.
struct Labeling {
    std::vector<int> labels;
    std::vector<Component> components;
};

inline Labeling label_components(const BitMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> provisional(mask.size(), 0);
    std::vector<int> parent{0};

    auto find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!mask[i]) continue;
            const int left = x > 0 ? provisional[i - 1] : 0;
            const int up = y > 0 ? provisional[i - w] : 0;
            if (left == 0 && up == 0) {
                const int id = static_cast<int>(parent.size());
                parent.push_back(id);
                provisional[i] = id;
            } else if (left != 0 && up != 0) {
                provisional[i] = std::min(left, up);
                unite(left, up);
            } else {
                provisional[i] = left != 0 ? left : up;
            }
        }
    }

    // Roots are always the smallest provisional id in their set, and provisional
    // ids are allocated in scan order, so renumbering roots in increasing order
    // numbers components by their first pixel.
    std::vector<int> final_id(parent.size(), 0);
    Labeling out;
    out.labels.assign(mask.size(), 0);
    for (std::size_t p = 1; p < parent.size(); ++p) {
        if (find(static_cast<int>(p)) == static_cast<int>(p)) {
            out.components.push_back({});
            final_id[p] = static_cast<int>(out.components.size());
        }
    }
    std::vector<bool> seen(out.components.size(), false);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (provisional[i] == 0) continue;
            const int id = final_id[find(provisional[i])];
            out.labels[i] = id;
            Component& c = out.components[id - 1];
            if (!seen[id - 1]) {
                seen[id - 1] = true;
                c.min_x = c.max_x = x;
                c.min_y = c.max_y = y;
            }
            ++c.area;
            c.min_x = std::min(c.min_x, x);
            c.max_x = std::max(c.max_x, x);
            c.min_y = std::min(c.min_y, y);
            c.max_y = std::max(c.max_y, y);
        }
    }
    return out;
}

namespace detail {

// Largest component among those accepted by `keep`; ties go to the lower index.
template <typename Keep>
std::optional<Rect> largest_box(const Labeling& lab, int min_area, Keep keep) {
    const Component* best = nullptr;
    for (std::size_t k = 0; k < lab.components.size(); ++k) {
        if (!keep(k)) continue;
        const Component& c = lab.components[k];
        if (best == nullptr || c.area > best->area) best = &c;
    }
    if (best == nullptr || best->area < static_cast<std::size_t>(std::max(min_area, 0))) return std::nullopt;
    return best->bounds();
}

}  // namespace detail

// Tight box of the largest 4-connected component, or none when it is smaller than `min_area`.
inline std::optional<Rect> face_box(const BitMask& mask, int min_area) {
    return detail::largest_box(label_components(mask), min_area, [](std::size_t) { return true; });
}

// Full head-detection stage. `background` may be absent, in which case every
// pixel counts as foreground.
//
// With denoise on, the majority filter decides which components survive, but a
// surviving component keeps its full unfiltered extent (reconstruction): the
// filter would otherwise shave single-pixel tips off the face outline and the
// box would no longer be tight on the skin region.
inline std::optional<Rect> detect(const Frame& frame, const Frame* background, const SkinRange& range,
                                  const SegParams& params) {
    BitMask combined = skin_mask(frame, range);
    if (background != nullptr) combined = combined & subtract_background(frame, *background, params.bg_tolerance);
    const int min_area = params.min_area_for(frame);
    const Labeling lab = label_components(combined);
    if (!params.denoise) return detail::largest_box(lab, min_area, [](std::size_t) { return true; });

    const BitMask seeds = denoise(combined);
    std::vector<bool> survives(lab.components.size(), false);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (seeds[i] && lab.labels[i] != 0) survives[lab.labels[i] - 1] = true;
    return detail::largest_box(lab, min_area, [&](std::size_t k) { return survives[k]; });
}

inline std::optional<Rect> detect(const Frame& frame, const Frame& background, const SkinRange& range,
                                  const SegParams& params) {
    detail::require_same_dims(frame, background);
    return detect(frame, &background, range, params);
}

}  // namespace headmouse
