#pragma once

#include <algorithm>
#include <filesystem>
#include <span>
#include <vector>

#include "headmouse/color.hpp"
#include "headmouse/error.hpp"
#include "headmouse/ingest.hpp"

namespace headmouse {

// Smallest normalized (r, g) box holding every swatch pixel, widened by `pad`
// on each side and clipped to [0, 1].
inline SkinRange fit_skin_range(std::span<const Rgb8> swatch, double pad = kSkinRangePad,
                                int brightness_min = kDefaultBrightnessMin) {
    SkinRange out{1.0, 0.0, 1.0, 0.0, brightness_min};
    std::size_t used = 0;
    for (const Rgb8& px : swatch) {
        if (brightness(px) == 0) continue;
        const NormRgb n = normalize(px);
        out.r_min = std::min(out.r_min, n.r);
        out.r_max = std::max(out.r_max, n.r);
        out.g_min = std::min(out.g_min, n.g);
        out.g_max = std::max(out.g_max, n.g);
        ++used;
    }
    if (used == 0) throw InvalidArgumentError("no non-black swatch pixels to fit");
    out.r_min = std::max(0.0, out.r_min - pad);
    out.g_min = std::max(0.0, out.g_min - pad);
    out.r_max = std::min(1.0, out.r_max + pad);
    out.g_max = std::min(1.0, out.g_max + pad);
    out.validate();
    return out;
}

// Every pixel of every *.ppm under `dir`, files in name order.
inline std::vector<Rgb8> load_swatches(const std::filesystem::path& dir) {
    DirectorySource src(dir);
    std::vector<Rgb8> px;
    while (auto f = src.next())
        for (PackedPixel p : f->pixels()) px.push_back(decompose_unchecked(p));
    return px;
}

}  // namespace headmouse
