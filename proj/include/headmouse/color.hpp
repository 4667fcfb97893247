#pragma once

#include <cstdint>
#include <string>

#include "headmouse/error.hpp"

namespace headmouse {

// 24-bit packed color, red in the low byte: c = R + 256 G + 65536 B.
using PackedPixel = std::uint32_t;

inline constexpr PackedPixel kMaxPackedPixel = 0xFFFFFFu;  // 16 777 215

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend constexpr bool operator==(const Rgb8&, const Rgb8&) = default;
};

// Chromaticity coordinates. Sum to 1 except for black, which maps to (0, 0, 0).
struct NormRgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

// Axis-aligned box in normalized (r, g) space plus a floor on R+G+B.
struct SkinRange {
    double r_min = 0.0;
    double r_max = 1.0;
    double g_min = 0.0;
    double g_max = 1.0;
    int brightness_min = 0;

    friend bool operator==(const SkinRange&, const SkinRange&) = default;

    // Throws InvalidArgumentError when bounds are inverted or leave [0, 1].
    void validate() const {
        auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!(in_unit(r_min) && in_unit(r_max) && in_unit(g_min) && in_unit(g_max)))
            throw InvalidArgumentError("skin range bounds must lie in [0, 1]");
        if (r_min > r_max || g_min > g_max)
            throw InvalidArgumentError("skin range has min > max");
        if (brightness_min < 0 || brightness_min > 765)
            throw InvalidArgumentError("brightness_min must be in [0, 765]");
    }
};

// Default range, fitted by `headmouse calibrate-skin --swatches data/skin_swatches`
// (min/max over 240 swatch pixels, padded by 0.02). Bump the version whenever
// the swatches or the fitting rule change.
inline constexpr int kDefaultSkinRangeVersion = 1;
inline constexpr double kSkinRangePad = 0.02;
inline constexpr int kDefaultBrightnessMin = 60;

inline constexpr SkinRange default_skin_range() {
    return SkinRange{
        .r_min = 0.3517201166180758,
        .r_max = 0.5683870967741935,
        .g_min = 0.2364102564102564,
        .g_max = 0.3718930957683742,
        .brightness_min = kDefaultBrightnessMin,
    };
}

constexpr Rgb8 decompose_unchecked(PackedPixel c) noexcept {
    return Rgb8{
        static_cast<std::uint8_t>(c % 256),
        static_cast<std::uint8_t>((c / 256) % 256),
        static_cast<std::uint8_t>((c / 256 / 256) % 256),
    };
}

inline Rgb8 decompose(PackedPixel c) {
    if (c > kMaxPackedPixel)
        throw InvalidPixelError("packed pixel " + std::to_string(c) + " exceeds 24 bits");
    return decompose_unchecked(c);
}

constexpr PackedPixel pack(Rgb8 rgb) noexcept {
    return PackedPixel{rgb.r} + 256u * PackedPixel{rgb.g} + 65536u * PackedPixel{rgb.b};
}

constexpr int brightness(Rgb8 rgb) noexcept { return int{rgb.r} + int{rgb.g} + int{rgb.b}; }

inline NormRgb normalize(Rgb8 rgb) noexcept {
    const int sum = brightness(rgb);
    if (sum == 0) return {};
    const double s = static_cast<double>(sum);
    return NormRgb{rgb.r / s, rgb.g / s, rgb.b / s};
}

inline bool is_skin(Rgb8 rgb, const SkinRange& range) noexcept {
    const int sum = brightness(rgb);
    if (sum < range.brightness_min || sum == 0) return false;
    const NormRgb n = normalize(rgb);
    return n.r >= range.r_min && n.r <= range.r_max && n.g >= range.g_min && n.g <= range.g_max;
}

}  // namespace headmouse
