#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "headmouse/color.hpp"
#include "headmouse/error.hpp"

namespace headmouse {

// Row-major image of packed pixels.
class Frame {
public:
    Frame() = default;

    Frame(int width, int height, PackedPixel fill = 0) : width_(width), height_(height) {
        check_dims(width, height);
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
        if (fill > kMaxPackedPixel) throw InvalidPixelError("fill pixel exceeds 24 bits");
    }

    Frame(int width, int height, std::vector<PackedPixel> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        check_dims(width, height);
        if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw DimensionMismatchError("pixel count does not match " + std::to_string(width) + "x" +
                                         std::to_string(height));
        for (PackedPixel p : pixels_)
            if (p > kMaxPackedPixel) throw InvalidPixelError("pixel exceeds 24 bits");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    PackedPixel at(int x, int y) const { return pixels_[index(x, y)]; }
    Rgb8 rgb(int x, int y) const { return decompose_unchecked(at(x, y)); }

    void set(int x, int y, PackedPixel c) {
        if (c > kMaxPackedPixel) throw InvalidPixelError("pixel exceeds 24 bits");
        pixels_[index(x, y)] = c;
    }
    void set(int x, int y, Rgb8 c) { pixels_[index(x, y)] = pack(c); }

    std::span<const PackedPixel> pixels() const noexcept { return pixels_; }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    static void check_dims(int w, int h) {
        if (w <= 0 || h <= 0) throw InvalidArgumentError("frame dimensions must be positive");
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<PackedPixel> pixels_;
};

// Row-major boolean mask with the dimensions of its source frame.
class BitMask {
public:
    BitMask() = default;
    BitMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {
        if (width <= 0 || height <= 0) throw InvalidArgumentError("mask dimensions must be positive");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    std::uint8_t& raw(std::size_t i) { return bits_[i]; }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

    BitMask operator&(const BitMask& other) const {
        if (width_ != other.width_ || height_ != other.height_)
            throw DimensionMismatchError("mask dimensions differ");
        BitMask out(width_, height_);
        for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
        return out;
    }

    friend bool operator==(const BitMask&, const BitMask&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Top-left corner plus extent, in pixels.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    double center_x() const noexcept { return x + w / 2.0; }
    double center_y() const noexcept { return y + h / 2.0; }

    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

inline std::string to_string(const Rect& r) {
    return "Rect(" + std::to_string(r.x) + ", " + std::to_string(r.y) + ", " + std::to_string(r.w) + ", " +
           std::to_string(r.h) + ")";
}

}  // namespace headmouse
