#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "headmouse/color.hpp"
#include "headmouse/error.hpp"
#include "headmouse/frame.hpp"

namespace headmouse {

// ---------------------------------------------------------------------------
// Binary PPM (P6, maxval 255)
// ---------------------------------------------------------------------------

namespace detail {

class PpmHeaderReader {
public:
    explicit PpmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = static_cast<unsigned char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c) != 0) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_])) != 0) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000) throw ParseError("ppm", std::string(what) + " is too large");
            ++pos_;
        }
        if (pos_ == start) throw ParseError("ppm", std::string("expected ") + what);
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::string_view bytes() const { return bytes_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Frame load_ppm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw ParseError("ppm", "bad magic (expected P6)");
    detail::PpmHeaderReader rd(bytes.substr(2));
    const long long w = rd.number("width");
    const long long h = rd.number("height");
    const long long maxval = rd.number("maxval");
    if (w <= 0 || h <= 0) throw ParseError("ppm", "dimensions must be positive");
    if (maxval != 255) throw ParseError("ppm", "unsupported maxval " + std::to_string(maxval) + " (only 255)");
    // Exactly one whitespace byte separates the header from the raster.
    if (rd.pos() >= rd.bytes().size() || std::isspace(static_cast<unsigned char>(rd.bytes()[rd.pos()])) == 0)
        throw ParseError("ppm", "missing whitespace after maxval");
    rd.advance(1);

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::string_view raster = rd.bytes().substr(rd.pos());
    if (raster.size() < 3 * n)
        throw ParseError("ppm", "short pixel data: need " + std::to_string(3 * n) + " bytes, have " +
                                    std::to_string(raster.size()));
    std::vector<PackedPixel> px(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = pack(Rgb8{static_cast<std::uint8_t>(raster[3 * i]), static_cast<std::uint8_t>(raster[3 * i + 1]),
                          static_cast<std::uint8_t>(raster[3 * i + 2])});
    }
    return Frame(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

inline std::string save_ppm(const Frame& frame) {
    std::string out = "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
    out.reserve(out.size() + 3 * frame.size());
    for (PackedPixel p : frame.pixels()) {
        const Rgb8 c = decompose_unchecked(p);
        out += static_cast<char>(c.r);
        out += static_cast<char>(c.g);
        out += static_cast<char>(c.b);
    }
    return out;
}

inline Frame read_ppm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return load_ppm(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string(), e.what());
    }
}

inline void write_ppm_file(const Frame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << save_ppm(frame);
}

// Frame from interleaved 8-bit RGB bytes (w*h*3).
inline Frame frame_from_rgb_bytes(int width, int height, std::string_view rgb) {
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (width <= 0 || height <= 0) throw InvalidArgumentError("frame dimensions must be positive");
    if (rgb.size() != 3 * n) throw InvalidArgumentError("expected " + std::to_string(3 * n) + " RGB bytes");
    std::vector<PackedPixel> px(n);
    for (std::size_t i = 0; i < n; ++i)
        px[i] = pack(Rgb8{static_cast<std::uint8_t>(rgb[3 * i]), static_cast<std::uint8_t>(rgb[3 * i + 1]),
                          static_cast<std::uint8_t>(rgb[3 * i + 2])});
    return Frame(width, height, std::move(px));
}

// ---------------------------------------------------------------------------
// Synthetic scenes: ground truth for detection
// ---------------------------------------------------------------------------

struct Ellipse {
    double cx = 0.0, cy = 0.0, rx = 1.0, ry = 1.0;

    bool contains(int x, int y) const {
        const double u = (x - cx) / rx;
        const double v = (y - cy) / ry;
        return u * u + v * v <= 1.0;
    }
};

struct Speck {
    int x = 0;
    int y = 0;
    Rgb8 color;
};

struct SynthScene {
    int width = 160;
    int height = 120;
    Rgb8 bg_color{0, 0, 255};
    Ellipse face{80.0, 60.0, 20.0, 25.0};
    Rgb8 skin_color{200, 140, 100};
    std::vector<Speck> specks;

    void validate() const {
        if (width <= 0 || height <= 0) throw InvalidArgumentError("scene dimensions must be positive");
        if (!(face.rx > 0.0 && face.ry > 0.0)) throw InvalidArgumentError("ellipse radii must be positive");
        if (face.cx - face.rx < 0.0 || face.cy - face.ry < 0.0 || face.cx + face.rx > width - 1 ||
            face.cy + face.ry > height - 1)
            throw InvalidArgumentError("ellipse leaves the frame");
        for (const auto& s : specks)
            if (s.x < 0 || s.y < 0 || s.x >= width || s.y >= height)
                throw InvalidArgumentError("speck outside the frame");
    }
};

struct RenderedScene {
    Frame frame;
    Frame background;  // the same scene with no face and no specks
    std::optional<Rect> truth;
    BitMask skin_pixels;  // ellipse membership
};

inline RenderedScene render(const SynthScene& scene) {
    scene.validate();
    RenderedScene out{Frame(scene.width, scene.height, pack(scene.bg_color)),
                      Frame(scene.width, scene.height, pack(scene.bg_color)), std::nullopt,
                      BitMask(scene.width, scene.height)};
    for (const auto& s : scene.specks) out.frame.set(s.x, s.y, s.color);
    int min_x = scene.width, min_y = scene.height, max_x = -1, max_y = -1;
    for (int y = 0; y < scene.height; ++y) {
        for (int x = 0; x < scene.width; ++x) {
            if (!scene.face.contains(x, y)) continue;
            out.frame.set(x, y, scene.skin_color);
            out.skin_pixels.set(x, y);
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x >= 0) out.truth = Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    return out;
}

inline nlohmann::json rgb_to_json(Rgb8 c) { return nlohmann::json::array({c.r, c.g, c.b}); }

inline Rgb8 rgb_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ParseError(where, "expected [r, g, b]");
    Rgb8 c;
    std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number_integer() || j[i].get<int>() < 0 || j[i].get<int>() > 255)
            throw ParseError(where, "channel must be an integer in [0, 255]");
        *ch[i] = static_cast<std::uint8_t>(j[i].get<int>());
    }
    return c;
}

// A scene plus an optional list of face centers, one frame per entry.
struct SynthAnimation {
    SynthScene scene;
    std::vector<std::pair<double, double>> path;

    SynthScene at(std::size_t i) const {
        SynthScene s = scene;
        if (i < path.size()) {
            s.face.cx = path[i].first;
            s.face.cy = path[i].second;
        }
        return s;
    }
    std::size_t frame_count() const { return path.empty() ? 1 : path.size(); }
};

inline SynthAnimation parse_scene(const nlohmann::json& j) {
    using nlohmann::json;
    if (!j.is_object()) throw ParseError("scene", "expected an object");
    auto num = [](const json& o, const char* key, const std::string& where) {
        if (!o.contains(key) || !o.at(key).is_number()) throw ParseError(where + "." + key, "expected a number");
        return o.at(key).get<double>();
    };
    SynthAnimation a;
    SynthScene& s = a.scene;
    if (j.contains("width")) s.width = static_cast<int>(num(j, "width", "scene"));
    if (j.contains("height")) s.height = static_cast<int>(num(j, "height", "scene"));
    if (j.contains("background")) s.bg_color = rgb_from_json(j.at("background"), "scene.background");
    if (j.contains("skin")) s.skin_color = rgb_from_json(j.at("skin"), "scene.skin");
    if (j.contains("face")) {
        const json& f = j.at("face");
        s.face = Ellipse{num(f, "cx", "scene.face"), num(f, "cy", "scene.face"), num(f, "rx", "scene.face"),
                         num(f, "ry", "scene.face")};
    }
    if (j.contains("specks")) {
        if (!j.at("specks").is_array()) throw ParseError("scene.specks", "expected an array");
        for (const auto& sp : j.at("specks")) {
            Speck k;
            k.x = static_cast<int>(num(sp, "x", "scene.specks"));
            k.y = static_cast<int>(num(sp, "y", "scene.specks"));
            k.color = sp.contains("color") ? rgb_from_json(sp.at("color"), "scene.specks.color") : s.skin_color;
            s.specks.push_back(k);
        }
    }
    if (j.contains("path")) {
        if (!j.at("path").is_array()) throw ParseError("scene.path", "expected an array");
        for (const auto& p : j.at("path")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ParseError("scene.path", "expected [cx, cy] pairs");
            a.path.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }
    for (std::size_t i = 0; i < a.frame_count(); ++i) {
        try {
            a.at(i).validate();
        } catch (const InvalidArgumentError& e) {
            throw ParseError("scene frame " + std::to_string(i), e.what());
        }
    }
    return a;
}

inline SynthAnimation parse_scene_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("scene", e.what());
    }
    return parse_scene(j);
}

// ---------------------------------------------------------------------------
// Frame streams
// ---------------------------------------------------------------------------

class FrameSource {
public:
    virtual ~FrameSource() = default;
    // Next frame, or nullopt at a clean end of stream.
    virtual std::optional<Frame> next() = 0;
};

// Every *.ppm file in a directory, in lexicographic filename order.
class DirectorySource : public FrameSource {
public:
    explicit DirectorySource(const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".ppm") files_.push_back(entry.path());
        std::sort(files_.begin(), files_.end());
    }

    std::optional<Frame> next() override {
        if (index_ >= files_.size()) return std::nullopt;
        const std::size_t i = index_++;
        try {
            return read_ppm_file(files_[i]);
        } catch (const Error& e) {
            throw StreamError(i, e.what());
        }
    }

    const std::vector<std::filesystem::path>& files() const { return files_; }

private:
    std::vector<std::filesystem::path> files_;
    std::size_t index_ = 0;
};

// Repeated records: width u32le, height u32le, then width*height*3 RGB bytes.
class RawStreamSource : public FrameSource {
public:
    explicit RawStreamSource(std::istream& in, std::size_t max_pixels = std::size_t{1} << 26)
        : in_(in), max_pixels_(max_pixels) {}

    std::optional<Frame> next() override {
        const std::size_t i = index_;
        unsigned char hdr[8];
        in_.read(reinterpret_cast<char*>(hdr), 8);
        const auto got = static_cast<std::size_t>(in_.gcount());
        if (got == 0) return std::nullopt;
        if (got < 8) throw StreamError(i, "truncated record header");
        auto u32 = [&](int off) {
            return std::uint32_t{hdr[off]} | (std::uint32_t{hdr[off + 1]} << 8) | (std::uint32_t{hdr[off + 2]} << 16) |
                   (std::uint32_t{hdr[off + 3]} << 24);
        };
        const std::uint32_t w = u32(0), h = u32(4);
        if (w == 0 || h == 0) throw StreamError(i, "zero frame dimension");
        const std::size_t n = std::size_t{w} * std::size_t{h};
        if (n > max_pixels_ || w > 0x7fffffffu || h > 0x7fffffffu) throw StreamError(i, "frame too large");
        std::string rgb(3 * n, '\0');
        in_.read(rgb.data(), static_cast<std::streamsize>(rgb.size()));
        if (static_cast<std::size_t>(in_.gcount()) != rgb.size())
            throw StreamError(i, "truncated pixel data (" + std::to_string(in_.gcount()) + " of " +
                                     std::to_string(rgb.size()) + " bytes)");
        ++index_;
        return frame_from_rgb_bytes(static_cast<int>(w), static_cast<int>(h), rgb);
    }

private:
    std::istream& in_;
    std::size_t max_pixels_;
    std::size_t index_ = 0;
};

inline std::string encode_raw_record(const Frame& f) {
    std::string out;
    auto put = [&](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xFF);
    };
    put(static_cast<std::uint32_t>(f.width()));
    put(static_cast<std::uint32_t>(f.height()));
    for (PackedPixel p : f.pixels()) {
        const Rgb8 c = decompose_unchecked(p);
        out += static_cast<char>(c.r);
        out += static_cast<char>(c.g);
        out += static_cast<char>(c.b);
    }
    return out;
}

class SynthSource : public FrameSource {
public:
    explicit SynthSource(SynthAnimation anim) : anim_(std::move(anim)) {}

    std::optional<Frame> next() override {
        if (index_ >= anim_.frame_count()) return std::nullopt;
        return render(anim_.at(index_++)).frame;
    }

    Frame background() const { return render(anim_.scene).background; }

private:
    SynthAnimation anim_;
    std::size_t index_ = 0;
};

// "-" reads the raw record stream from `stdin_stream`; a directory yields its
// PPM files; a *.json file is a synthetic scene animation.
inline std::unique_ptr<FrameSource> stream_frames(const std::string& descriptor, std::istream& stdin_stream) {
    if (descriptor == "-") return std::make_unique<RawStreamSource>(stdin_stream);
    const std::filesystem::path p(descriptor);
    if (std::filesystem::is_directory(p)) return std::make_unique<DirectorySource>(p);
    if (p.extension() == ".json") {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw IoError("cannot open " + descriptor);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return std::make_unique<SynthSource>(parse_scene_text(text));
    }
    throw InvalidArgumentError("unrecognized frame source \"" + descriptor + "\"");
}

inline std::vector<Frame> collect(FrameSource& src) {
    std::vector<Frame> out;
    while (auto f = src.next()) out.push_back(std::move(*f));
    return out;
}

}  // namespace headmouse
