#include <gtest/gtest.h>

#include <random>

#include "headmouse/calibration.hpp"
#include "headmouse/color.hpp"
#include "support.hpp"

using namespace headmouse;

TEST(Color, DecomposeExamples) {
    EXPECT_EQ(decompose(0), (Rgb8{0, 0, 0}));
    EXPECT_EQ(decompose(255), (Rgb8{255, 0, 0}));
    EXPECT_EQ(decompose(16'711'680), (Rgb8{0, 0, 255}));
}

TEST(Color, DecomposeRejectsOutOfRange) {
    EXPECT_THROW(decompose(1u << 24), InvalidPixelError);
    EXPECT_NO_THROW(decompose(kMaxPackedPixel));
}

TEST(Color, PackExamples) {
    EXPECT_EQ(pack({0, 0, 0}), 0u);
    EXPECT_EQ(pack({255, 0, 0}), 255u);
    EXPECT_EQ(pack({1, 1, 1}), 65'793u);
}

TEST(Color, RoundTripExhaustive) {
    for (PackedPixel c = 0; c <= kMaxPackedPixel; ++c) {
        const Rgb8 rgb = decompose_unchecked(c);
        ASSERT_EQ(pack(rgb), c);
    }
}

TEST(Color, NormalizeExamples) {
    const NormRgb red = normalize({255, 0, 0});
    EXPECT_DOUBLE_EQ(red.r, 1.0);
    EXPECT_DOUBLE_EQ(red.g, 0.0);
    EXPECT_DOUBLE_EQ(red.b, 0.0);
    const NormRgb grey = normalize({100, 100, 100});
    EXPECT_NEAR(grey.r, 1.0 / 3, 1e-15);
    EXPECT_NEAR(grey.g, 1.0 / 3, 1e-15);
    EXPECT_NEAR(grey.b, 1.0 / 3, 1e-15);
    const NormRgb black = normalize({0, 0, 0});
    EXPECT_EQ(black.r + black.g + black.b, 0.0);
}

TEST(Color, NormalizedChannelsSumToOne) {
    std::mt19937 rng(7);
    for (int i = 0; i < 100'000; ++i) {
        const Rgb8 c = hmtest::random_rgb(rng);
        if (brightness(c) == 0) continue;
        const NormRgb n = normalize(c);
        ASSERT_NEAR(n.r + n.g + n.b, 1.0, 1e-9);
    }
}

TEST(Color, ScalingInvariance) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> ch(0, 63);
    for (int i = 0; i < 20'000; ++i) {
        const Rgb8 c{static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
                     static_cast<std::uint8_t>(ch(rng))};
        if (brightness(c) == 0) continue;
        for (int k = 2; k <= 4; ++k) {
            const Rgb8 s{static_cast<std::uint8_t>(c.r * k), static_cast<std::uint8_t>(c.g * k),
                         static_cast<std::uint8_t>(c.b * k)};
            const NormRgb a = normalize(c), b = normalize(s);
            ASSERT_NEAR(a.r, b.r, 1e-12);
            ASSERT_NEAR(a.g, b.g, 1e-12);
        }
    }
}

TEST(Color, IsSkinExamples) {
    const SkinRange def = default_skin_range();
    // (150, 90, 60): sum 300, r = 0.5, g = 0.3, inside the fitted box.
    EXPECT_GE(0.5, def.r_min);
    EXPECT_LE(0.5, def.r_max);
    EXPECT_GE(0.3, def.g_min);
    EXPECT_LE(0.3, def.g_max);
    EXPECT_TRUE(is_skin({150, 90, 60}, def));
    EXPECT_FALSE(is_skin({0, 0, 0}, def));
    EXPECT_FALSE(is_skin({0, 255, 0}, def));
    EXPECT_FALSE(is_skin({0, 0, 255}, def));
}

TEST(Color, BlackIsNeverSkin) {
    EXPECT_FALSE(is_skin({0, 0, 0}, SkinRange{0.0, 1.0, 0.0, 1.0, 0}));
}

TEST(Color, BrightnessFloor) {
    SkinRange r = default_skin_range();
    // r = .5, g = .3 at every scale; only the floor decides.
    EXPECT_FALSE(is_skin({15, 9, 6}, r));   // sum 30
    EXPECT_TRUE(is_skin({30, 18, 12}, r));  // sum 60
}

TEST(Color, MonotoneUnderWidening) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> bright(0, 300);
    for (int i = 0; i < 2'000; ++i) {
        SkinRange a;
        a.r_min = u(rng) * 0.5;
        a.r_max = a.r_min + u(rng) * (1.0 - a.r_min);
        a.g_min = u(rng) * 0.5;
        a.g_max = a.g_min + u(rng) * (1.0 - a.g_min);
        a.brightness_min = bright(rng);
        SkinRange b = a;
        b.r_min = a.r_min * u(rng);
        b.g_min = a.g_min * u(rng);
        b.r_max = a.r_max + (1.0 - a.r_max) * u(rng);
        b.g_max = a.g_max + (1.0 - a.g_max) * u(rng);
        b.brightness_min = static_cast<int>(a.brightness_min * u(rng));
        for (int k = 0; k < 50; ++k) {
            const Rgb8 c = hmtest::random_rgb(rng);
            if (is_skin(c, a)) {
                ASSERT_TRUE(is_skin(c, b));
            }
        }
    }
}

TEST(Color, SkinRangeValidation) {
    EXPECT_NO_THROW(default_skin_range().validate());
    EXPECT_THROW((SkinRange{0.6, 0.5, 0.0, 1.0, 0}.validate()), InvalidArgumentError);
    EXPECT_THROW((SkinRange{0.0, 1.5, 0.0, 1.0, 0}.validate()), InvalidArgumentError);
    EXPECT_THROW((SkinRange{0.0, 1.0, 0.0, 1.0, 800}.validate()), InvalidArgumentError);
}

// The shipped constant must be what the calibration produces on the bundled swatches.
TEST(Calibration, DefaultRangeMatchesBundledSwatches) {
    const auto px = load_swatches(hmtest::data_dir() + "/skin_swatches");
    ASSERT_GE(px.size(), 200u);
    const SkinRange fitted = fit_skin_range(px);
    const SkinRange shipped = default_skin_range();
    EXPECT_DOUBLE_EQ(fitted.r_min, shipped.r_min);
    EXPECT_DOUBLE_EQ(fitted.r_max, shipped.r_max);
    EXPECT_DOUBLE_EQ(fitted.g_min, shipped.g_min);
    EXPECT_DOUBLE_EQ(fitted.g_max, shipped.g_max);
    EXPECT_EQ(fitted.brightness_min, shipped.brightness_min);
    for (const Rgb8& c : px) EXPECT_TRUE(is_skin(c, shipped));
}

TEST(Calibration, FitsTightBoxPlusPad) {
    const std::vector<Rgb8> px{{200, 100, 100}, {100, 100, 50}};
    // r: 0.5 and 0.4; g: 0.25 and 0.4.
    const SkinRange r = fit_skin_range(px, 0.02, 10);
    EXPECT_NEAR(r.r_min, 0.38, 1e-12);
    EXPECT_NEAR(r.r_max, 0.52, 1e-12);
    EXPECT_NEAR(r.g_min, 0.23, 1e-12);
    EXPECT_NEAR(r.g_max, 0.42, 1e-12);
    EXPECT_EQ(r.brightness_min, 10);
}

TEST(Calibration, ClipsToUnitAndRejectsEmpty) {
    const std::vector<Rgb8> red{{255, 0, 0}};
    const SkinRange r = fit_skin_range(red, 0.05);
    EXPECT_EQ(r.r_max, 1.0);
    EXPECT_EQ(r.g_min, 0.0);
    const std::vector<Rgb8> black{{0, 0, 0}};
    EXPECT_THROW(fit_skin_range(black), InvalidArgumentError);
}
