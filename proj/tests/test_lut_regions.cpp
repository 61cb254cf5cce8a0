#include <gtest/gtest.h>

#include <random>

#include "stereo_avoid/depth_lut.hpp"
#include "stereo_avoid/errors.hpp"
#include "stereo_avoid/regions.hpp"
#include "support.hpp"

using namespace stereo_avoid;

TEST(DepthLut, IdentityIsIdentity) {
    const DepthLUT lut;
    EXPECT_TRUE(lut.is_identity());
    for (double z : {0.01, 0.5, 3.0, 77.0}) EXPECT_EQ(lut.refine(z), z);
    EXPECT_THROW(lut.refine(0.0), InvalidDepthError);
}

TEST(DepthLut, PiecewiseLinearWithClamping) {
    const auto lut = DepthLUT::build({{2.0, 2.2}, {1.0, 1.0}, {4.0, 4.0}});
    ASSERT_EQ(lut.entries().front().computed_m, 1.0);  // sorted
    EXPECT_DOUBLE_EQ(lut.refine(1.0), 1.0);
    EXPECT_DOUBLE_EQ(lut.refine(1.5), 1.6);
    EXPECT_DOUBLE_EQ(lut.refine(3.0), 3.1);
    EXPECT_DOUBLE_EQ(lut.refine(0.2), 1.0);
    EXPECT_DOUBLE_EQ(lut.refine(9.0), 4.0);
}

TEST(DepthLut, MonotoneProperty) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> step(0.05, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<LutEntry> es;
        double c = 0.2, tr = 0.2;
        for (int k = 0; k < 6; ++k) es.push_back({c += step(rng), tr += step(rng)});
        const auto lut = DepthLUT::build(es);
        double prev = 0.0;
        for (double z = 0.05; z < 12.0; z += 0.01) {
            const double r = lut.refine(z);
            ASSERT_GE(r, prev);
            prev = r;
        }
    }
}

TEST(DepthLut, BuildRejectsBadTables) {
    EXPECT_THROW(DepthLUT::build({{1.0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(DepthLUT::build({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
    EXPECT_THROW(DepthLUT::build({{1.0, 2.0}, {2.0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(DepthLUT::build({{-1.0, 1.0}, {2.0, 2.0}}), std::invalid_argument);
}

TEST(DepthLut, CsvRoundTrip) {
    const auto lut = DepthLUT::build({{0.9, 1.0}, {1.1, 1.2}, {2.7, 3.0}, {1.0 / 3.0, 0.3}});
    const auto text = encode_lut_csv(lut);
    const auto back = parse_lut_csv(text);
    EXPECT_EQ(back.entries(), lut.entries());
    EXPECT_EQ(encode_lut_csv(back), text);
}

TEST(DepthLut, CsvErrors) {
    EXPECT_THROW(parse_lut_csv("a,b\n1,1\n2,2\n"), ParseError);
    EXPECT_THROW(parse_lut_csv("computed_m,true_m\n1,x\n2,2\n"), ParseError);
    EXPECT_THROW(parse_lut_csv("computed_m,true_m\n1,1\n"), std::invalid_argument);
}

TEST(DepthLut, RefineMapKeepsInvalid) {
    DepthMap d(2, 1);
    d.at(0, 0) = 2.0f;
    const auto lut = DepthLUT::build({{1.0, 2.0}, {3.0, 6.0}});
    const auto r = refine_depth_map(d, lut);
    EXPECT_FLOAT_EQ(r.at(0, 0), 4.0f);
    EXPECT_TRUE(std::isnan(r.at(1, 0)));
}

TEST(Regions, CenterSizing) {
    EXPECT_EQ(center_region_px(450.0, 0.5, 1.5), 150);
    EXPECT_EQ(center_region_px(900.0, 0.5, 1.5), 300);
    EXPECT_THROW(center_region_px(0.0, 0.5, 1.5), std::invalid_argument);
}

TEST(Regions, DefaultGridLayout) {
    const auto g = make_grid(640, 360, 150);
    EXPECT_EQ(g.x_lo, 245);
    EXPECT_EQ(g.x_hi, 395);
    EXPECT_EQ(g.y_lo, 105);
    EXPECT_EQ(g.y_hi, 255);
    EXPECT_EQ(g.rect(Region::center), (PixelRect{245, 395, 105, 255}));
    EXPECT_EQ(g.rect(Region::up_left), (PixelRect{0, 245, 0, 105}));
    EXPECT_EQ(g.rect(Region::down_right), (PixelRect{395, 640, 255, 360}));
    EXPECT_EQ(g.region_of(0, 359), Region::down_left);
    EXPECT_EQ(g.region_of(320, 0), Region::up);
    EXPECT_EQ(g.region_of(639, 180), Region::right);
    EXPECT_THROW(make_grid(640, 360, 359), std::invalid_argument);
}

TEST(Regions, RectanglesPartitionImage) {
    const auto g = make_grid(101, 77, 31);
    int total = 0;
    for (Region r : kAllRegions) total += g.rect(r).area();
    EXPECT_EQ(total, 101 * 77);
    for (int y = 0; y < 77; ++y)
        for (int x = 0; x < 101; ++x) {
            int n = 0;
            for (Region r : kAllRegions) n += g.rect(r).contains(x, y);
            ASSERT_EQ(n, 1);
            ASSERT_TRUE(g.rect(g.region_of(x, y)).contains(x, y));
        }
}

TEST(Regions, NamesRoundTrip) {
    for (Region r : kAllRegions) EXPECT_EQ(region_from_name(region_name(r)), r);
    EXPECT_THROW(region_from_name("middle"), std::invalid_argument);
}

TEST(Regions, EmptyRegionsReportSentinel) {
    const auto g = make_grid(64, 48, 16);
    const auto d = region_min_depths(DepthMap(64, 48), g);
    for (Region r : kAllRegions) EXPECT_EQ(d[r], kFarSentinelM);
}

TEST(Regions, MatchesBruteForceOnRandomMaps) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<float> z(0.05f, 20.0f);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const int w = 20 + static_cast<int>(rng() % 80), h = 20 + static_cast<int>(rng() % 60);
        const auto g = make_grid(w, h, 1 + static_cast<int>(rng() % (std::min(w, h) - 3)));
        const double p_invalid = frac(rng);
        DepthMap d(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (frac(rng) >= p_invalid) d.at(x, y) = z(rng);
        EXPECT_EQ(region_min_depths(d, g).values, testsupport::brute_region_mins(d, g).values);
    }
}

TEST(Regions, MonotoneUnderPointwiseDecrease) {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<float> z(0.5f, 10.0f);
    const auto g = make_grid(60, 40, 14);
    DepthMap d(60, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 60; ++x) d.at(x, y) = z(rng);
    DepthMap e = d;
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 60; ++x) e.at(x, y) *= 0.8f;
    const auto a = region_min_depths(d, g), b = region_min_depths(e, g);
    for (Region r : kAllRegions) EXPECT_LE(b[r], a[r]);
}
