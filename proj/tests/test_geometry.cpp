#include <gtest/gtest.h>

#include "uavtrack/geometry.hpp"
#include "uavtrack/rng.hpp"

using namespace uavtrack;

namespace {

// Oracle: rasterize both boxes on an integer grid and count cells. Only
// valid for integer-coordinate boxes; used to cross-check the analytic IoU.
double raster_iou(const BoundingBox& a, const BoundingBox& b) {
    const int x0 = static_cast<int>(std::min(a.x, b.x));
    const int y0 = static_cast<int>(std::min(a.y, b.y));
    const int x1 = static_cast<int>(std::max(a.right(), b.right()));
    const int y1 = static_cast<int>(std::max(a.bottom(), b.bottom()));

    long long inter = 0, uni = 0;
    for (int x = x0; x < x1; ++x) {
        for (int y = y0; y < y1; ++y) {
            const double cx = x + 0.5, cy = y + 0.5;
            const bool in_a = cx > a.x && cx < a.right() && cy > a.y && cy < a.bottom();
            const bool in_b = cx > b.x && cx < b.right() && cy > b.y && cy < b.bottom();
            if (in_a && in_b) ++inter;
            if (in_a || in_b) ++uni;
        }
    }
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

BoundingBox random_int_box(SplitMix64& rng) {
    return {static_cast<double>(rng.next_below(60)), static_cast<double>(rng.next_below(60)),
            static_cast<double>(rng.next_below(50)), static_cast<double>(rng.next_below(50))};
}

} // namespace

TEST(Iou, IdenticalBoxes) {
    const BoundingBox b{0, 0, 10, 10};
    EXPECT_DOUBLE_EQ(iou(b, b), 1.0);
}

TEST(Iou, DisjointBoxes) {
    EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {5, 5, 2, 2}), 0.0);
}

TEST(Iou, PartialOverlap) {
    // intersection 2, union 6 on the integer grid
    EXPECT_NEAR(iou({0, 0, 2, 2}, {1, 0, 2, 2}), 1.0 / 3.0, 1e-15);
}

TEST(Iou, DegenerateBoxesYieldZero) {
    EXPECT_DOUBLE_EQ(iou({0, 0, 0, 0}, {0, 0, 0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(iou({3, 3, 0, 5}, {3, 3, 2, 2}), 0.0);
}

TEST(Iou, MatchesRasterOracleOnIntegerBoxes) {
    SplitMix64 rng(42);
    for (int i = 0; i < 500; ++i) {
        const BoundingBox a = random_int_box(rng);
        const BoundingBox b = random_int_box(rng);
        EXPECT_NEAR(iou(a, b), raster_iou(a, b), 1e-9)
            << "a=(" << a.x << "," << a.y << "," << a.w << "," << a.h << ") b=(" << b.x << ","
            << b.y << "," << b.w << "," << b.h << ")";
    }
}

TEST(Iou, SymmetricAndBounded) {
    SplitMix64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const BoundingBox a{rng.next_range(0, 100), rng.next_range(0, 100), rng.next_range(0, 40),
                            rng.next_range(0, 40)};
        const BoundingBox b{rng.next_range(0, 100), rng.next_range(0, 100), rng.next_range(0, 40),
                            rng.next_range(0, 40)};
        const double ab = iou(a, b);
        EXPECT_DOUBLE_EQ(ab, iou(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        if (area(a) > 0.0) EXPECT_NEAR(iou(a, a), 1.0, 1e-12);
    }
}

TEST(Area, Basics) {
    EXPECT_DOUBLE_EQ(area({0, 0, 4, 5}), 20.0);
    EXPECT_DOUBLE_EQ(area({0, 0, 0, 7}), 0.0);
    EXPECT_DOUBLE_EQ(area({3, 9, 2, 2}), 4.0); // position-independent
}

TEST(FilterMinArea, StrictInequality) {
    const std::vector<Detection> dets{{{0, 0, 3, 3}, 0.9, {}}, {{0, 0, 4, 4}, 0.8, {}}};
    const auto kept = filter_min_area(dets, 10.0);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_DOUBLE_EQ(area(kept[0].box), 16.0);

    // boundary: area exactly equal to the threshold is dropped
    const std::vector<Detection> boundary{{{0, 0, 2, 2}, 0.9, {}}, {{0, 0, 3, 3}, 0.8, {}}};
    const auto kept2 = filter_min_area(boundary, 4.0);
    ASSERT_EQ(kept2.size(), 1u);
    EXPECT_DOUBLE_EQ(area(kept2[0].box), 9.0);
}

TEST(FilterMinArea, EmptyInput) {
    EXPECT_TRUE(filter_min_area({}, 5.0).empty());
}

TEST(FilterMinArea, ZeroThresholdRemovesOnlyZeroArea) {
    const std::vector<Detection> dets{
        {{0, 0, 0, 5}, 0.9, {}}, {{0, 0, 1, 1}, 0.8, {}}, {{0, 0, 5, 0}, 0.7, {}}};
    const auto kept = filter_min_area(dets, 0.0);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_DOUBLE_EQ(kept[0].score, 0.8);
}

TEST(FilterMinArea, PreservesOrder) {
    std::vector<Detection> dets;
    SplitMix64 rng(3);
    for (int i = 0; i < 50; ++i) {
        dets.push_back({{0, 0, rng.next_range(1, 10), rng.next_range(1, 10)},
                        static_cast<double>(i) / 50.0,
                        {}});
    }
    const auto kept = filter_min_area(dets, 25.0);
    for (std::size_t i = 1; i < kept.size(); ++i) {
        EXPECT_LT(kept[i - 1].score, kept[i].score);
    }
}

TEST(ClipToFrame, ClampsToBounds) {
    const BoundingBox b = clip_to_frame({-5, 10, 20, 30}, 640, 512);
    EXPECT_DOUBLE_EQ(b.x, 0.0);
    EXPECT_DOUBLE_EQ(b.w, 15.0);
    EXPECT_DOUBLE_EQ(b.y, 10.0);
    EXPECT_DOUBLE_EQ(b.h, 30.0);

    const BoundingBox outside = clip_to_frame({700, 600, 10, 10}, 640, 512);
    EXPECT_DOUBLE_EQ(area(outside), 0.0);
}
