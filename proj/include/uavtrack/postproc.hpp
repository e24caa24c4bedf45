#pragma once

#include <vector>

#include "uavtrack/geometry.hpp"

namespace uavtrack {

struct TrackletPoint {
    int frame = 0;
    BoundingBox box;
    double score = 1.0;
};

/// One identity's observations, frames strictly increasing.
struct Tracklet {
    int id = 0;
    std::vector<TrackletPoint> points;
};

/// Fills internal gaps of 2..max_gap frames with componentwise linear
/// interpolation over x, y, w, h; larger gaps are left untouched and
/// endpoints are never extrapolated. Interpolated points carry the mean of
/// the bracketing scores. Existing observations pass through unchanged.
std::vector<Tracklet> interpolate(const std::vector<Tracklet>& tracklets, int max_gap = 20);

} // namespace uavtrack
