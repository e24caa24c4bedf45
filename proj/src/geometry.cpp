#include "uavtrack/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace uavtrack {

bool BoundingBox::valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) &&
           w >= 0.0 && h >= 0.0;
}

double area(const BoundingBox& b) {
    return b.w * b.h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(a.x, b.x);
    const double iy = std::max(a.y, b.y);
    const double ix2 = std::min(a.right(), b.right());
    const double iy2 = std::min(a.bottom(), b.bottom());

    const double iw = std::max(0.0, ix2 - ix);
    const double ih = std::max(0.0, iy2 - iy);
    const double inter = iw * ih;

    const double uni = area(a) + area(b) - inter;
    if (uni <= 0.0) return 0.0;
    // rounding can push the ratio a hair past 1 for near-identical boxes
    return std::min(1.0, inter / uni);
}

std::vector<Detection> filter_min_area(const std::vector<Detection>& dets, double min_area) {
    std::vector<Detection> kept;
    kept.reserve(dets.size());
    for (const auto& d : dets) {
        if (area(d.box) > min_area) kept.push_back(d);
    }
    return kept;
}

BoundingBox clip_to_frame(const BoundingBox& b, double width, double height) {
    const double x1 = std::clamp(b.x, 0.0, width);
    const double y1 = std::clamp(b.y, 0.0, height);
    const double x2 = std::clamp(b.right(), 0.0, width);
    const double y2 = std::clamp(b.bottom(), 0.0, height);
    return {x1, y1, std::max(0.0, x2 - x1), std::max(0.0, y2 - y1)};
}

} // namespace uavtrack
