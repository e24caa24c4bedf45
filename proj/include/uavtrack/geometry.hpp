#pragma once

#include <optional>
#include <vector>

namespace uavtrack {

/// Axis-aligned box, top-left corner + size, pixel units. Sub-pixel
/// coordinates are allowed; w and h are non-negative for a valid box.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }

    bool valid() const;

    bool operator==(const BoundingBox&) const = default;
};

/// Detector output for one frame: box, confidence, and an optional index
/// into an externally supplied embedding table.
struct Detection {
    BoundingBox box;
    double score = 0.0;
    std::optional<int> embedding_ref;
};

double area(const BoundingBox& b);

/// Intersection over union. Degenerate boxes (zero union area) yield 0.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Keeps detections whose box area is strictly greater than min_area,
/// preserving input order.
std::vector<Detection> filter_min_area(const std::vector<Detection>& dets, double min_area);

/// Clips the box to [0,width] x [0,height]. A box entirely outside collapses
/// to a zero-size box on the frame border.
BoundingBox clip_to_frame(const BoundingBox& b, double width, double height);

} // namespace uavtrack
