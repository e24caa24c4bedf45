#pragma once

#include <optional>
#include <vector>

#include "uavtrack/geometry.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

enum class SotSource { Online, LostPrediction, LastKnown };

/// One single-object report per frame; the strategy never abstains.
struct SotRecord {
    int frame = 0;
    BoundingBox box;
    SotSource source = SotSource::LastKnown;
    int reported_id = 0;
};

/// Tracker outputs of one frame, as consumed by sot_select.
struct FrameTracks {
    int frame = 0;
    std::vector<Track> online;
    std::vector<Track> lost;
};

struct SotOptions {
    int track_buffer = 30;
    /// Seed for the last-known chain before any target appears. When absent,
    /// a 1x1 box at the frame center is used.
    std::optional<BoundingBox> initial_box;
    double frame_width = 640.0;
    double frame_height = 512.0;
};

/// Single-object selection over per-frame tracker outputs, in priority
/// order: the online target with the highest confidence (ties to the lower
/// ID); else the previously reported ID among the lost targets, for at most
/// track_buffer frames since its last match, at its Kalman-predicted box;
/// else the last reported location, repeated until an online target appears.
std::vector<SotRecord> sot_select(const std::vector<FrameTracks>& frames,
                                  const SotOptions& options = {});

} // namespace uavtrack
