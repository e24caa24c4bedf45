#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavtrack/io.hpp"

namespace uavtrack {

/// Frames [from, to] (inclusive, 1-based) in which one object emits no
/// detections.
struct OcclusionWindow {
    int object = 0; // 0-based object index
    int from = 0;
    int to = 0;
};

/// Seeded synthetic scenario: constant-velocity ground truth with boundary
/// reflection, jittered detections with misses and uniform false positives,
/// unit-sphere appearance embeddings, and an optional translational camera
/// pan recorded in the GMC map. Deterministic per seed.
struct ScenarioConfig {
    std::string name = "synth";
    int objects = 3;
    int frames = 100;
    double width = 640.0;
    double height = 512.0;
    double max_speed = 1.0;        // |velocity| per axis, px/frame
    double position_jitter = 0.3;  // detection jitter std, px
    double size_jitter = 0.1;      // px
    double miss_rate = 0.0;
    double fp_rate = 0.0;          // expected false positives per frame
    std::vector<OcclusionWindow> occlusions;
    double drift_amplitude = 0.0;  // px; 0 disables camera drift
    double drift_period = 80.0;    // frames per pan cycle
    int embedding_dim = 16;
    double embedding_noise = 0.05;
    double min_width = 6.0, max_width = 26.0;
    double min_height = 6.0, max_height = 26.0;
    double min_score = 0.8, max_score = 0.99;
    std::uint64_t seed = 1;
};

/// Ground-truth trajectories in undrifted (world) coordinates, one entry per
/// object, each sized config.frames.
std::vector<std::vector<BoundingBox>> generate_trajectories(const ScenarioConfig& config);

/// Full bundle: GT, detections, embeddings and GMC map, with camera drift
/// applied to all coordinates when configured.
SequenceBundle generate(const ScenarioConfig& config);

/// Cumulative camera offset of a frame under the configured pan (zero at
/// frame 1). Exposed so tests can map drifted output back to world space.
Eigen::Vector2d drift_offset(const ScenarioConfig& config, int frame);

} // namespace uavtrack
