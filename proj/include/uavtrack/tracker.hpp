#pragma once

#include <optional>
#include <vector>

#include "uavtrack/assoc.hpp"
#include "uavtrack/cmc.hpp"
#include "uavtrack/geometry.hpp"
#include "uavtrack/kalman.hpp"

namespace uavtrack {

/// Lifecycle of a track. New tracks are spawned but not yet confirmed by a
/// second match; only Tracked tracks appear in the online output.
/// Transitions: New -> {Tracked, Removed}, Tracked -> {Tracked, Lost},
/// Lost -> {Tracked, Removed}.
enum class TrackState { New, Tracked, Lost, Removed };

/// Snapshot of one identity-bearing trajectory.
struct Track {
    int id = 0;
    TrackState state = TrackState::New;
    KalmanState kstate;
    std::optional<EmbeddingVector> feature; // unit-norm, exponentially smoothed
    double score = 0.0;                     // last matched confidence
    int start_frame = 0;
    int last_frame = 0; // last frame with a successful match

    BoundingBox box() const { return kstate.box(); }
};

struct TrackerConfig {
    double track_high_thresh = 0.6;
    double track_low_thresh = 0.1;
    double new_track_thresh = 0.7;
    double match_thresh = 0.8;
    double second_match_thresh = 0.5;
    int track_buffer = 30;      // frames a lost track is retained
    double min_box_area = 10.0; // px^2, online output filter
    double proximity_thresh = 0.5;
    double appearance_thresh = 0.25;
    double ema_alpha = 0.9;
    bool with_reid = false;
    bool with_cmc = false;
    double kalman_position_weight = 1.0 / 20.0;
    double kalman_velocity_weight = 1.0 / 160.0;
};

/// BoT-SORT style per-frame tracking state machine: two-stage association
/// over high/low confidence detections, chi-square motion gating, track
/// buffer retention, appearance smoothing. One instance owns one sequence;
/// step() must be called with strictly increasing frame indices.
class Tracker {
public:
    explicit Tracker(TrackerConfig config = {});

    struct StepOutput {
        std::vector<Track> online; // Tracked, box area above min_box_area
        std::vector<Track> lost;   // current Lost tracks at their predicted boxes
    };

    /// Advances the tracker by one frame. embeddings must be non-null exactly
    /// when with_reid is set; detections reference it via embedding_ref.
    /// affine, when present, warps every live track into this frame's
    /// coordinates before association.
    StepOutput step(int frame,
                    const std::vector<Detection>& detections,
                    const std::vector<EmbeddingVector>* embeddings = nullptr,
                    const std::optional<AffineTransform>& affine = std::nullopt);

    /// Drops all tracks and restarts the ID counter at 1.
    void reset();

    const TrackerConfig& config() const { return config_; }

private:
    struct Entry {
        int id = 0;
        TrackState state = TrackState::New;
        KalmanState kstate;
        std::optional<EmbeddingVector> feature;
        double score = 0.0;
        int start_frame = 0;
        int last_frame = 0;
    };

    void apply_match(Entry& entry, const Detection& det,
                     const std::vector<EmbeddingVector>* embeddings, int frame);
    CostMatrix first_stage_cost(const std::vector<Entry*>& tracks,
                                const std::vector<Detection>& dets,
                                const std::vector<EmbeddingVector>* embeddings,
                                bool gate) const;
    Track snapshot(const Entry& entry) const;

    TrackerConfig config_;
    KalmanFilter filter_;
    std::vector<Entry> tracks_;
    int next_id_ = 1;
    int last_seen_frame_ = 0;
    bool started_ = false;
};

} // namespace uavtrack
