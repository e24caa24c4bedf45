#include "uavtrack/tracker.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace uavtrack {

namespace {
// Match threshold for confirming a New track against leftover first-stage
// detections, as in the reference tracker.
constexpr double kConfirmMatchThresh = 0.7;
} // namespace

Tracker::Tracker(TrackerConfig config)
    : config_(config),
      filter_(KalmanFilter::Noise{config.kalman_position_weight, config.kalman_velocity_weight}) {
    if (config_.track_buffer < 1) {
        throw std::invalid_argument("track_buffer must be >= 1");
    }
}

void Tracker::reset() {
    tracks_.clear();
    next_id_ = 1;
    last_seen_frame_ = 0;
    started_ = false;
}

Track Tracker::snapshot(const Entry& entry) const {
    Track t;
    t.id = entry.id;
    t.state = entry.state;
    t.kstate = entry.kstate;
    t.feature = entry.feature;
    t.score = entry.score;
    t.start_frame = entry.start_frame;
    t.last_frame = entry.last_frame;
    return t;
}

void Tracker::apply_match(Entry& entry, const Detection& det,
                          const std::vector<EmbeddingVector>* embeddings, int frame) {
    entry.kstate = filter_.update(entry.kstate, det.box);
    entry.score = det.score;
    entry.last_frame = frame;

    if (config_.with_reid && embeddings && det.embedding_ref) {
        const auto& feat = (*embeddings)[static_cast<std::size_t>(*det.embedding_ref)];
        if (entry.feature) {
            const double a = config_.ema_alpha;
            *entry.feature = normalize_embedding(a * (*entry.feature) + (1.0 - a) * feat);
        } else {
            entry.feature = feat;
        }
    }
}

CostMatrix Tracker::first_stage_cost(const std::vector<Entry*>& tracks,
                                     const std::vector<Detection>& dets,
                                     const std::vector<EmbeddingVector>* embeddings,
                                     bool gate) const {
    std::vector<BoundingBox> track_boxes;
    track_boxes.reserve(tracks.size());
    for (const Entry* t : tracks) track_boxes.push_back(t->kstate.box());

    std::vector<BoundingBox> det_boxes;
    det_boxes.reserve(dets.size());
    for (const auto& d : dets) det_boxes.push_back(d.box);

    CostMatrix cost = iou_cost(track_boxes, det_boxes);

    if (config_.with_reid && embeddings) {
        CostMatrix emb(cost.rows(), cost.cols());
        for (Eigen::Index i = 0; i < cost.rows(); ++i) {
            for (Eigen::Index j = 0; j < cost.cols(); ++j) {
                const auto& ref = dets[j].embedding_ref;
                if (tracks[i]->feature && ref) {
                    const double cosine =
                        tracks[i]->feature->dot((*embeddings)[static_cast<std::size_t>(*ref)]);
                    emb(i, j) = std::clamp((1.0 - cosine) / 2.0, 0.0, 1.0);
                } else {
                    emb(i, j) = 1.0; // no appearance evidence for this pair
                }
            }
        }
        cost = fuse_costs(cost, emb, config_.proximity_thresh, config_.appearance_thresh);
    }

    if (gate) {
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            const auto distances = filter_.gating_distance(tracks[i]->kstate, det_boxes);
            for (std::size_t j = 0; j < distances.size(); ++j) {
                if (distances[j] > KalmanFilter::kGatingThreshold) {
                    cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        kForbiddenCost;
                }
            }
        }
    }
    return cost;
}

Tracker::StepOutput Tracker::step(int frame,
                                  const std::vector<Detection>& detections,
                                  const std::vector<EmbeddingVector>* embeddings,
                                  const std::optional<AffineTransform>& affine) {
    if (started_ && frame <= last_seen_frame_) {
        throw std::invalid_argument("step: frame indices must be strictly increasing (got " +
                                    std::to_string(frame) + " after " +
                                    std::to_string(last_seen_frame_) + ")");
    }
    if (config_.with_reid && !embeddings) {
        throw std::invalid_argument("step: with_reid is set but no embedding table supplied");
    }
    if (!config_.with_reid && embeddings) {
        throw std::invalid_argument("step: embedding table supplied but with_reid is off");
    }
    if (embeddings) {
        for (const auto& d : detections) {
            if (d.embedding_ref &&
                (*d.embedding_ref < 0 ||
                 static_cast<std::size_t>(*d.embedding_ref) >= embeddings->size())) {
                throw std::invalid_argument("step: embedding_ref out of range");
            }
        }
    }
    const bool first_frame = !started_;
    started_ = true;
    last_seen_frame_ = frame;

    // (1) split detections by confidence
    std::vector<Detection> high, low;
    for (const auto& d : detections) {
        if (d.score >= config_.track_high_thresh) {
            high.push_back(d);
        } else if (d.score >= config_.track_low_thresh) {
            low.push_back(d);
        }
    }

    // (2) predict Tracked and Lost tracks; New tracks keep their initiated state
    std::vector<Entry*> pool;
    for (auto& t : tracks_) {
        if (t.state == TrackState::Tracked) pool.push_back(&t);
    }
    for (auto& t : tracks_) {
        if (t.state == TrackState::Lost) pool.push_back(&t);
    }
    for (Entry* t : pool) t->kstate = filter_.predict(t->kstate);

    // (3) camera motion compensation for every live track
    if (affine) {
        for (auto& t : tracks_) {
            if (t.state != TrackState::Removed) t.kstate = warp_state(t.kstate, *affine);
        }
    }

    // (4) first association: Tracked + Lost vs high detections, fused cost,
    //     chi-square motion gate
    std::vector<bool> pool_matched(pool.size(), false);
    std::vector<bool> high_matched(high.size(), false);
    {
        const CostMatrix cost = first_stage_cost(pool, high, embeddings, /*gate=*/true);
        const Assignment assign = linear_assignment(cost, config_.match_thresh);
        for (const auto& [ti, dj] : assign.matches) {
            Entry& track = *pool[ti];
            apply_match(track, high[dj], embeddings, frame);
            track.state = TrackState::Tracked; // re-activates Lost tracks
            pool_matched[ti] = true;
            high_matched[dj] = true;
        }
    }

    // (5) second association: still-unmatched previously-Tracked tracks vs
    //     low detections, IoU only
    {
        std::vector<Entry*> remaining;
        std::vector<std::size_t> remaining_idx;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!pool_matched[i] && pool[i]->state == TrackState::Tracked) {
                remaining.push_back(pool[i]);
                remaining_idx.push_back(i);
            }
        }
        std::vector<BoundingBox> track_boxes, det_boxes;
        for (const Entry* t : remaining) track_boxes.push_back(t->kstate.box());
        for (const auto& d : low) det_boxes.push_back(d.box);

        const Assignment assign =
            linear_assignment(iou_cost(track_boxes, det_boxes), config_.second_match_thresh);
        for (const auto& [ti, dj] : assign.matches) {
            Entry& track = *remaining[ti];
            apply_match(track, low[dj], embeddings, frame);
            track.state = TrackState::Tracked;
            pool_matched[remaining_idx[ti]] = true;
        }
    }

    // confirm New tracks against first-stage leftovers; unmatched New are dropped
    {
        std::vector<Entry*> unconfirmed;
        for (auto& t : tracks_) {
            if (t.state == TrackState::New) unconfirmed.push_back(&t);
        }
        std::vector<Detection> leftover;
        std::vector<std::size_t> leftover_idx;
        for (std::size_t j = 0; j < high.size(); ++j) {
            if (!high_matched[j]) {
                leftover.push_back(high[j]);
                leftover_idx.push_back(j);
            }
        }
        const CostMatrix cost = first_stage_cost(unconfirmed, leftover, embeddings, /*gate=*/false);
        const Assignment assign = linear_assignment(cost, kConfirmMatchThresh);
        std::vector<bool> confirmed(unconfirmed.size(), false);
        for (const auto& [ti, dj] : assign.matches) {
            Entry& track = *unconfirmed[ti];
            apply_match(track, leftover[dj], embeddings, frame);
            track.state = TrackState::Tracked;
            confirmed[ti] = true;
            high_matched[leftover_idx[dj]] = true;
        }
        for (std::size_t i = 0; i < unconfirmed.size(); ++i) {
            if (!confirmed[i]) unconfirmed[i]->state = TrackState::Removed;
        }
    }

    // (6) unmatched Tracked tracks become Lost
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!pool_matched[i] && pool[i]->state == TrackState::Tracked) {
            pool[i]->state = TrackState::Lost;
        }
    }

    // (7) leftover high detections above the new-track threshold spawn tracks
    for (std::size_t j = 0; j < high.size(); ++j) {
        if (high_matched[j] || high[j].score < config_.new_track_thresh) continue;
        Entry entry;
        entry.id = next_id_++;
        entry.state = first_frame ? TrackState::Tracked : TrackState::New;
        entry.kstate = filter_.initiate(high[j].box);
        entry.score = high[j].score;
        entry.start_frame = frame;
        entry.last_frame = frame;
        if (config_.with_reid && embeddings && high[j].embedding_ref) {
            entry.feature = (*embeddings)[static_cast<std::size_t>(*high[j].embedding_ref)];
        }
        tracks_.push_back(std::move(entry));
    }

    // (8) lost tracks beyond the buffer are removed for good
    for (auto& t : tracks_) {
        if (t.state == TrackState::Lost && frame - t.last_frame > config_.track_buffer) {
            t.state = TrackState::Removed;
        }
    }

    // (10) outputs
    StepOutput out;
    for (const auto& t : tracks_) {
        if (t.state == TrackState::Tracked && area(t.kstate.box()) > config_.min_box_area) {
            out.online.push_back(snapshot(t));
        } else if (t.state == TrackState::Lost) {
            out.lost.push_back(snapshot(t));
        }
    }

    std::erase_if(tracks_, [](const Entry& t) { return t.state == TrackState::Removed; });
    return out;
}

} // namespace uavtrack
