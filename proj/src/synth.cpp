#include "uavtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavtrack/rng.hpp"

namespace uavtrack {

namespace {

// substream keys, one region per concern so draws stay independent
constexpr std::uint64_t kTrajKey = 0x10000;
constexpr std::uint64_t kDetKey = 0x20000;
constexpr std::uint64_t kEmbBaseKey = 0x30000;
constexpr std::uint64_t kEmbNoiseKey = 0x40000;
constexpr std::uint64_t kFpKey = 0x50000;

double reflect(double pos, double lo, double hi, double& vel) {
    // bounce until inside; spans are far larger than per-frame motion
    while (pos < lo || pos > hi) {
        if (pos < lo) {
            pos = 2.0 * lo - pos;
            vel = -vel;
        } else {
            pos = 2.0 * hi - pos;
            vel = -vel;
        }
    }
    return pos;
}

EmbeddingVector random_unit_vector(SplitMix64& rng, int dim) {
    EmbeddingVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
    return normalize_embedding(v);
}

} // namespace

Eigen::Vector2d drift_offset(const ScenarioConfig& config, int frame) {
    if (config.drift_amplitude == 0.0) return Eigen::Vector2d::Zero();
    const double phase = 2.0 * std::numbers::pi * (frame - 1) / config.drift_period;
    return {config.drift_amplitude * std::sin(phase),
            config.drift_amplitude * (1.0 - std::cos(phase))};
}

std::vector<std::vector<BoundingBox>> generate_trajectories(const ScenarioConfig& config) {
    if (config.frames < 1) {
        throw std::invalid_argument("scenario needs at least one frame");
    }
    const SplitMix64 root(config.seed);
    std::vector<std::vector<BoundingBox>> trajectories(config.objects);

    const double margin = std::abs(config.drift_amplitude) * 2.0 + 2.0;
    for (int obj = 0; obj < config.objects; ++obj) {
        SplitMix64 rng = root.fork(kTrajKey + static_cast<std::uint64_t>(obj));
        const double w = rng.next_range(config.min_width, config.max_width);
        const double h = rng.next_range(config.min_height, config.max_height);
        const double lo_x = margin, hi_x = config.width - w - margin;
        const double lo_y = margin, hi_y = config.height - h - margin;
        if (hi_x <= lo_x || hi_y <= lo_y) {
            throw std::invalid_argument("frame too small for object size plus margins");
        }
        double x = rng.next_range(lo_x, hi_x);
        double y = rng.next_range(lo_y, hi_y);
        double vx = rng.next_range(-config.max_speed, config.max_speed);
        double vy = rng.next_range(-config.max_speed, config.max_speed);

        auto& track = trajectories[obj];
        track.reserve(config.frames);
        for (int f = 0; f < config.frames; ++f) {
            if (f > 0) {
                x = reflect(x + vx, lo_x, hi_x, vx);
                y = reflect(y + vy, lo_y, hi_y, vy);
            }
            track.push_back({x, y, w, h});
        }
    }
    return trajectories;
}

SequenceBundle generate(const ScenarioConfig& config) {
    const auto trajectories = generate_trajectories(config);
    const SplitMix64 root(config.seed);

    SequenceBundle bundle;
    bundle.name = config.name;
    bundle.frame_count = config.frames;
    bundle.width = config.width;
    bundle.height = config.height;
    bundle.embedding_dim = config.embedding_dim;
    bundle.detections.resize(config.frames);
    bundle.gt = std::vector<std::vector<MotRow>>(config.frames);
    if (config.embedding_dim > 0) bundle.embeddings = EmbeddingTable{};

    std::vector<EmbeddingVector> base_embeddings;
    std::vector<SplitMix64> det_rngs, emb_rngs;
    for (int obj = 0; obj < config.objects; ++obj) {
        SplitMix64 base_rng = root.fork(kEmbBaseKey + static_cast<std::uint64_t>(obj));
        base_embeddings.push_back(random_unit_vector(base_rng, config.embedding_dim));
        det_rngs.push_back(root.fork(kDetKey + static_cast<std::uint64_t>(obj)));
        emb_rngs.push_back(root.fork(kEmbNoiseKey + static_cast<std::uint64_t>(obj)));
    }
    SplitMix64 fp_rng = root.fork(kFpKey);

    auto occluded = [&](int obj, int frame) {
        return std::any_of(config.occlusions.begin(), config.occlusions.end(),
                           [&](const OcclusionWindow& w) {
                               return w.object == obj && frame >= w.from && frame <= w.to;
                           });
    };

    for (int f = 1; f <= config.frames; ++f) {
        const Eigen::Vector2d drift = drift_offset(config, f);
        auto& dets = bundle.detections[f - 1];
        auto& gt_rows = (*bundle.gt)[f - 1];

        for (int obj = 0; obj < config.objects; ++obj) {
            const BoundingBox& world = trajectories[obj][f - 1];
            const BoundingBox cam{world.x + drift.x(), world.y + drift.y(), world.w, world.h};

            MotRow row;
            row.id = obj + 1;
            row.box = cam;
            row.score = 1.0;
            row.cls = 1;
            row.visibility = 1;
            gt_rows.push_back(row);

            auto& rng = det_rngs[obj];
            const bool miss = rng.next_double() < config.miss_rate;
            const double jx = rng.next_gaussian() * config.position_jitter;
            const double jy = rng.next_gaussian() * config.position_jitter;
            const double jw = rng.next_gaussian() * config.size_jitter;
            const double jh = rng.next_gaussian() * config.size_jitter;
            const double score = rng.next_range(config.min_score, config.max_score);
            if (miss || occluded(obj, f)) continue;

            Detection det;
            det.box = {cam.x + jx, cam.y + jy, std::max(0.5, cam.w + jw),
                       std::max(0.5, cam.h + jh)};
            det.score = score;

            if (config.embedding_dim > 0) {
                EmbeddingVector noisy = base_embeddings[obj];
                for (int i = 0; i < config.embedding_dim; ++i) {
                    noisy(i) += emb_rngs[obj].next_gaussian() * config.embedding_noise;
                }
                (*bundle.embeddings)[{f, static_cast<int>(dets.size())}] =
                    normalize_embedding(noisy);
            }
            dets.push_back(det);
        }

        const int n_fp = fp_rng.next_poisson(config.fp_rate);
        for (int k = 0; k < n_fp; ++k) {
            Detection fp;
            const double w = fp_rng.next_range(config.min_width, config.max_width);
            const double h = fp_rng.next_range(config.min_height, config.max_height);
            fp.box = {fp_rng.next_range(0.0, config.width - w),
                      fp_rng.next_range(0.0, config.height - h), w, h};
            fp.score = fp_rng.next_range(0.1, 0.9);
            if (config.embedding_dim > 0) {
                (*bundle.embeddings)[{f, static_cast<int>(dets.size())}] =
                    random_unit_vector(fp_rng, config.embedding_dim);
            }
            dets.push_back(fp);
        }
    }

    if (config.drift_amplitude != 0.0) {
        std::map<int, AffineTransform> gmc;
        for (int f = 2; f <= config.frames; ++f) {
            AffineTransform t;
            t.translation = drift_offset(config, f) - drift_offset(config, f - 1);
            gmc[f] = t;
        }
        bundle.gmc = std::move(gmc);
    }
    return bundle;
}

} // namespace uavtrack
