#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

#include "uavtrack/geometry.hpp"

namespace uavtrack {

/// Appearance feature. Stored unit-normalized; normalize_embedding is the
/// single entry point that enforces this.
using EmbeddingVector = Eigen::VectorXd;

/// Returns v scaled to unit Euclidean norm. Throws std::invalid_argument on
/// zero or non-finite input.
EmbeddingVector normalize_embedding(const EmbeddingVector& v);

/// Association workspace: rows are tracks, columns are detections. Entries
/// are costs in [0,1] or kForbiddenCost for pairs excluded by a gate.
using CostMatrix = Eigen::MatrixXd;

inline constexpr double kForbiddenCost = std::numeric_limits<double>::infinity();

/// Entry (i,j) = 1 - iou(tracks[i], dets[j]).
CostMatrix iou_cost(const std::vector<BoundingBox>& tracks, const std::vector<BoundingBox>& dets);

/// Entry (i,j) = (1 - cosine similarity)/2, clipped to [0,1]. Throws on
/// dimension mismatch, naming both dimensions.
CostMatrix embedding_cost(const std::vector<EmbeddingVector>& track_feats,
                          const std::vector<EmbeddingVector>& det_feats);

/// BoT-SORT style min-fusion of motion and appearance costs: the appearance
/// entry is disabled (set to 1) where the boxes are too far apart
/// (iou cost above proximity_thresh) or the appearance itself is too weak
/// (above appearance_thresh); the fused cost is the entrywise minimum of the
/// IoU cost and the gated appearance cost.
CostMatrix fuse_costs(const CostMatrix& iou_c, const CostMatrix& emb_c,
                      double proximity_thresh, double appearance_thresh);

struct Assignment {
    std::vector<std::pair<int, int>> matches; // (row, col), sorted by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
};

/// Minimum-total-cost one-to-one assignment (Hungarian algorithm with
/// potentials, exact optimum). The full problem is solved first; matched
/// pairs with cost above match_thresh (or forbidden) are then dropped and
/// reported unmatched. Equal-cost solutions are canonicalized toward the
/// lexicographically smallest (row, col) sequence.
Assignment linear_assignment(const CostMatrix& cost, double match_thresh);

} // namespace uavtrack
