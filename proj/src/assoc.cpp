#include "uavtrack/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavtrack {

namespace {

// Stand-in for forbidden entries while solving; large enough to dominate any
// sum of real costs (each <= 1) yet far from double overflow.
constexpr double kBigCost = 1e9;

/// Hungarian algorithm (Jonker-Volgenant style shortest augmenting paths
/// with dual potentials), minimization, n rows <= m cols. Returns row -> col.
/// Deterministic: columns are scanned in ascending order.
std::vector<int> solve_rectangular(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> way(m + 1, 0), col_match(m + 1, 0); // col_match[j] = row occupying col j (1-based)

    for (int i = 1; i <= n; ++i) {
        col_match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = col_match[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = -1;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[col_match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_match[j0] != 0);
        do {
            const int j1 = way[j0];
            col_match[j0] = col_match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (col_match[j] > 0) row_to_col[col_match[j] - 1] = j - 1;
    }
    return row_to_col;
}

/// Swaps matched columns between row pairs whenever the exchange keeps the
/// exact pair-sum equal and yields a lexicographically smaller sequence.
void canonicalize_ties(const Eigen::MatrixXd& a, std::vector<std::pair<int, int>>& matches) {
    bool changed = true;
    int guard = static_cast<int>(matches.size()) + 2;
    while (changed && guard-- > 0) {
        changed = false;
        for (std::size_t i = 0; i < matches.size(); ++i) {
            for (std::size_t j = i + 1; j < matches.size(); ++j) {
                auto& [r1, c1] = matches[i];
                auto& [r2, c2] = matches[j];
                if (c2 >= c1) continue;
                const double keep = a(r1, c1) + a(r2, c2);
                const double swap = a(r1, c2) + a(r2, c1);
                if (swap == keep) {
                    std::swap(c1, c2);
                    changed = true;
                }
            }
        }
    }
}

} // namespace

EmbeddingVector normalize_embedding(const EmbeddingVector& v) {
    if (!v.allFinite()) {
        throw std::invalid_argument("embedding has non-finite entries");
    }
    const double norm = v.norm();
    if (norm <= 0.0) {
        throw std::invalid_argument("cannot normalize zero embedding");
    }
    // already-unit vectors pass through bit-exact, keeping file round-trips lossless
    if (std::abs(norm - 1.0) < 1e-12) return v;
    return v / norm;
}

CostMatrix iou_cost(const std::vector<BoundingBox>& tracks,
                    const std::vector<BoundingBox>& dets) {
    CostMatrix cost(tracks.size(), dets.size());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            cost(i, j) = 1.0 - iou(tracks[i], dets[j]);
        }
    }
    return cost;
}

CostMatrix embedding_cost(const std::vector<EmbeddingVector>& track_feats,
                          const std::vector<EmbeddingVector>& det_feats) {
    CostMatrix cost(track_feats.size(), det_feats.size());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            if (track_feats[i].size() != det_feats[j].size()) {
                throw std::invalid_argument(
                    "embedding dimension mismatch: track has " +
                    std::to_string(track_feats[i].size()) + ", detection has " +
                    std::to_string(det_feats[j].size()));
            }
            const double cosine = track_feats[i].dot(det_feats[j]);
            cost(i, j) = std::clamp((1.0 - cosine) / 2.0, 0.0, 1.0);
        }
    }
    return cost;
}

CostMatrix fuse_costs(const CostMatrix& iou_c, const CostMatrix& emb_c,
                      double proximity_thresh, double appearance_thresh) {
    if (iou_c.rows() != emb_c.rows() || iou_c.cols() != emb_c.cols()) {
        throw std::invalid_argument("fuse_costs: shape mismatch");
    }
    CostMatrix fused(iou_c.rows(), iou_c.cols());
    for (Eigen::Index i = 0; i < fused.rows(); ++i) {
        for (Eigen::Index j = 0; j < fused.cols(); ++j) {
            double emb = emb_c(i, j);
            if (iou_c(i, j) > proximity_thresh || emb > appearance_thresh) {
                emb = 1.0;
            }
            fused(i, j) = std::min(iou_c(i, j), emb);
        }
    }
    return fused;
}

Assignment linear_assignment(const CostMatrix& cost, double match_thresh) {
    Assignment result;
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());

    if (rows == 0 || cols == 0) {
        for (int i = 0; i < rows; ++i) result.unmatched_rows.push_back(i);
        for (int j = 0; j < cols; ++j) result.unmatched_cols.push_back(j);
        return result;
    }

    Eigen::MatrixXd solvable = cost;
    for (Eigen::Index i = 0; i < solvable.rows(); ++i) {
        for (Eigen::Index j = 0; j < solvable.cols(); ++j) {
            if (!std::isfinite(solvable(i, j))) solvable(i, j) = kBigCost;
        }
    }

    std::vector<std::pair<int, int>> assigned;
    if (rows <= cols) {
        const auto row_to_col = solve_rectangular(solvable);
        for (int i = 0; i < rows; ++i) {
            if (row_to_col[i] >= 0) assigned.emplace_back(i, row_to_col[i]);
        }
    } else {
        const auto col_to_row = solve_rectangular(solvable.transpose());
        for (int j = 0; j < cols; ++j) {
            if (col_to_row[j] >= 0) assigned.emplace_back(col_to_row[j], j);
        }
        std::sort(assigned.begin(), assigned.end());
    }

    canonicalize_ties(solvable, assigned);
    std::sort(assigned.begin(), assigned.end());

    std::vector<bool> row_matched(rows, false), col_matched(cols, false);
    for (const auto& [r, c] : assigned) {
        if (cost(r, c) <= match_thresh) { // forbidden entries are infinite, never kept
            result.matches.emplace_back(r, c);
            row_matched[r] = true;
            col_matched[c] = true;
        }
    }
    for (int i = 0; i < rows; ++i) {
        if (!row_matched[i]) result.unmatched_rows.push_back(i);
    }
    for (int j = 0; j < cols; ++j) {
        if (!col_matched[j]) result.unmatched_cols.push_back(j);
    }
    return result;
}

} // namespace uavtrack
