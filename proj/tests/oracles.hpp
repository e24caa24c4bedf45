#pragma once

// Independent reference evaluators used by the unit and acceptance suites.
// These deliberately avoid the library's metric implementations: scores are
// computed with direct scalar arithmetic and matchings by exhaustive
// enumeration, so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "uavtrack/geometry.hpp"
#include "uavtrack/metrics.hpp"

namespace oracle {

// IoU recomputed locally (interval overlap form) so this file does not lean
// on the implementation under test.
inline double box_iou(const uavtrack::BoundingBox& a, const uavtrack::BoundingBox& b) {
    const double ox = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
    const double oy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
    if (ox <= 0.0 || oy <= 0.0) return 0.0;
    const double inter = ox * oy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// Direct transliteration of the SOT accuracy formula:
//   acc = sum_t [IoU_t * d_t + p_t * (1 - d_t)] / T - 0.2 * (sum p_t * d_t / T*)^0.3
// with d_t = [v_t > 0], p_t = [prediction empty], T* = sum d_t (penalty 0 when T* = 0).
inline double sot_accuracy_direct(const std::vector<uavtrack::SotFrameRecord>& records) {
    const double T = static_cast<double>(records.size());
    double first = 0.0, penalty_numer = 0.0, t_star = 0.0;
    for (const auto& r : records) {
        const double d = r.v > 0 ? 1.0 : 0.0;
        const double p = r.pred ? 0.0 : 1.0;
        const double iou_t = (r.pred && r.gt) ? box_iou(*r.pred, *r.gt) : 0.0;
        first += iou_t * d + p * (1.0 - d);
        penalty_numer += p * d;
        t_star += d;
    }
    double penalty = 0.0;
    if (t_star > 0.0) penalty = 0.2 * std::pow(penalty_numer / t_star, 0.3);
    return first / T - penalty;
}

// Brute-force CLEAR matcher for small frames: previous correspondences that
// still overlap persist; the remainder is matched by enumerating every
// partial pairing with IoU >= thresh, preferring more matches, then lower
// total (1 - IoU) cost, then lexicographic order.
struct ClearOracleCounts {
    long long fp = 0, fn = 0, ids = 0, gt = 0;
};

inline void enumerate_pairings(const std::vector<std::vector<double>>& iou_grid,
                               double thresh, std::size_t gi,
                               std::vector<int>& current, std::vector<bool>& pred_used,
                               std::vector<std::pair<int, double>>& best) {
    const std::size_t n_gt = iou_grid.size();
    if (gi == n_gt) {
        int count = 0;
        double cost = 0.0;
        for (std::size_t g = 0; g < n_gt; ++g) {
            if (current[g] >= 0) {
                ++count;
                cost += 1.0 - iou_grid[g][current[g]];
            }
        }
        if (count > best[0].first ||
            (count == best[0].first && cost < best[0].second - 1e-15)) {
            best[0] = {count, cost};
            best.resize(1);
            for (std::size_t g = 0; g < n_gt; ++g) best.push_back({current[g], 0.0});
        }
        return;
    }
    current[gi] = -1;
    enumerate_pairings(iou_grid, thresh, gi + 1, current, pred_used, best);
    for (std::size_t p = 0; p < iou_grid[gi].size(); ++p) {
        if (pred_used[p] || iou_grid[gi][p] < thresh) continue;
        pred_used[p] = true;
        current[gi] = static_cast<int>(p);
        enumerate_pairings(iou_grid, thresh, gi + 1, current, pred_used, best);
        pred_used[p] = false;
        current[gi] = -1;
    }
}

inline ClearOracleCounts clear_match_brute_force(
    const std::vector<std::vector<uavtrack::IdBox>>& gt_frames,
    const std::vector<std::vector<uavtrack::IdBox>>& pred_frames, double thresh = 0.5) {
    ClearOracleCounts counts;
    std::map<int, int> correspondence, last_match;
    const std::size_t n_frames = std::max(gt_frames.size(), pred_frames.size());
    static const std::vector<uavtrack::IdBox> empty;

    for (std::size_t f = 0; f < n_frames; ++f) {
        const auto& gts = f < gt_frames.size() ? gt_frames[f] : empty;
        const auto& preds = f < pred_frames.size() ? pred_frames[f] : empty;
        counts.gt += static_cast<long long>(gts.size());

        std::vector<bool> gt_used(gts.size(), false), pred_used(preds.size(), false);
        std::map<int, int> pairs;

        for (std::size_t g = 0; g < gts.size(); ++g) {
            const auto it = correspondence.find(gts[g].id);
            if (it == correspondence.end()) continue;
            for (std::size_t p = 0; p < preds.size(); ++p) {
                if (pred_used[p] || preds[p].id != it->second) continue;
                if (box_iou(gts[g].box, preds[p].box) >= thresh) {
                    gt_used[g] = true;
                    pred_used[p] = true;
                    pairs[gts[g].id] = preds[p].id;
                }
                break;
            }
        }

        std::vector<int> free_gt, free_pred;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gt_used[g]) free_gt.push_back(static_cast<int>(g));
        }
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (!pred_used[p]) free_pred.push_back(static_cast<int>(p));
        }
        if (!free_gt.empty() && !free_pred.empty()) {
            std::vector<std::vector<double>> grid(free_gt.size(),
                                                  std::vector<double>(free_pred.size()));
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                for (std::size_t b = 0; b < free_pred.size(); ++b) {
                    grid[a][b] = box_iou(gts[free_gt[a]].box, preds[free_pred[b]].box);
                }
            }
            std::vector<int> current(free_gt.size(), -1);
            std::vector<bool> used(free_pred.size(), false);
            std::vector<std::pair<int, double>> best{
                {-1, std::numeric_limits<double>::infinity()}};
            enumerate_pairings(grid, thresh, 0, current, used, best);
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                const int b = best[a + 1].first;
                if (b >= 0) {
                    gt_used[free_gt[a]] = true;
                    pred_used[free_pred[b]] = true;
                    pairs[gts[free_gt[a]].id] = preds[free_pred[b]].id;
                }
            }
        }

        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gt_used[g]) ++counts.fn;
        }
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (!pred_used[p]) ++counts.fp;
        }
        for (const auto& [gid, pid] : pairs) {
            const auto it = last_match.find(gid);
            if (it != last_match.end() && it->second != pid) ++counts.ids;
            last_match[gid] = pid;
            correspondence[gid] = pid;
        }
    }
    return counts;
}

} // namespace oracle
