#include "uavtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "uavtrack/assoc.hpp"

namespace uavtrack {

SotScore sot_accuracy(const std::vector<SotFrameRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("sot_accuracy: need at least one record");
    }

    const int total = static_cast<int>(records.size());
    int visible = 0;
    double first_sum = 0.0;
    double penalty_hits = 0.0; // frames with empty prediction on a visible target

    for (const auto& r : records) {
        const bool target_visible = r.v > 0;
        if (target_visible && !r.gt) {
            throw std::invalid_argument("sot_accuracy: visible frame without a ground-truth box");
        }
        const int p = r.pred ? 0 : 1;
        double iou_t = 0.0;
        if (r.pred && r.gt) iou_t = iou(*r.pred, *r.gt);

        if (target_visible) {
            ++visible;
            first_sum += iou_t;
            penalty_hits += p;
        } else {
            first_sum += p;
        }
    }

    SotScore score;
    score.frames = total;
    score.visible_frames = visible;
    score.mean_iou_term = first_sum / total;
    score.penalty_term =
        visible > 0 ? 0.2 * std::pow(penalty_hits / visible, 0.3) : 0.0;
    score.acc = score.mean_iou_term - score.penalty_term;
    return score;
}

ClearCounts clear_match(const std::vector<std::vector<IdBox>>& gt_frames,
                        const std::vector<std::vector<IdBox>>& pred_frames,
                        double iou_thresh) {
    const std::size_t n_frames = std::max(gt_frames.size(), pred_frames.size());
    ClearCounts counts;

    std::map<int, int> correspondence; // gt id -> pred id, persisted across frames
    std::map<int, int> last_match;     // gt id -> last matched pred id, for IDS

    static const std::vector<IdBox> kEmpty;
    for (std::size_t f = 0; f < n_frames; ++f) {
        const auto& gts = f < gt_frames.size() ? gt_frames[f] : kEmpty;
        const auto& preds = f < pred_frames.size() ? pred_frames[f] : kEmpty;

        std::set<int> gt_ids, pred_ids;
        for (const auto& g : gts) {
            if (!gt_ids.insert(g.id).second) {
                throw std::invalid_argument("clear_match: duplicate GT id " +
                                            std::to_string(g.id) + " in frame " +
                                            std::to_string(f + 1));
            }
        }
        for (const auto& p : preds) {
            if (!pred_ids.insert(p.id).second) {
                throw std::invalid_argument("clear_match: duplicate prediction id " +
                                            std::to_string(p.id) + " in frame " +
                                            std::to_string(f + 1));
            }
        }
        counts.gt += static_cast<long long>(gts.size());

        std::vector<bool> gt_used(gts.size(), false), pred_used(preds.size(), false);
        std::map<int, int> frame_pairs; // gt id -> pred id matched this frame

        // keep previous-frame correspondences that still overlap
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            const auto it = correspondence.find(gts[gi].id);
            if (it == correspondence.end()) continue;
            for (std::size_t pj = 0; pj < preds.size(); ++pj) {
                if (pred_used[pj] || preds[pj].id != it->second) continue;
                if (iou(gts[gi].box, preds[pj].box) >= iou_thresh) {
                    gt_used[gi] = true;
                    pred_used[pj] = true;
                    frame_pairs[gts[gi].id] = preds[pj].id;
                }
                break;
            }
        }

        // match the remainder by minimum 1 - IoU, gated at the threshold
        std::vector<std::size_t> free_gt, free_pred;
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (!gt_used[gi]) free_gt.push_back(gi);
        }
        for (std::size_t pj = 0; pj < preds.size(); ++pj) {
            if (!pred_used[pj]) free_pred.push_back(pj);
        }
        if (!free_gt.empty() && !free_pred.empty()) {
            CostMatrix cost(free_gt.size(), free_pred.size());
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                for (std::size_t b = 0; b < free_pred.size(); ++b) {
                    const double overlap = iou(gts[free_gt[a]].box, preds[free_pred[b]].box);
                    cost(a, b) = overlap >= iou_thresh ? 1.0 - overlap : kForbiddenCost;
                }
            }
            const Assignment assign = linear_assignment(cost, 1.0 - iou_thresh);
            for (const auto& [a, b] : assign.matches) {
                gt_used[free_gt[a]] = true;
                pred_used[free_pred[b]] = true;
                frame_pairs[gts[free_gt[a]].id] = preds[free_pred[b]].id;
            }
        }

        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (!gt_used[gi]) ++counts.fn;
        }
        for (std::size_t pj = 0; pj < preds.size(); ++pj) {
            if (!pred_used[pj]) ++counts.fp;
        }

        for (const auto& [gt_id, pred_id] : frame_pairs) {
            const auto it = last_match.find(gt_id);
            if (it != last_match.end() && it->second != pred_id) ++counts.ids;
            last_match[gt_id] = pred_id;
        }

        // correspondences persist only for GT matched this frame; unmatched
        // GT keeps its previous correspondence candidate for later frames
        for (const auto& [gt_id, pred_id] : frame_pairs) {
            correspondence[gt_id] = pred_id;
        }
    }
    return counts;
}

double mota(const ClearCounts& counts) {
    if (counts.gt <= 0) {
        throw std::invalid_argument("mota: undefined for GT = 0");
    }
    return 1.0 - static_cast<double>(counts.fp + counts.fn + counts.ids) /
                     static_cast<double>(counts.gt);
}

double average_mota(const std::vector<double>& per_sequence) {
    if (per_sequence.empty()) {
        throw std::invalid_argument("average_mota: empty input");
    }
    double sum = 0.0;
    for (double v : per_sequence) sum += v;
    return sum / static_cast<double>(per_sequence.size());
}

} // namespace uavtrack
