#include "uavtrack/sot.hpp"

#include <algorithm>

namespace uavtrack {

std::vector<SotRecord> sot_select(const std::vector<FrameTracks>& frames,
                                  const SotOptions& options) {
    std::vector<SotRecord> report;
    report.reserve(frames.size());

    BoundingBox last_box = options.initial_box.value_or(
        BoundingBox{options.frame_width / 2.0 - 0.5, options.frame_height / 2.0 - 0.5, 1.0, 1.0});
    int last_id = 0;

    for (const auto& ft : frames) {
        SotRecord rec;
        rec.frame = ft.frame;

        const Track* best = nullptr;
        for (const auto& t : ft.online) {
            if (!best || t.score > best->score || (t.score == best->score && t.id < best->id)) {
                best = &t;
            }
        }

        if (best) {
            rec.box = best->box();
            rec.source = SotSource::Online;
            rec.reported_id = best->id;
        } else {
            const Track* lost = nullptr;
            if (last_id > 0) {
                for (const auto& t : ft.lost) {
                    if (t.id == last_id && ft.frame - t.last_frame <= options.track_buffer) {
                        lost = &t;
                        break;
                    }
                }
            }
            if (lost) {
                rec.box = lost->box();
                rec.source = SotSource::LostPrediction;
                rec.reported_id = lost->id;
            } else {
                rec.box = last_box;
                rec.source = SotSource::LastKnown;
                rec.reported_id = last_id;
            }
        }

        last_box = rec.box;
        if (rec.source != SotSource::LastKnown) last_id = rec.reported_id;
        report.push_back(rec);
    }
    return report;
}

} // namespace uavtrack
